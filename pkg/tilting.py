"""
R+-Tilting
Rigidity, basic R+-tilting objects and their complements in the cluster
category, and the expansion to classical cluster-tilting objects.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set

from action import act, gamma_sets, generation_pair
from armodel import ARModel, Indec
from chebrings import chebyshev_ring, maximality_element

logger = logging.getLogger(__name__)


class TiltingError(ValueError):
    """Raised for objects outside the generator set"""


def cluster_gamma(model: ARModel, name: str) -> List[Indec]:
    sets = gamma_sets(model, 'cluster')
    try:
        return sets[name]
    except KeyError:
        raise TiltingError(f"unknown generator set {name!r}; expected one of {sorted(sets)}") from None


def _check_members(T: Iterable[Indec], gamma: Sequence[Indec]):
    members = set(gamma)
    for x in T:
        if x.layer != 'cluster':
            raise TiltingError(f"{x} is not a cluster object")
        if x not in members:
            raise TiltingError(f"{x} is not a member of the generator set")


def column_objects(model: ARModel, column: int) -> List[Indec]:
    """All cluster objects of one cyclic column"""
    column %= model.cluster_columns()
    return [x for x in model.enumerate_indecs('cluster') if model.column(x) == column]


def cyclic_distance(model: ARModel, x: Indec, y: Indec) -> int:
    size = model.cluster_columns()
    d = (model.column(x) - model.column(y)) % size
    return min(d, size - d)


# -------------------------
# Rigidity
# -------------------------
@lru_cache(maxsize=None)
def rplus_closure(model: ARModel, x: Indec) -> FrozenSet[Indec]:
    """Objects R+-generated by x: the column of x when x generates it"""
    out = {x}
    for y in column_objects(model, model.column(x)):
        if generation_pair(model, x, y) is not None:
            out.add(y)
    return frozenset(out)


def is_rigid(model: ARModel, objects: Iterable[Indec]) -> bool:
    objects = list(objects)
    for a in objects:
        for b in objects:
            if model.cluster_ext1_dim(a, b):
                return False
    return True


def is_rplus_rigid(model: ARModel, T: Iterable[Indec]) -> bool:
    closure: Set[Indec] = set()
    for x in T:
        closure |= rplus_closure(model, x)
    return is_rigid(model, closure)


def is_rplus_tilting(model: ARModel, T: Iterable[Indec], gamma: Sequence[Indec]) -> bool:
    """Basic, R+-rigid and maximal among R+-rigid subsets of Γ"""
    T = list(T)
    _check_members(T, gamma)
    if len(set(T)) != len(T) or not T:
        return False
    if not is_rplus_rigid(model, T):
        return False
    for y in gamma:
        if y not in T and is_rplus_rigid(model, T + [y]):
            return False
    return True


def is_adjacent_pair(model: ARModel, T: Sequence[Indec]) -> bool:
    return len(T) == 2 and cyclic_distance(model, T[0], T[1]) == 1


def enumerate_tilting(model: ARModel, gamma: Sequence[Indec]) -> List[FrozenSet[Indec]]:
    """All basic R+-tilting objects: maximal cliques of the compatibility graph on Γ"""
    nodes = [x for x in gamma if is_rplus_rigid(model, [x])]
    compatible: Dict[Indec, Set[Indec]] = {x: set() for x in nodes}
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if is_rplus_rigid(model, [a, b]):
                compatible[a].add(b)
                compatible[b].add(a)

    found: List[FrozenSet[Indec]] = []

    def expand(clique: Set[Indec], candidates: Set[Indec], excluded: Set[Indec]):
        if not candidates and not excluded:
            found.append(frozenset(clique))
            return
        for v in list(candidates):
            expand(clique | {v}, candidates & compatible[v], excluded & compatible[v])
            candidates = candidates - {v}
            excluded = excluded | {v}

    expand(set(), set(nodes), set())
    # maximal cliques may still fail R+-rigidity as a whole
    out = [T for T in found if is_rplus_tilting(model, list(T), gamma)]
    return sorted(out, key=lambda T: sorted(model.column(x) for x in T))


def complements(model: ARModel, X: Indec, gamma: Sequence[Indec]) -> List[Indec]:
    """Members Y of Γ with X + Y basic R+-tilting"""
    _check_members([X], gamma)
    out = [Y for Y in gamma if Y != X and is_rplus_tilting(model, [X, Y], gamma)]
    return sorted(out, key=model.column)


def hat_expansion(model: ARModel, T: Iterable[Indec]) -> List[Indec]:
    """The union of the full columns of the summands"""
    out: List[Indec] = []
    for x in T:
        for y in column_objects(model, model.column(x)):
            if y not in out:
                out.append(y)
    return out


def is_cluster_tilting(model: ARModel, objects: Sequence[Indec]) -> bool:
    return len(set(objects)) == len(model.vertices) and is_rigid(model, objects)


def covers_columns(model: ARModel, T: Iterable[Indec]) -> bool:
    """act(r, X) fills the column of X for the maximality element r"""
    r = maximality_element(chebyshev_ring(model.folding.ftype))
    for x in T:
        support = set(act(model, r, x))
        if support != set(column_objects(model, model.column(x))):
            return False
    return True


# -------------------------
# Exchange walk
# -------------------------
def change_complement(model: ARModel, T: Sequence[Indec], slot: int, gamma: Sequence[Indec]) -> List[Indec]:
    """Replace the summand in an even (slot 0) or odd (slot 1) column by its other complement"""
    T = list(T)
    leaving = [x for x in T if model.column(x) % 2 == slot]
    if len(leaving) != 1:
        raise TiltingError(f"tilting object has no unique summand in slot [{slot}]")
    (old,) = leaving
    (kept,) = [x for x in T if x != old]
    options = [y for y in complements(model, kept, gamma) if y != old]
    if len(options) != 1:
        raise TiltingError(f"expected a unique new complement, found {len(options)}")
    return [kept, options[0]]


def leading_column(model: ARModel, T: Sequence[Indec]) -> int:
    """The column c of a tilting object occupying columns c and c+1 cyclically"""
    cols = sorted(model.column(x) for x in T)
    size = model.cluster_columns()
    return cols[0] if (cols[1] - cols[0]) % size == 1 else cols[1]


def exchange_period(model: ARModel, T: Sequence[Indec], gamma: Sequence[Indec], limit: int = 200) -> int:
    """Number of alternating complement changes until T returns"""
    start = frozenset(T)
    current = list(T)
    slot = leading_column(model, T) % 2
    for step in range(1, limit + 1):
        current = change_complement(model, current, slot, gamma)
        slot = 1 - slot
        if frozenset(current) == start:
            return step
    raise TiltingError("exchange walk did not close within the limit")


def tilted_orientation(model: ARModel, T: Sequence[Indec]) -> str:
    """'Q' when T starts in an even column, else 'Q^op'"""
    return 'Q' if leading_column(model, T) % 2 == 0 else 'Q^op'
