"""
Semiring Action
The action of the Chebyshev semiring on iso-classes of indecomposables,
generating pairs, the generator sets Γ and the Grothendieck module.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Matrix

from armodel import ARModel, Indec, positive_roots
from chebrings import ChebyshevRing, RingElt, chebyshev_ring, partial_cmp, rho_eval

logger = logging.getLogger(__name__)

IsoMultiset = Counter


class ActionError(RuntimeError):
    """Raised when a product cannot be matched to objects of a column"""


# -------------------------
# Labels
# -------------------------
def ring_of(model: ARModel) -> ChebyshevRing:
    return chebyshev_ring(model.folding.ftype)


def label(model: ARModel, x: Indec) -> RingElt:
    """Hat-ring label of an indecomposable: the basis element of its row"""
    return ring_of(model).vertex_element(x.vertex)


def _same_column(model: ARModel, x: Indec, vertex: str) -> Indec:
    if x.shifted_projective:
        return Indec(x.layer, vertex, shifted_projective=True)
    return Indec(x.layer, vertex, x.m, x.shift)


# -------------------------
# Action
# -------------------------
def act(model: ARModel, r: RingElt, x: Union[Indec, Counter]) -> Counter:
    """r · x as a multiset of indecomposables in the column of x"""
    ring = ring_of(model)
    if r.ring.ftype != ring.ftype:
        raise ValueError(f"{r} is not an element of the {ring.ftype} ring")
    if not ring.in_small_semiring(r):
        raise ValueError(f"{r} does not lie in the semiring of {ring.ftype}")
    if isinstance(x, Counter):
        out = Counter()
        for y, mult in x.items():
            for z, c in act(model, r, y).items():
                out[z] += c * mult
        return out

    product = ring.vertex_coords(r * label(model, x))
    parity = model.parity[x.vertex]
    out = Counter()
    for v, c in zip(ring.vertices, product):
        if c == 0:
            continue
        if c < 0 or model.parity[v] != parity:
            raise ActionError(f"{r} · {model.name(x)} has coefficient {c} at vertex {v} outside the column")
        out[_same_column(model, x, v)] += int(c)
    return out


def act_projection(model: ARModel, r: RingElt, x: Indec):
    """dimproj of r · x"""
    return model.dimproj(list(act(model, r, x).elements()))


# -------------------------
# Generation
# -------------------------
@dataclass(frozen=True)
class GenerationPair:
    r: RingElt
    r_prime: RingElt

    def difference(self) -> RingElt:
        return self.r - self.r_prime

    def __str__(self):
        return f"({self.r}, {self.r_prime})"


def _candidate_key(ring: ChebyshevRing, pair: Tuple[np.ndarray, np.ndarray]):
    r, rp = pair
    total = rho_eval(ring.from_small(r) + ring.from_small(rp))
    # lower basis elements first, larger coefficients on them first
    return total, tuple(-int(c) for c in np.concatenate([r, rp]))


def generation_pair(model: ARModel, M: Indec, N: Indec) -> Optional[GenerationPair]:
    """
    A pair (r, r') with r·M = r'·M + N, minimal under ρ(r + r'), or None.
    """
    if M.layer != N.layer or M.shift != N.shift or model.column(M) != model.column(N):
        return None
    ring = ring_of(model)
    small = ring.small_basis
    base = label(model, M)
    columns = [ring.vertex_coords(b * base) for b in small]
    A = np.stack(columns, axis=1)
    target = ring.vertex_coords(label(model, N))

    candidates = []
    try:
        solution, params = Matrix(A.tolist()).gauss_jordan_solve(Matrix(target.tolist()))
    except ValueError:
        return None
    if params.shape[0] == 0:
        if all(v.is_integer for v in solution):
            candidates.append(np.array([int(v) for v in solution], dtype=np.int64))
    else:
        for c in itertools.product((-1, 0, 1), repeat=len(small)):
            c = np.array(c, dtype=np.int64)
            if np.array_equal(A @ c, target):
                candidates.append(c)

    valid = []
    for c in candidates:
        r, rp = np.maximum(c, 0), np.maximum(-c, 0)
        try:
            lhs = act(model, ring.from_small(r), M)
            rhs = act(model, ring.from_small(rp), M)
        except ActionError:
            continue
        rhs[N] += 1
        if lhs == rhs:
            valid.append((r, rp))
    if not valid:
        return None
    r, rp = min(valid, key=lambda pair: _candidate_key(ring, pair))
    return GenerationPair(ring.from_small(r), ring.from_small(rp))


# -------------------------
# Generator sets
# -------------------------
def projective_row(model: ARModel, vertex: str, layer: str = 'module') -> List[Indec]:
    """The row containing P(vertex)"""
    p = model.projective(vertex)
    return [Indec(layer, p.vertex, m) for m in range(model.m_max(p.vertex) + 1)]


def gamma_rows(model: ARModel) -> Dict[str, Tuple[str, str]]:
    """Name -> projective rows of each listed generator set"""
    ftype = model.folding.ftype
    n = ftype.n
    if ftype.family == 'A':
        return {f"Gamma({i},{j})": (str(i), str(j)) for i in (0, 2 * n - 2) for j in (1, 2 * n - 3)}
    if ftype.is_d4:
        return {f"Gamma({i})": (i, '1') for i in ('0', '2+', '2-')}
    if ftype.family == 'D':
        i = '0' if n % 2 == 0 else '1'
        return {f"Gamma{s}": (i, f"{n - 1}{s}") for s in '+-'}
    if ftype.rank == 6:
        return {f"Gamma({a},{b})": (f"0{a}", f"1{b}") for a in '+-' for b in '+-'}
    if ftype.rank == 7:
        return {"Gamma": ('0', 'v7')}
    return {"Gamma": ('0', '1')}


def gamma_sets(model: ARModel, layer: str = 'module') -> Dict[str, List[Indec]]:
    """The generator sets as unions of two projective rows"""
    out = {}
    for name, rows in gamma_rows(model).items():
        members = []
        for v in rows:
            members += projective_row(model, v, layer)
        if layer == 'cluster':
            members += [model.shifted_projective(v) for v in rows]
        out[name] = members
    return out


def symmetry_group(model: ARModel) -> List[RingElt]:
    """Invertible elements of the semiring permuting the generator sets"""
    ring = ring_of(model)
    ftype = ring.ftype
    if ftype.family == 'A':
        return [ring.one(), ring.element(f"w{2 * ftype.n - 2}")]
    if ftype.is_d4:
        return [ring.one(), ring.element('g'), ring.element('g2')]
    if ftype.family == 'D' or ftype.rank == 6:
        return [ring.one(), ring.element('w0-')]
    return [ring.one()]


def generator_for(model: ARModel, gamma: Sequence[Indec], N: Indec) -> Optional[Tuple[Indec, GenerationPair]]:
    for M in gamma:
        if model.column(M) == model.column(N) and M.shift == N.shift:
            pair = generation_pair(model, M, N)
            if pair is not None:
                return M, pair
    return None


@dataclass
class GammaCheck:
    name: str
    size: int
    generates: bool
    tau_closed: bool
    basic: bool
    root_bijection: bool
    weight_one: bool
    missing: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.generates and self.tau_closed and self.basic and self.root_bijection


def verify_gamma(model: ARModel, name: str, gamma: Sequence[Indec]) -> GammaCheck:
    """Generation, τ-closure, basicness and the root bijection of one generator set"""
    members = set(gamma)
    missing = [model.name(N) for N in model.module_indecs() if generator_for(model, gamma, N) is None]

    tau_closed = True
    for x in gamma:
        if not model.is_projective(x) and model.tau(x) not in members:
            tau_closed = False
        if not model.is_injective(x) and model.tau_inverse(x) not in members:
            tau_closed = False

    roots = [model.root_of(x)[0] for x in gamma]
    expected = positive_roots(model.n)
    bijection = len(roots) == len(expected) and all(roots.count(a) == 1 for a in expected)
    weight_one = all(model.row_weight(x.vertex) == 1 for x in gamma)
    return GammaCheck(name, len(gamma), not missing, tau_closed, len(members) == len(gamma),
                      bijection, weight_one, missing)


def gamma_equivalent(model: ARModel, first: Sequence[Indec], second: Sequence[Indec]) -> bool:
    """Whether second = {g_M M : M in first} for units g_M of the semiring"""
    group = symmetry_group(model)
    remaining = Counter(second)
    if len(first) != len(second):
        return False
    for M in first:
        for g in group:
            image = act(model, g, M)
            if sum(image.values()) == 1:
                (y,) = image
                if remaining[y] > 0:
                    remaining[y] -= 1
                    break
        else:
            return False
    return not +remaining


def gen_partial_order(model: ARModel, N1: Indec, N2: Indec, gamma: Sequence[Indec]) -> str:
    """Compare two objects generated from Γ: 'lt', 'eq', 'gt' or 'incomparable'"""
    if N1 == N2:
        return 'eq'
    if N1.shift != N2.shift or model.column(N1) != model.column(N2):
        return 'incomparable'
    first = generator_for(model, gamma, N1)
    second = generator_for(model, gamma, N2)
    if first is None or second is None:
        raise ValueError("both objects must be generated by the set")
    p1, p2 = first[1], second[1]
    result = partial_cmp(p1.r + p2.r_prime, p2.r + p1.r_prime)
    return 'incomparable' if result == 'eq' else result


# -------------------------
# Grothendieck module
# -------------------------
def grothendieck_basis(model: ARModel, gamma: Sequence[Indec]) -> Tuple[Indec, Indec]:
    """The simple objects of Γ at a source and at a sink"""
    found: Dict[int, Indec] = {}
    for x in gamma:
        d = model.dim(x)
        if not x.shifted_projective and x.shift == 0 and d.sum() == 1:
            found.setdefault(model.parity[x.vertex], x)
    if 0 not in found or 1 not in found:
        raise ValueError("generator set does not contain a simple object of each parity")
    return found[0], found[1]


def k0_class(model: ARModel, x: Union[Indec, Iterable[Indec], np.ndarray],
             gamma: Sequence[Indec]) -> Tuple[RingElt, RingElt]:
    """
    Coordinates (a0, a1) of [x] = a0·[S0] + a1·[S1] with S0, S1 the simples of Γ.

    Free directions of the solution space are set to zero, so the map is
    additive on classes.
    """
    ring = ring_of(model)
    S0, S1 = grothendieck_basis(model, gamma)
    if isinstance(x, Indec):
        target = model.class_vector(x)
    elif isinstance(x, np.ndarray):
        target = x
    else:
        target = sum((model.class_vector(y) for y in x), np.zeros(len(model.vertices), dtype=np.int64))

    columns = []
    for S in (S0, S1):
        for b in ring.small_basis:
            d = np.zeros(len(model.vertices), dtype=np.int64)
            for y, c in act(model, b, S).items():
                d += c * model.dim(y)
            columns.append(d)
    A = Matrix(np.stack(columns, axis=1).tolist())
    solution, params = A.gauss_jordan_solve(Matrix([int(c) for c in target]))
    if params.shape[0]:
        solution = solution.subs({p: 0 for p in params})
    if not all(v.is_integer for v in solution):
        raise ArithmeticError(f"class {list(target)} has no integral coordinates")
    coords = [int(v) for v in solution]
    s = len(ring.small_basis)
    return ring.from_small(coords[:s]), ring.from_small(coords[s:])
