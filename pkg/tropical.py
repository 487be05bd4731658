"""
Tropical Seeds
C- and G-matrices for I2(2n) (standard and rescaled), for the single and
doubled unfoldings and for Q^op alone; block recognition, the tesseract of
projections between them, and folded g-vectors.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix

from action import act, projective_row
from algnum import (RealCycNumber, cyc_context, identity_matrix, integer_inverse,
                    matrices_equal, matrix_inverse, matrix_to_json)
from armodel import ARModel, Indec, ProjVector, all_roots
from chebrings import ChebyshevRing, FoldingType, RingElt, chebyshev_ring, rho_eval
from quiver import (Folding, build_folding, composite_mutate, double_matrix, doubled_folding,
                    doubled_order, opposite_folding, rescale, restrict_doubled, skew_target,
                    standard_target)

logger = logging.getLogger(__name__)

SEED_LAYERS = ('standard', 'rescaled', 'unfolded', 'opposite', 'doubled')


class SignCoherenceError(RuntimeError):
    """Raised when a mutation pivots on a column with entries of both signs"""

    def __init__(self, message: str, word: Tuple[int, ...] = (), column: Optional[int] = None):
        super().__init__(message)
        self.word = word
        self.column = column


def _ftype(ftype) -> FoldingType:
    return FoldingType.parse(ftype) if isinstance(ftype, str) else ftype


def _sgn(x) -> int:
    if isinstance(x, RealCycNumber):
        return x.sign()
    return int(x > 0) - int(x < 0)


def _positive_part(x):
    return x if _sgn(x) > 0 else x * 0


def rescaling(n: int) -> Tuple[RealCycNumber, RealCycNumber]:
    """Diagonal of P with P B P^-1 the skew-symmetric I2(2n) matrix"""
    ctx = cyc_context(n)
    return ctx.one(), ctx.theta()


def to_rescaled(M: np.ndarray, n: int) -> np.ndarray:
    return rescale(M, rescaling(n))


def from_rescaled(M: np.ndarray, n: int) -> np.ndarray:
    p = rescaling(n)
    return rescale(M, [1 / x for x in p])


# -------------------------
# Seeds
# -------------------------
@dataclass(frozen=True)
class TropicalSeed:
    """
    A tropical y-seed reached from the initial seed by a word of block mutations.

    Args:
        ftype: folding type
        layer: one of SEED_LAYERS
        word: block indices mutated from the initial seed
        B: exchange matrix at this seed
        C: C-matrix at this seed
    """
    ftype: FoldingType
    layer: str
    word: Tuple[int, ...]
    B: np.ndarray = field(compare=False)
    C: np.ndarray = field(compare=False)

    @property
    def folding(self) -> Optional[Folding]:
        if self.layer == 'unfolded':
            return build_folding(self.ftype)
        if self.layer == 'opposite':
            return opposite_folding(self.ftype)
        if self.layer == 'doubled':
            return doubled_folding(self.ftype)
        return None

    @property
    def blocks(self) -> Tuple[List[int], List[int]]:
        folding = self.folding
        if folding is None:
            return [0], [1]
        return folding.blocks

    @cached_property
    def G(self) -> np.ndarray:
        return g_matrix(self.C)

    def c_vectors(self) -> List[tuple]:
        return [tuple(self.C[:, j]) for j in range(self.C.shape[1])]

    def to_json(self) -> dict:
        return {
            "type": self.ftype.name,
            "layer": self.layer,
            "word": [f"[{k}]" for k in self.word],
            "B": matrix_to_json(self.B),
            "C": matrix_to_json(self.C),
            "G": matrix_to_json(self.G),
        }


def initial_exchange(ftype, layer: str) -> np.ndarray:
    ftype = _ftype(ftype)
    if layer == 'standard':
        return standard_target(ftype.n).matrix
    if layer == 'rescaled':
        return skew_target(ftype.n).matrix
    if layer == 'unfolded':
        return build_folding(ftype).B
    if layer == 'opposite':
        return opposite_folding(ftype).B
    if layer == 'doubled':
        return doubled_folding(ftype).B
    raise ValueError(f"unknown seed layer {layer!r}; expected one of {SEED_LAYERS}")


def initial_seed(ftype, layer: str = 'standard') -> TropicalSeed:
    ftype = _ftype(ftype)
    B = initial_exchange(ftype, layer)
    if B.dtype == object:
        C = identity_matrix(cyc_context(ftype.n), B.shape[0])
    else:
        C = np.eye(B.shape[0], dtype=np.int64)
    return TropicalSeed(ftype, layer, (), B, C)


def _column_sign(C: np.ndarray, j: int) -> Optional[int]:
    """+1 or -1 for a sign-coherent non-zero column, else None"""
    signs = {_sgn(x) for x in C[:, j]} - {0}
    if len(signs) != 1:
        return None
    return signs.pop()


def mutate_c_matrix(B: np.ndarray, C: np.ndarray, k: int, word: Tuple[int, ...] = ()) -> np.ndarray:
    """
    c'_ij = -c_ij for j = k, else c_ij + sgn(c_ik)[c_ik b_kj]_+.

    Args:
        B: exchange matrix before the mutation
        C: C-matrix before the mutation
        k: pivot index
        word: position in the exchange tree, carried into errors
    """
    if _column_sign(C, k) is None:
        raise SignCoherenceError(f"column {k} of the C-matrix is not sign-coherent after {list(word)}",
                                 word, k)
    size = C.shape[0]
    out = C.copy()
    for i in range(size):
        for j in range(C.shape[1]):
            if j == k:
                out[i, j] = -C[i, j]
            else:
                s = _sgn(C[i, k])
                if s:
                    out[i, j] = C[i, j] + s * _positive_part(C[i, k] * B[k, j])
    return out


def c_mutate(seed: TropicalSeed, k: int) -> TropicalSeed:
    """Mutate at the block [k]; unfolded layers mutate every vertex of the block"""
    if k not in (0, 1):
        raise IndexError(f"block index {k} out of range; expected 0 or 1")
    block = seed.blocks[k]
    B = composite_mutate(seed.B, block)
    C = seed.C
    # block vertices are pairwise unjoined, so row a of B is fixed through the composite
    for a in block:
        C = mutate_c_matrix(seed.B, C, a, seed.word)
    return TropicalSeed(seed.ftype, seed.layer, seed.word + (k,), B, C)


@lru_cache(maxsize=None)
def seed_at(ftype, layer: str, word: Tuple[int, ...]) -> TropicalSeed:
    """The seed reached by a word, built from its cached prefixes"""
    ftype = _ftype(ftype)
    word = tuple(word)
    if not word:
        return initial_seed(ftype, layer)
    return c_mutate(seed_at(ftype, layer, word[:-1]), word[-1])


def walk(ftype, layer: str, word: Sequence[int]) -> List[TropicalSeed]:
    """Seeds at every prefix of a word, the initial seed first"""
    word = tuple(word)
    return [seed_at(_ftype(ftype), layer, word[:t]) for t in range(len(word) + 1)]


def exchange_period(ftype, limit: int = 200) -> int:
    """Number of alternating mutations after which the I2(2n) seed returns"""
    start = initial_seed(ftype, 'standard')
    seed = start
    for step in range(1, limit + 1):
        seed = c_mutate(seed, (step - 1) % 2)
        if matrices_equal(seed.C, start.C) and matrices_equal(seed.B, start.B):
            return step
    raise ArithmeticError("exchange pattern did not close within the limit")


# -------------------------
# G-matrices
# -------------------------
def g_matrix(C: np.ndarray) -> np.ndarray:
    """G = (C^T)^-1, exact"""
    if C.dtype == object:
        return matrix_inverse(C.T)
    return integer_inverse(C.T)


def g_mutate(G: np.ndarray, B: np.ndarray, k: int, eps: int) -> np.ndarray:
    """
    Explicit G-mutation: g'_k = -g_k + Σ_j [eps b_kj]_+ g_j, other columns fixed,
    where eps is the sign of the k-th c-vector before the mutation.
    """
    out = G.copy()
    column = [-G[i, k] for i in range(G.shape[0])]
    for j in range(G.shape[1]):
        if j == k:
            continue
        coef = _positive_part(eps * B[k, j])
        if _sgn(coef):
            column = [column[i] + coef * G[i, j] for i in range(G.shape[0])]
    for i, value in enumerate(column):
        out[i, k] = value
    return out


def g_mutate_block(G: np.ndarray, B: np.ndarray, C: np.ndarray, block: Sequence[int]) -> np.ndarray:
    for a in block:
        eps = _column_sign(C, a)
        if eps is None:
            raise SignCoherenceError(f"column {a} of the C-matrix is not sign-coherent", (), a)
        G = g_mutate(G, B, a, eps)
    return G


def determinant(C: np.ndarray):
    if C.dtype == object:
        if C.shape != (2, 2):
            raise ValueError("field determinants are only taken of 2x2 matrices")
        return C[0, 0] * C[1, 1] - C[0, 1] * C[1, 0]
    return int(Matrix(C.tolist()).det(method='bareiss'))


def adjugate_form(C: np.ndarray) -> np.ndarray:
    """[[c11, -c10], [-c01, c00]], equal to det(C)·(C^T)^-1 in rank 2"""
    return np.array([[C[1, 1], -C[1, 0]], [-C[0, 1], C[0, 0]]], dtype=object)


# -------------------------
# Block structure of the doubled C-matrix
# -------------------------
def split_blocks(M: np.ndarray) -> Dict[Tuple[int, int], np.ndarray]:
    size = M.shape[0] // 2
    return {(i, j): M[i * size:(i + 1) * size, j * size:(j + 1) * size]
            for i in (0, 1) for j in (0, 1)}


def join_blocks(blocks: Dict[Tuple[int, int], np.ndarray]) -> np.ndarray:
    return np.block([[blocks[0, 0], blocks[0, 1]], [blocks[1, 0], blocks[1, 1]]])


def block_sign(block: np.ndarray) -> Optional[int]:
    """+1, -1 or 0 for a non-negative, non-positive or zero block, None if mixed"""
    signs = {int(np.sign(x)) for x in block.flat} - {0}
    if not signs:
        return 0
    if len(signs) > 1:
        return None
    return signs.pop()


def recognize_rep(block: np.ndarray, ftype) -> Optional[RingElt]:
    """
    The ring element r with vertex_rep(r) = block, or None.

    Outside the type D ideal the identity-indexed column holds r itself;
    in the ideal representation the linear system is solved with free
    coordinates set to zero.
    """
    ring = chebyshev_ring(_ftype(ftype))
    size = len(ring.vertices)
    block = np.asarray(block, dtype=np.int64)
    if block.shape != (size, size):
        raise ValueError(f"expected a {size}x{size} block for {ring.ftype}, got {block.shape}")

    if not ring.ftype.uses_ideal:
        r = RingElt(ring, block[:, 0].copy())
    else:
        r = _solve_ideal_rep(ring, block)
        if r is None:
            return None
    if not np.array_equal(ring.vertex_rep(r), block):
        return None
    return r


def _solve_ideal_rep(ring: ChebyshevRing, block: np.ndarray) -> Optional[RingElt]:
    columns = [ring.vertex_rep(b).flatten() for b in ring.basis()]
    A = Matrix(np.stack(columns, axis=1).tolist())
    try:
        solution, params = A.gauss_jordan_solve(Matrix(block.flatten().tolist()))
    except ValueError:
        return None
    if params.shape[0]:
        solution = solution.subs({p: 0 for p in params})
    if not all(v.is_integer for v in solution):
        return None
    return RingElt(ring, np.array([int(v) for v in solution], dtype=np.int64))


def is_one_signed(r: RingElt) -> bool:
    signs = {int(np.sign(c)) for c in r.coords} - {0}
    return len(signs) <= 1


def block_mutate(C: np.ndarray, B: np.ndarray, k: int) -> np.ndarray:
    """
    The block formula for composite mutation of a block-sign-coherent C-matrix:
    C'_[i][j] = -C_[i][k] for j = k, else C_[i][j] + sgn(C_[i][k])[C_[i][k] B_[k][j]]_+.
    """
    cb = split_blocks(C)
    bb = split_blocks(B)
    out = {}
    for i in (0, 1):
        s = block_sign(cb[i, k])
        if s is None:
            raise SignCoherenceError(f"block [{i}][{k}] of the C-matrix has entries of both signs", (), k)
        for j in (0, 1):
            if j == k:
                out[i, j] = -cb[i, k]
            else:
                out[i, j] = cb[i, j] + s * np.maximum(cb[i, k] @ bb[k, j], 0)
    return join_blocks(out)


@dataclass
class BlockReport:
    """Block recognition, sign-coherence, commutation and the block formula along a word"""
    folding: str
    word: Tuple[int, ...]
    checked: int = 0
    elements: Dict[str, str] = field(default_factory=dict)
    failures: List[Tuple[Tuple[int, ...], str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "type": self.folding,
            "word": list(self.word),
            "checked": self.checked,
            "blocks": self.elements,
            "failures": [{"word": list(w), "reason": reason} for w, reason in self.failures],
            "ok": self.ok,
        }


@lru_cache(maxsize=None)
def _block_node(ftype: FoldingType,
                prefix: Tuple[int, ...]) -> Tuple[Tuple[str, ...], Tuple[Tuple[str, str], ...]]:
    """Failures and recognized elements of the doubled C-matrix at one seed"""
    blocks = split_blocks(seed_at(ftype, 'doubled', prefix).C)
    failures, elements = [], []
    for (i, j), block in sorted(blocks.items()):
        r = recognize_rep(block, ftype)
        if r is None:
            failures.append(f"block [{i}][{j}] is not a ring representation")
            continue
        elements.append((f"[{i}][{j}]", str(r)))
        if block_sign(block) is None:
            failures.append(f"block [{i}][{j}] is not sign-coherent")
        if not ftype.uses_ideal and not is_one_signed(r):
            failures.append(f"element {r} of block [{i}][{j}] has mixed signs")
    mats = list(blocks.values())
    if any(not np.array_equal(a @ b, b @ a) for a in mats for b in mats):
        failures.append("blocks do not commute")
    return tuple(failures), tuple(elements)


@lru_cache(maxsize=None)
def _block_edge(ftype: FoldingType, prefix: Tuple[int, ...],
                k: int) -> Optional[Tuple[Tuple[int, ...], str]]:
    """The block formula against composite mutation from prefix to prefix + (k,)"""
    seed = seed_at(ftype, 'doubled', prefix)
    try:
        expected = block_mutate(seed.C, seed.B, k)
    except SignCoherenceError as e:
        return prefix, str(e)
    if not np.array_equal(expected, seed_at(ftype, 'doubled', prefix + (k,)).C):
        return prefix + (k,), "block formula disagrees with composite mutation"
    return None


def verify_blocks(ftype, word: Sequence[int]) -> BlockReport:
    ftype = _ftype(ftype)
    word = tuple(word)
    report = BlockReport(ftype.name, word)
    for t in range(len(word) + 1):
        prefix = word[:t]
        failures, elements = _block_node(ftype, prefix)
        report.checked += 1
        report.failures.extend((prefix, reason) for reason in failures)
        if t == len(word):
            report.elements = dict(elements)
        else:
            edge = _block_edge(ftype, prefix, word[t])
            if edge is not None:
                report.failures.append(edge)
    logger.debug("block check %s %s: %d failures", ftype, list(word), len(report.failures))
    return report


# -------------------------
# Matrix projections
# -------------------------
def anchors(folding: Folding) -> Tuple[str, str]:
    """Anchor vertices (i0, i1) with w(i0) = μ([0]) and w(i1) = μ([1])"""
    first = '0+' if folding.ftype.family == 'E' and folding.ftype.rank == 6 else '0'
    if folding.doubled:
        pair = (first, first + "'")
    else:
        pair = (first, '1+' if first == '0+' else '1')
    for a, v in enumerate(pair):
        if v not in folding.vertices:
            raise KeyError(f"anchor vertex {v!r} missing from {folding.ftype}")
        if folding.weight(v) != folding.mu[a]:
            raise ValueError(f"anchor {v!r} does not carry the valuation of [{a}]")
    return pair


def project_vector(folding: Folding, u: Sequence) -> ProjVector:
    """d_F(u) = (Σ_{F(i)=[0]} w(i) u_i / μ([0]), Σ_{F(i)=[1]} w(i) u_i / μ([1]))"""
    ctx = folding.ctx
    sums = [ctx.zero(), ctx.zero()]
    for i, c in enumerate(u):
        if c:
            sums[folding.image[i]] = sums[folding.image[i]] + folding.weights[i] * int(c)
    return sums[0] / folding.mu[0], sums[1] / folding.mu[1]


def project_cmatrix(folding: Folding, M: np.ndarray, mode: str = 'single') -> np.ndarray:
    """
    Matrix F-projection onto a 2x2 matrix over Q(θ).

    Args:
        folding: the single or doubled folding M is indexed by
        M: integer matrix
        mode: 'double' or 'single' project the anchor columns,
            'single_transpose' projects the anchor rows
    """
    if mode not in ('double', 'single', 'single_transpose'):
        raise ValueError(f"unknown projection mode {mode!r}")
    if (mode == 'double') != folding.doubled:
        raise ValueError(f"mode {mode!r} does not match the folding")
    i0, i1 = (folding.index(v) for v in anchors(folding))
    if mode == 'single_transpose':
        first, second = project_vector(folding, M[i0, :]), project_vector(folding, M[i1, :])
        return np.array([[first[0], first[1]], [second[0], second[1]]], dtype=object)
    first, second = project_vector(folding, M[:, i0]), project_vector(folding, M[:, i1])
    return np.array([[first[0], second[0]], [first[1], second[1]]], dtype=object)


# -------------------------
# Tesseract
# -------------------------
@dataclass
class TesseractReport:
    folding: str
    word: Tuple[int, ...]
    checked: int = 0
    failures: List[Tuple[Tuple[int, ...], str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "type": self.folding,
            "word": list(self.word),
            "checked": self.checked,
            "failures": [{"word": list(w), "edge": edge} for w, edge in self.failures],
            "ok": self.ok,
        }


def _node_failures(ftype: FoldingType, word: Tuple[int, ...]) -> List[str]:
    """Edges of the tesseract within one seed: the faces not involving mutation"""
    n = ftype.n
    single, double = build_folding(ftype), doubled_folding(ftype)
    order = doubled_order(single)
    std, res = seed_at(ftype, 'standard', word), seed_at(ftype, 'rescaled', word)
    uni, dbl = seed_at(ftype, 'unfolded', word), seed_at(ftype, 'doubled', word)
    opp = seed_at(ftype, 'opposite', word)
    Gs, Gr, Gu, Gd = std.G, res.G, uni.G, dbl.G

    checks = [
        ("C -> G standard", matrices_equal(Gs @ std.C.T, identity_matrix(cyc_context(n), 2))),
        ("C -> G rescaled", matrices_equal(Gr @ res.C.T, identity_matrix(cyc_context(n), 2))),
        ("det C standard", determinant(std.C) in (1, -1)),
        ("det C unfolded", determinant(uni.C) in (1, -1)),
        ("adjugate G rescaled", matrices_equal(Gr * determinant(res.C), adjugate_form(res.C))),
        ("Λ C Θ", np.array_equal(restrict_doubled(dbl.C, order), uni.C)),
        ("Λ G Θ", np.array_equal(restrict_doubled(Gd, order), Gu)),
        ("V (B ⊕ B^op) V^-1", np.array_equal(double_matrix(uni.B, order, opp.B), dbl.B)),
        ("V (C ⊕ C^op) V^-1", np.array_equal(double_matrix(uni.C, order, opp.C), dbl.C)),
        ("V (G ⊕ G^op) V^-1", np.array_equal(double_matrix(Gu, order, opp.G), Gd)),
        ("d_F doubled C", matrices_equal(project_cmatrix(double, dbl.C, 'double'), res.C)),
        ("d_F doubled G", matrices_equal(project_cmatrix(double, Gd, 'double'), Gr)),
        ("d_F C", matrices_equal(project_cmatrix(single, uni.C, 'single'), std.C)),
        ("d_F^T G", matrices_equal(project_cmatrix(single, Gu, 'single_transpose'), Gs)),
        ("P^-1 C P", matrices_equal(from_rescaled(res.C, n), std.C)),
        ("P G P^-1", matrices_equal(to_rescaled(Gr, n), Gs)),
    ]
    return [name for name, ok in checks if not ok]


@lru_cache(maxsize=None)
def _edge_failures(ftype: FoldingType, word: Tuple[int, ...], k: int) -> Tuple[str, ...]:
    """Mutation edges t -> μ_[k](t) on the G side, by the explicit formula"""
    failures = []
    for layer in SEED_LAYERS:
        seed = seed_at(ftype, layer, word)
        after = seed_at(ftype, layer, word + (k,))
        try:
            G = g_mutate_block(seed.G, seed.B, seed.C, seed.blocks[k])
        except SignCoherenceError:
            failures.append(f"sign-coherence {layer}")
            continue
        if not matrices_equal(G, after.G):
            failures.append(f"μ G {layer}")
    return tuple(failures)


@lru_cache(maxsize=None)
def _cached_node_failures(ftype: FoldingType, word: Tuple[int, ...]) -> Tuple[str, ...]:
    return tuple(_node_failures(ftype, word))


def tesseract_check(ftype, word: Sequence[int]) -> TesseractReport:
    """Evaluate all sixteen nodes after each prefix of the word and compare every edge"""
    ftype = _ftype(ftype)
    word = tuple(word)
    report = TesseractReport(ftype.name, word)
    for t in range(len(word) + 1):
        prefix = word[:t]
        report.checked += 1
        for edge in _cached_node_failures(ftype, prefix):
            report.failures.append((prefix, edge))
        if t < len(word):
            try:
                edges = _edge_failures(ftype, prefix, word[t])
            except SignCoherenceError as e:
                report.failures.append((word[:t + 1], str(e)))
                break
            report.checked += 1
            for edge in edges:
                report.failures.append((word[:t + 1], edge))
    return report


def random_words(count: int, max_length: int, seed: int) -> List[Tuple[int, ...]]:
    """Distinct words over the blocks {0, 1}, drawn with a fixed seed"""
    if max_length < 0 or count < 0:
        raise ValueError("count and max_length must be non-negative")
    rng = np.random.default_rng(seed)
    words = set()
    for _ in range(count):
        length = int(rng.integers(0, max_length + 1))
        words.add(tuple(int(k) for k in rng.integers(0, 2, size=length)))
    return sorted(words, key=lambda w: (len(w), w))


# -------------------------
# c-vectors of I2(2n)
# -------------------------
@dataclass
class CVectorReport:
    folding: str
    depth: int
    seeds: int = 0
    period: Optional[int] = None
    failures: List[Tuple[Tuple[int, ...], str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _is_root(v, roots) -> bool:
    negated = tuple(-x for x in v)
    return any(tuple(r) == tuple(v) or tuple(r) == negated for r in roots)


def verify_cvectors(ftype, depth: Optional[int] = None) -> CVectorReport:
    """
    Walk the rank-2 exchange pattern from both starting blocks and check that
    c-vectors are sign-coherent roots, rescaled c-vectors are rescaled roots,
    and det C = ±1.
    """
    ftype = _ftype(ftype)
    n = ftype.n
    depth = 4 * n + 4 if depth is None else depth
    report = CVectorReport(ftype.name, depth)
    roots = all_roots(n)
    for start in (0, 1):
        word = tuple((start + t) % 2 for t in range(depth))
        try:
            seeds = walk(ftype, 'standard', word)
            rescaled = walk(ftype, 'rescaled', word)
        except SignCoherenceError as e:
            report.failures.append((e.word, str(e)))
            continue
        for std, res in zip(seeds, rescaled):
            report.seeds += 1
            for j, c in enumerate(std.c_vectors()):
                if _column_sign(std.C, j) is None:
                    report.failures.append((std.word, f"c-vector {j} is not sign-coherent"))
                elif not _is_root(c, roots):
                    report.failures.append((std.word, f"c-vector {j} is not a root"))
            for j in range(2):
                if _column_sign(res.C, j) is None:
                    report.failures.append((res.word, f"rescaled c-vector {j} is not sign-coherent"))
            if not matrices_equal(from_rescaled(res.C, n), std.C):
                report.failures.append((res.word, "rescaled c-vectors are not rescaled roots"))
            if determinant(std.C) not in (1, -1):
                report.failures.append((std.word, "det C is not ±1"))
    report.period = exchange_period(ftype)
    return report


# -------------------------
# Folded g-vectors
# -------------------------
def integer_g_vector(model: ARModel, x: Indec) -> np.ndarray:
    """g-vector in the basis of projectives: g_b = d_b - Σ_{a->b} d_a, and g(ΣP(i)) = -e_i"""
    if x.layer == 'derived' and x.shift:
        raise ValueError("g-vectors are taken of modules and cluster objects")
    size = len(model.vertices)
    if x.shifted_projective:
        g = np.zeros(size, dtype=np.int64)
        g[model.index[x.vertex]] = -1
        return g
    d = model.dim(x)
    g = d.copy()
    for a, b in model.arrows:
        g[b] -= d[a]
    return g


def projective_presentation(model: ARModel, x: Indec) -> Tuple[Counter, Counter]:
    """
    (P0, P1) with P1 -> P0 -> x; shifted projectives give (0, P(i)).
    Checked by dim x = dim P0 - dim P1.
    """
    g = integer_g_vector(model, x)
    top, kernel = Counter(), Counter()
    for i, c in enumerate(g):
        if c > 0:
            top[model.vertices[i]] += int(c)
        elif c < 0:
            kernel[model.vertices[i]] += int(-c)
    if not x.shifted_projective:
        total = sum((c * model.proj[model.index[v]] for v, c in top.items()), np.zeros(len(g), dtype=np.int64))
        total = total - sum((c * model.proj[model.index[v]] for v, c in kernel.items()),
                            np.zeros(len(g), dtype=np.int64))
        if not np.array_equal(total, model.dim(x)):
            raise ArithmeticError(f"presentation of {model.name(x)} does not match its dimension vector")
    return top, kernel


def folded_g_via_projection(model: ARModel, x: Indec) -> ProjVector:
    """Transpose projection of the integer g-vector: (sink part, source part)"""
    source_part, sink_part = project_vector(model.folding, integer_g_vector(model, x))
    return sink_part, source_part


def anchor_projectives(model: ARModel, layer: str = 'cluster') -> Tuple[Indec, Indec]:
    i0, i1 = anchors(model.folding)
    return model.projective(i0, layer), model.projective(i1, layer)


@dataclass(frozen=True)
class FoldedG:
    """The triangle r'0 P0 + r'1 P1 -> r0 P0 + r1 P1 -> X and its folded g-vector"""
    r0: RingElt
    r0_prime: RingElt
    r1: RingElt
    r1_prime: RingElt
    value: ProjVector

    def to_json(self) -> dict:
        return {
            "r0": str(self.r0), "r0'": str(self.r0_prime),
            "r1": str(self.r1), "r1'": str(self.r1_prime),
            "g": [self.value[0].to_json(), self.value[1].to_json()],
        }


def _semiring_split(model: ARModel, anchor: Indec, g: np.ndarray, image: int) -> Tuple[RingElt, RingElt]:
    """(r, r') over the small basis with r·anchor - r'·anchor the projectives of g in one column"""
    ring = chebyshev_ring(model.folding.ftype)
    base = ring.vertex_element(anchor.vertex)
    A = np.stack([ring.vertex_coords(b * base) for b in ring.small_basis], axis=1)
    target = np.zeros(len(model.vertices), dtype=np.int64)
    for i, c in enumerate(g):
        if c and model.folding.image[i] == image:
            row = model.projective(model.vertices[i]).vertex
            target = target + int(c) * ring.vertex_coords(ring.vertex_element(row))
    solution, params = Matrix(A.tolist()).gauss_jordan_solve(Matrix(target.tolist()))
    if params.shape[0]:
        solution = solution.subs({p: 0 for p in params})
    if not all(v.is_integer for v in solution):
        raise ArithmeticError(f"projectives {list(target)} are not an integral combination of {model.name(anchor)}")
    x = np.array([int(v) for v in solution], dtype=np.int64)
    return ring.from_small(np.maximum(x, 0)), ring.from_small(np.maximum(-x, 0))


def folded_g_vector(model: ARModel, x: Indec) -> FoldedG:
    """
    The folded g-vector (ρ(r1 - r1'), ρ(r0 - r0')) of an object in a weight-1 row,
    read from its projective presentation through the semiring action.
    """
    if model.row_weight(x.vertex) != 1:
        raise ValueError(f"{model.name(x)} does not lie in a row of weight 1")
    P0, P1 = anchor_projectives(model, 'module')
    g = integer_g_vector(model, x)
    r0, r0p = _semiring_split(model, P0, g, 0)
    r1, r1p = _semiring_split(model, P1, g, 1)

    top, kernel = Counter(), Counter()
    for i, c in enumerate(g):
        p = model.projective(model.vertices[i])
        if c > 0:
            top[p] += int(c)
        elif c < 0:
            kernel[p] += int(-c)
    lhs = act(model, r0, P0) + act(model, r1, P1) + kernel
    rhs = act(model, r0p, P0) + act(model, r1p, P1) + top
    if lhs != rhs:
        raise ArithmeticError(f"semiring presentation of {model.name(x)} does not match its g-vector")
    value = (rho_eval(r1 - r1p), rho_eval(r0 - r0p))
    return FoldedG(r0, r0p, r1, r1p, value)


def gvector_objects(model: ARModel) -> List[Indec]:
    """The rows of the anchor projectives in the cluster category with their shifts"""
    i0, i1 = anchors(model.folding)
    out = []
    for v in (i0, i1):
        out += projective_row(model, v, 'cluster')
    out += [model.shifted_projective(i0), model.shifted_projective(i1)]
    return out


def gvector_table(model: ARModel) -> List[dict]:
    """Folded g-vectors of the anchor rows by both routes"""
    rows = []
    for x in gvector_objects(model):
        via_semiring = folded_g_vector(model, x)
        via_projection = folded_g_via_projection(model, x)
        rows.append({
            "object": model.name(x),
            "g": [int(c) for c in integer_g_vector(model, x)],
            "folded": via_semiring.value,
            "agrees": via_semiring.value == via_projection,
            "presentation": via_semiring,
        })
    return rows
