"""
Exchange Matrices and Weighted Foldings
Mutation over ordered rings, origami pairs, the foldings onto I2(2n) and their
doubled quivers.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from algnum import RealCycNumber, cyc_context, cyc_matrix
from chebrings import FoldingType, chebyshev_ring, dynkin_arrows, rho_eval

logger = logging.getLogger(__name__)


class FoldingError(ValueError):
    """Raised when folding data is inconsistent"""


def _sign(x) -> int:
    if isinstance(x, RealCycNumber):
        return x.sign()
    return int(x > 0) - int(x < 0)


# -------------------------
# Mutation
# -------------------------
def mutate_matrix(matrix: np.ndarray, k: int) -> np.ndarray:
    """
    Mutate an exchange matrix at index k.

    Works for integer arrays and object arrays of field elements.
    """
    B = np.array(matrix, dtype=matrix.dtype if isinstance(matrix, np.ndarray) else object)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError("matrix must be a square 2D array")

    n = B.shape[0]
    if not (0 <= k < n):
        raise IndexError(f"mutation index k={k} out of bounds for size {n}")

    Bp = B.copy()
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                Bp[i, j] = -B[i, j]
            else:
                s = _sign(B[i, k])
                if s != 0 and s == _sign(B[k, j]):
                    Bp[i, j] = B[i, j] + s * (B[i, k] * B[k, j])
    return Bp


@dataclass(frozen=True)
class ExchangeMatrix:
    """A skew-symmetrizable matrix with vertex labels and a valuation"""
    vertices: Tuple[str, ...]
    matrix: np.ndarray = field(compare=False)
    valuation: Tuple = field(default=(), compare=False)

    def index(self, k) -> int:
        if isinstance(k, (int, np.integer)):
            if not 0 <= k < len(self.vertices):
                raise IndexError(f"mutation index k={k} out of bounds for size {len(self.vertices)}")
            return int(k)
        try:
            return self.vertices.index(k)
        except ValueError:
            raise KeyError(f"unknown vertex {k!r}") from None

    def __eq__(self, other):
        if not isinstance(other, ExchangeMatrix):
            return NotImplemented
        return self.vertices == other.vertices and _equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.vertices)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "matrix": _matrix_json(self.matrix),
            "valuation": {v: _value_json(x) for v, x in zip(self.vertices, self.valuation)},
        }


def mutate(B: ExchangeMatrix, k) -> ExchangeMatrix:
    """Fomin-Zelevinsky mutation at the vertex k"""
    return ExchangeMatrix(B.vertices, mutate_matrix(B.matrix, B.index(k)), B.valuation)


def composite_mutate(B: np.ndarray, block: Sequence[int]) -> np.ndarray:
    """Mutate at every index of a block of pairwise non-adjacent vertices"""
    block = list(block)
    for a in block:
        for b in block:
            if _sign(B[a, b]) != 0:
                raise FoldingError(f"block vertices {a} and {b} are joined by an arrow")
    for k in block:
        B = mutate_matrix(B, k)
    return B


def symmetrizer(B: np.ndarray) -> List:
    """
    Positive diagonal D with DB skew-symmetric, normalised to d = 1 on the
    first vertex of each connected component.
    """
    B = np.asarray(B).astype(object)
    n = B.shape[0]
    d: List[Optional[object]] = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = _one_like(B)
        queue = [root]
        while queue:
            i = queue.pop()
            for j in range(n):
                if _sign(B[i, j]) == 0 and _sign(B[j, i]) == 0:
                    continue
                if _sign(B[i, j]) != -_sign(B[j, i]):
                    raise FoldingError(f"entries ({i},{j}) and ({j},{i}) are not sign-skew")
                value = -d[i] * B[i, j] / B[j, i]
                if d[j] is None:
                    d[j] = value
                    queue.append(j)
                elif d[j] != value:
                    raise FoldingError("matrix is not skew-symmetrizable")
    return d


def is_skew_symmetrizable(B: np.ndarray) -> bool:
    try:
        symmetrizer(B)
    except FoldingError:
        return False
    return True


def rescale(M: np.ndarray, p: Sequence) -> np.ndarray:
    """P M P^-1 for the diagonal matrix P = diag(p)"""
    size = len(p)
    out = np.empty((size, size), dtype=object)
    for i in range(size):
        for j in range(size):
            out[i, j] = p[i] * M[i, j] / p[j] if M[i, j] != 0 else p[i] * 0
    return out


def is_origami(B: np.ndarray, Bp: np.ndarray, W: Sequence, P: Sequence,
               blocks: Sequence[Sequence[int]]) -> bool:
    """
    Check the block column-sum and positivity conditions for the pair
    (W B W^-1, P B' P^-1).

    Args:
        B: integer exchange matrix of the unfolded quiver
        Bp: exchange matrix of the folded quiver
        W: vertex weights of the unfolded quiver
        P: valuation of the folded quiver
        blocks: index sets of B, one per vertex of the folded quiver
    """
    if B.shape != (len(W), len(W)) or Bp.shape != (len(P), len(P)) or len(blocks) != len(P):
        raise ValueError("dimension mismatch between matrices, weights and blocks")
    if sorted(i for block in blocks for i in block) != list(range(len(W))):
        raise ValueError("blocks do not partition the unfolded vertices")

    unfolded = rescale(B, W)
    folded = rescale(Bp, P)
    for a, rows in enumerate(blocks):
        for b, cols in enumerate(blocks):
            target = folded[a, b]
            positive = _sign(target) > 0
            for j in cols:
                total = target * 0
                for i in rows:
                    total = total + unfolded[i, j]
                    if positive and _sign(unfolded[i, j]) < 0:
                        return False
                if total != target:
                    return False
    return True


# -------------------------
# Foldings
# -------------------------
@dataclass
class Folding:
    """
    A weighted folding F: Q -> I2(2n).

    Args:
        ftype: folding type
        vertices: vertex names of Q in the order of the ring's vertex basis
        B: integer exchange matrix of Q
        weights: vertex weights w(i)
        image: 0 or 1 per vertex, the block F(i)
        target: exchange matrix of the folded quiver with its valuation
        doubled: whether Q is the doubled quiver Q + Q^op
    """
    ftype: FoldingType
    vertices: Tuple[str, ...]
    B: np.ndarray
    weights: Tuple[RealCycNumber, ...]
    image: Tuple[int, ...]
    target: ExchangeMatrix
    doubled: bool = False

    @property
    def n(self) -> int:
        return self.ftype.n

    @property
    def ctx(self):
        return cyc_context(self.ftype.n)

    @property
    def mu(self) -> Tuple[RealCycNumber, RealCycNumber]:
        return self.target.valuation

    @property
    def blocks(self) -> Tuple[List[int], List[int]]:
        return ([i for i, c in enumerate(self.image) if c == 0],
                [i for i, c in enumerate(self.image) if c == 1])

    def index(self, vertex: str) -> int:
        try:
            return self.vertices.index(vertex)
        except ValueError:
            raise KeyError(f"unknown vertex {vertex!r} for {self.ftype}") from None

    def weight(self, vertex: str) -> RealCycNumber:
        return self.weights[self.index(vertex)]

    def row_weight(self, vertex: str) -> RealCycNumber:
        i = self.index(vertex)
        return self.weights[i] / self.mu[self.image[i]]

    def arrows(self) -> List[Tuple[str, str]]:
        return [(self.vertices[i], self.vertices[j])
                for i in range(len(self.vertices)) for j in range(len(self.vertices)) if self.B[i, j] > 0]

    def rescaled_target(self) -> np.ndarray:
        return rescale(self.target.matrix, self.mu)

    def is_origami(self, B: Optional[np.ndarray] = None, Bp: Optional[np.ndarray] = None) -> bool:
        B = self.B if B is None else B
        Bp = self.target.matrix if Bp is None else Bp
        return is_origami(B, Bp, self.weights, self.mu, self.blocks)

    def to_json(self) -> dict:
        return {
            "type": self.ftype.name,
            "doubled": self.doubled,
            "vertices": [{"id": v, "weight": w.to_json(), "image": f"[{c}]"}
                         for v, w, c in zip(self.vertices, self.weights, self.image)],
            "matrix": _matrix_json(self.B),
            "valuation": {"[0]": self.mu[0].to_json(), "[1]": self.mu[1].to_json()},
        }


def standard_target(n: int, scale=1) -> ExchangeMatrix:
    """B' = [[0, θ²], [-1, 0]] with valuation (scale, scale·θ)"""
    ctx = cyc_context(n)
    theta = ctx.theta()
    matrix = cyc_matrix(ctx, [[0, theta * theta], [-1, 0]])
    return ExchangeMatrix(('[0]', '[1]'), matrix, (ctx.one() * scale, theta * scale))


def skew_target(n: int, scale=1) -> ExchangeMatrix:
    """B' = [[0, θ], [-θ, 0]] with valuation (scale, scale)"""
    ctx = cyc_context(n)
    theta = ctx.theta()
    matrix = cyc_matrix(ctx, [[0, theta], [-theta, 0]])
    return ExchangeMatrix(('[0]', '[1]'), matrix, (ctx.one() * scale, ctx.one() * scale))


@lru_cache(maxsize=None)
def build_folding(ftype) -> Folding:
    """The weighted folding of the bipartite Dynkin quiver of ftype onto I2(2n)"""
    if isinstance(ftype, str):
        ftype = FoldingType.parse(ftype)
    ring = chebyshev_ring(ftype)
    vertices = tuple(ring.vertices)
    index = {v: i for i, v in enumerate(vertices)}

    B = np.zeros((len(vertices), len(vertices)), dtype=np.int64)
    sources = set()
    for a, b in dynkin_arrows(ftype):
        B[index[a], index[b]] = 1
        B[index[b], index[a]] = -1
        sources.add(a)
    image = tuple(0 if v in sources else 1 for v in vertices)

    factor = 2 if ftype.is_d4 else 1
    weights = tuple(rho_eval(elt) * factor for _, elt in ring.vertex_basis)
    target = standard_target(ftype.n, ftype.lam)
    folding = Folding(ftype, vertices, B, weights, image, target)
    if not folding.is_origami():
        raise FoldingError(f"initial data of {ftype} is not an origami pair")
    logger.debug("built folding %s with %d vertices", ftype, len(vertices))
    return folding


def doubled_order(folding: Folding) -> List[Tuple[int, int]]:
    """
    Doubled vertices as (copy, index) pairs, copy 0 for Q and 1 for Q^op.

    Block [0] holds the source copy of every vertex and block [1] the other,
    each in vertex-basis order. Against the ordering sources of Q, sources of
    Q^op, sinks of Q^op, sinks of Q this permutes within each half only: the
    first half interleaves the sources of Q with the sources of Q^op by vertex
    index, which keeps every 2x2 block of a doubled C-matrix in the ring's
    vertex basis.
    """
    size = len(folding.vertices)
    first = [(0, i) if folding.image[i] == 0 else (1, i) for i in range(size)]
    second = [(1 - c, i) for c, i in first]
    return first + second


def double_matrix(M: np.ndarray, order: Sequence[Tuple[int, int]],
                  opposite: Optional[np.ndarray] = None) -> np.ndarray:
    """V (M + M') V^-1 in the doubled vertex order, M' the Q^op matrix (M^T by default)"""
    size = M.shape[0]
    big = np.zeros((2 * size, 2 * size), dtype=M.dtype)
    big[:size, :size] = M
    big[size:, size:] = M.T if opposite is None else opposite
    pos = [c * size + i for c, i in order]
    return big[np.ix_(pos, pos)]


def restrict_doubled(M: np.ndarray, order: Sequence[Tuple[int, int]]) -> np.ndarray:
    """Λ M Θ: the block of a doubled matrix indexed by the copy of Q"""
    size = len(order) // 2
    where = {key: a for a, key in enumerate(order)}
    pos = [where[(0, i)] for i in range(size)]
    return M[np.ix_(pos, pos)]


@lru_cache(maxsize=None)
def opposite_folding(ftype) -> Folding:
    """
    The folding of Q^op alone, vertices named as the Q^op copy of the doubled
    quiver. Block [0] is the sinks of Q, which are the sources of Q^op.
    """
    if isinstance(ftype, str):
        ftype = FoldingType.parse(ftype)
    base = build_folding(ftype)
    ctx = cyc_context(ftype.n)
    theta = ctx.theta()
    target = ExchangeMatrix(('[0]', '[1]'), cyc_matrix(ctx, [[0, 1], [-theta * theta, 0]]),
                            (theta * ftype.lam, ctx.one() * ftype.lam))
    names = tuple(v + "'" for v in base.vertices)
    image = tuple(1 - c for c in base.image)
    folding = Folding(ftype, names, base.B.T.copy(), base.weights, image, target)
    if not folding.is_origami():
        raise FoldingError(f"opposite data of {ftype} is not an origami pair")
    return folding


@lru_cache(maxsize=None)
def doubled_folding(ftype) -> Folding:
    """The folding of Q + Q^op onto I2(2n) with valuation (λ, λ)"""
    if isinstance(ftype, str):
        ftype = FoldingType.parse(ftype)
    base = build_folding(ftype)
    order = doubled_order(base)
    names = tuple(base.vertices[i] + ("'" if c else "") for c, i in order)
    B = double_matrix(base.B, order)
    weights = tuple(base.weights[i] for _, i in order)
    size = len(base.vertices)
    image = tuple([0] * size + [1] * size)
    folding = Folding(ftype, names, B, weights, image, skew_target(ftype.n, ftype.lam), doubled=True)
    if not folding.is_origami():
        raise FoldingError(f"doubled data of {ftype} is not an origami pair")
    return folding


# -------------------------
# Unfolding verification
# -------------------------
def block_words(depth: int) -> Iterator[Tuple[int, ...]]:
    """Words over {0, 1} without immediate repeats, shortest first"""
    yield ()
    for length in range(1, depth + 1):
        for start in (0, 1):
            yield tuple((start + t) % 2 for t in range(length))


@dataclass
class UnfoldingReport:
    folding: str
    depth: int
    checked: int = 0
    failures: List[Tuple[Tuple[int, ...], str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_unfolding(folding: Folding, depth: int) -> UnfoldingReport:
    """Check the origami conditions along every block-mutation word up to depth"""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    report = UnfoldingReport(folding.ftype.name + (" doubled" if folding.doubled else ""), depth)
    blocks = folding.blocks
    expected_d = symmetrizer(folding.B)

    report.checked += 1
    if not folding.is_origami():
        report.failures.append(((), "initial pair is not origami"))
    for start in (0, 1):
        B, Bp = folding.B, folding.target.matrix
        word: Tuple[int, ...] = ()
        for step in range(depth):
            k = (start + step) % 2
            B = composite_mutate(B, blocks[k])
            Bp = mutate_matrix(Bp, k)
            word = word + (k,)
            report.checked += 1
            if not folding.is_origami(B, Bp):
                report.failures.append((word, "origami conditions fail"))
            elif symmetrizer(B) != expected_d:
                report.failures.append((word, "symmetrizer changed"))
    logger.debug("unfolding check for %s: %d pairs, %d failures",
                 report.folding, report.checked, len(report.failures))
    return report


# -------------------------
# Helpers
# -------------------------
def _one_like(B: np.ndarray):
    for x in B.flat:
        if isinstance(x, RealCycNumber):
            return x.ctx.one()
    return Fraction(1)


def _equal(A, B) -> bool:
    A = np.asarray(A)
    B = np.asarray(B)
    return A.shape == B.shape and all(a == b for a, b in zip(A.flat, B.flat))


def _value_json(x):
    return x.to_json() if isinstance(x, RealCycNumber) else int(x)


def _matrix_json(M) -> list:
    return [[_value_json(x) for x in row] for row in np.asarray(M)]
