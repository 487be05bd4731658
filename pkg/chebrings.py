"""
Chebyshev Rings
The hat-rings attached to each folding type: canonical bases, multiplication
tables, evaluation into Q(2cos π/2n), regular representations and the partial
order on the non-negative cone.
"""
from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, zeros

from algnum import RealCycNumber, chebyshev_u, chebyshev_v, cyc_context

logger = logging.getLogger(__name__)

E_HALF_ORDERS = {6: 6, 7: 9, 8: 15}


class RingMismatchError(ValueError):
    """Raised when elements of different folding types are combined"""


@dataclass(frozen=True)
class FoldingType:
    """A Dynkin type folding onto I2(2n)"""
    family: str
    rank: int

    def __post_init__(self):
        if self.family == 'A':
            if self.rank < 3 or self.rank % 2 == 0:
                raise ValueError(f"type A needs an odd rank 2n-1 with n >= 2, got A{self.rank}")
        elif self.family == 'D':
            if self.rank < 4:
                raise ValueError(f"type D needs rank n+1 with n >= 3, got D{self.rank}")
        elif self.family == 'E':
            if self.rank not in E_HALF_ORDERS:
                raise ValueError(f"unknown exceptional type E{self.rank}")
        else:
            raise ValueError(f"unknown family {self.family!r}")

    @classmethod
    def parse(cls, text: str) -> 'FoldingType':
        match = re.fullmatch(r'\s*([ADEade])\s*(\d+)\s*', str(text))
        if not match:
            raise ValueError(f"invalid folding type: {text!r}")
        return cls(match.group(1).upper(), int(match.group(2)))

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def n(self) -> int:
        """Half-order of the target I2(2n)"""
        if self.family == 'A':
            return (self.rank + 1) // 2
        if self.family == 'D':
            return self.rank - 1
        return E_HALF_ORDERS[self.rank]

    @property
    def is_d4(self) -> bool:
        return self.family == 'D' and self.rank == 4

    @property
    def uses_ideal(self) -> bool:
        return self.family == 'D' and not self.is_d4

    @property
    def lam(self) -> int:
        """Valuation of the doubled target; 2 for every D type, D4 included, matching the 2ρ vertex weights"""
        return 2 if self.family == 'D' else 1

    def __str__(self):
        return self.name


# -------------------------
# Dynkin data
# -------------------------
def dynkin_arrows(ftype: FoldingType) -> List[Tuple[str, str]]:
    """Bipartite orientation: every arrow runs source -> sink"""
    n = ftype.n

    def path(length):
        arrows = []
        for i in range(length - 1):
            a, b = (i, i + 1) if i % 2 == 0 else (i + 1, i)
            arrows.append((str(a), str(b)))
        return arrows

    if ftype.family == 'A':
        return path(2 * n - 1)
    if ftype.family == 'D':
        arrows = path(n - 1)
        last = n - 2
        for fork in (f"{n - 1}+", f"{n - 1}-"):
            if last % 2 == 0:
                arrows.append((str(last), fork))
            else:
                arrows.append((fork, str(last)))
        return arrows
    if ftype.rank == 6:
        return [('0+', '1+'), ('0-', '1-'), ('2', '1+'), ('2', '1-'), ('2', 'v6')]
    if ftype.rank == 7:
        return [('0', '1'), ('2', '1'), ('2', '3'), ('~1', '3'), ('~2', '3'), ('~2', 'v7')]
    return [('0', '1'), ('2', '1'), ('2', '3'), ('4', '3'), ('4', 'v8'), ('4', 'phi1'), ('phi0', 'phi1')]


# basis label -> vertex
_E_VERTEX_OF = {
    6: {'w0+': '0+', 'w0-': '0-', 'w1+': '1+', 'w1-': '1-', 'w2': '2', 'wv6': 'v6'},
    7: {'w0': '0', 'w1': '1', '~w1': '~1', 'w2': '2', '~w2': '~2', 'w3': '3', 'wv7': 'v7'},
    8: {'w0': '0', 'phi': 'phi0', 'w1': '1', 'phi*w1': 'phi1', 'w2': '2',
        'phi*w2': '4', 'wv8': 'v8', 'phi*wv8': '3'},
}


# -------------------------
# Elements
# -------------------------
class RingElt:
    """Integer coordinates over the canonical basis of a hat-ring"""

    __slots__ = ('ring', 'coords')

    def __init__(self, ring: 'ChebyshevRing', coords):
        coords = np.asarray(coords, dtype=np.int64)
        if coords.shape != (len(ring.labels),):
            raise ValueError(f"expected {len(ring.labels)} coordinates, got shape {coords.shape}")
        self.ring = ring
        self.coords = coords

    def _check(self, other: 'RingElt'):
        if not isinstance(other, RingElt):
            return False
        if other.ring.ftype != self.ring.ftype:
            raise RingMismatchError(f"cannot combine {self.ring.ftype} and {other.ring.ftype} elements")
        return True

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.one() * other
        if not self._check(other):
            return NotImplemented
        return RingElt(self.ring, self.coords + other.coords)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.one() * other
        if not self._check(other):
            return NotImplemented
        return RingElt(self.ring, self.coords - other.coords)

    def __rsub__(self, other):
        if isinstance(other, int):
            return self.ring.one() * other - self
        return NotImplemented

    def __neg__(self):
        return RingElt(self.ring, -self.coords)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return RingElt(self.ring, self.coords * int(other))
        if not self._check(other):
            return NotImplemented
        return ring_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer)):
            return RingElt(self.ring, self.coords * int(other))
        return NotImplemented

    def __pow__(self, exponent: int):
        result = self.ring.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.one() * other
        if not isinstance(other, RingElt):
            return NotImplemented
        return other.ring.ftype == self.ring.ftype and bool(np.array_equal(self.coords, other.coords))

    def __hash__(self):
        return hash((self.ring.ftype, tuple(int(c) for c in self.coords)))

    def is_zero(self) -> bool:
        return not self.coords.any()

    def support(self) -> Dict[str, int]:
        return {label: int(c) for label, c in zip(self.ring.labels, self.coords) if c}

    def __repr__(self):
        return f"<RingElt {self.ring.ftype} {self}>"

    def __str__(self):
        parts = []
        for label, c in self.support().items():
            body = label if abs(c) == 1 else f"{abs(c)}*{label}"
            parts.append(("-" if c < 0 else "+", body))
        if not parts:
            return "0"
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, body in parts[1:]:
            text += f" {s} {body}"
        return text

    def to_json(self) -> dict:
        return {"type": self.ring.ftype.name, "coords": self.support()}


# -------------------------
# Rings
# -------------------------
class ChebyshevRing:
    """
    The hat-ring of a folding type.

    Args:
        ftype: the folding type
        labels: canonical basis labels, identity first
        table: structure constants, table[i, j, k] = coefficient of b_k in b_i b_j
        rho: images of the basis elements in Q(2cos π/2n)
    """

    def __init__(self, ftype: FoldingType, labels: Sequence[str], table: np.ndarray,
                 rho: Sequence[RealCycNumber]):
        self.ftype = ftype
        self.ctx = cyc_context(ftype.n)
        self.labels = tuple(labels)
        self.index = {label: i for i, label in enumerate(self.labels)}
        self.table = np.asarray(table, dtype=np.int64)
        self.rho_basis = tuple(rho)
        # column j of _left[i] holds b_j * b_i
        self._left = np.einsum('jik->ikj', self.table)
        self.vertex_basis: List[Tuple[str, RingElt]] = []
        self.small_basis: List[RingElt] = []
        self.block_generator = 'w1'

    def __repr__(self):
        return f"<ChebyshevRing {self.ftype} rank={len(self.labels)}>"

    def element(self, label: str) -> RingElt:
        coords = np.zeros(len(self.labels), dtype=np.int64)
        try:
            coords[self.index[label]] = 1
        except KeyError:
            raise KeyError(f"unknown basis label {label!r} for {self.ftype}") from None
        return RingElt(self, coords)

    def one(self) -> RingElt:
        return self.element(self.labels[0])

    def zero(self) -> RingElt:
        return RingElt(self, np.zeros(len(self.labels), dtype=np.int64))

    def basis(self) -> List[RingElt]:
        return [self.element(label) for label in self.labels]

    def parse(self, text: str) -> RingElt:
        """Parse sums of products such as "1 + w2 - 2*phi*w1" or "w0+ + w2-" """
        source = text.replace(' ', '')
        if not source:
            raise ValueError("empty ring expression")
        # longest label first, so that "w0+" wins over "w0" and "g2" over "g"
        labels = sorted(self.labels, key=len, reverse=True)
        result = self.zero()
        pos = 0
        while pos < len(source):
            sign = 1
            if source[pos] in '+-':
                sign = -1 if source[pos] == '-' else 1
                pos += 1
            value = self.one()
            while True:
                digits = re.match(r'\d+', source[pos:])
                if digits:
                    value = value * int(digits.group())
                    pos += digits.end()
                else:
                    label = next((l for l in labels if source.startswith(l, pos)), None)
                    if label is None:
                        raise ValueError(f"cannot parse {text!r} at position {pos}")
                    value = value * self.element(label)
                    pos += len(label)
                if pos < len(source) and source[pos] not in '+-':
                    if source[pos] == '*':
                        pos += 1
                    continue
                break
            result = result + value if sign > 0 else result - value
        return result

    # -------------------------
    # Vertex identification
    # -------------------------
    @property
    def vertices(self) -> List[str]:
        return [v for v, _ in self.vertex_basis]

    def vertex_element(self, vertex: str) -> RingElt:
        for v, elt in self.vertex_basis:
            if v == vertex:
                return elt
        raise KeyError(f"unknown vertex {vertex!r} for {self.ftype}")

    def vertex_coords(self, x: RingElt) -> np.ndarray:
        """Coordinates of x over the vertex basis"""
        if not self.ftype.uses_ideal:
            return x.coords.copy()
        n = self.ftype.n
        out = []
        for i in range(n - 1):
            plus = x.coords[self.index[f"w{i}+"]]
            minus = x.coords[self.index[f"w{i}-"]]
            if plus != minus:
                raise ValueError(f"{x} does not lie in the ideal spanned by the vertex basis")
            out.append(plus)
        out.append(x.coords[self.index[f"w{n - 1}+"]])
        out.append(x.coords[self.index[f"w{n - 1}-"]])
        return np.array(out, dtype=np.int64)

    def vertex_rep(self, a: RingElt) -> np.ndarray:
        """Action of a on the vertex basis (the ideal representation in type D)"""
        if not self.ftype.uses_ideal:
            return regular_rep(a)
        columns = [self.vertex_coords(elt * a) for _, elt in self.vertex_basis]
        return np.stack(columns, axis=1)

    # -------------------------
    # Small ring
    # -------------------------
    def small_coords(self, a: RingElt) -> Optional[np.ndarray]:
        """Integer coordinates of a over the small basis, or None"""
        S = np.stack([b.coords for b in self.small_basis], axis=1).astype(float)
        guess, *_ = np.linalg.lstsq(S, a.coords.astype(float), rcond=None)
        x = np.rint(guess).astype(np.int64)
        S_int = np.stack([b.coords for b in self.small_basis], axis=1)
        if np.array_equal(S_int @ x, a.coords):
            return x
        return None

    def in_small_semiring(self, a: RingElt) -> bool:
        x = self.small_coords(a)
        return x is not None and bool((x >= 0).all())

    def from_small(self, x) -> RingElt:
        result = self.zero()
        for c, b in zip(x, self.small_basis):
            if c:
                result = result + b * int(c)
        return result


# -------------------------
# Operations
# -------------------------
def ring_mul(a: RingElt, b: RingElt) -> RingElt:
    """Product in the canonical basis"""
    if a.ring.ftype != b.ring.ftype:
        raise RingMismatchError(f"cannot multiply {a.ring.ftype} by {b.ring.ftype}")
    coords = np.einsum('i,j,ijk->k', a.coords, b.coords, a.ring.table)
    return RingElt(a.ring, coords)


def rho_eval(a: RingElt) -> RealCycNumber:
    """Evaluation homomorphism into Q(2cos π/2n)"""
    ctx = a.ring.ctx
    total = ctx.zero()
    for c, value in zip(a.coords, a.ring.rho_basis):
        if c:
            total = total + value * int(c)
    return total


def regular_rep(a: RingElt) -> np.ndarray:
    """Column j holds the coordinates of b_j * a"""
    return np.einsum('i,ikj->kj', a.coords, a.ring._left)


def is_semiring_member(a: RingElt) -> bool:
    return bool((a.coords >= 0).all())


def partial_cmp(a: RingElt, b: RingElt) -> str:
    """'lt', 'eq', 'gt' or 'incomparable'"""
    if a.ring.ftype != b.ring.ftype:
        raise RingMismatchError(f"cannot compare {a.ring.ftype} with {b.ring.ftype}")
    if np.array_equal(a.coords, b.coords):
        return 'eq'
    s = (rho_eval(b) - rho_eval(a)).sign()
    if s > 0:
        return 'lt'
    if s < 0:
        return 'gt'
    return 'incomparable'


# -------------------------
# Table construction
# -------------------------
def _table_from_rule(labels: Sequence[str], rule) -> np.ndarray:
    size = len(labels)
    index = {label: i for i, label in enumerate(labels)}
    table = np.zeros((size, size, size), dtype=np.int64)
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            for label, c in rule(a, b).items():
                table[i, j, index[label]] += c
    return table


def _build_a(ftype: FoldingType) -> ChebyshevRing:
    n = ftype.n
    ctx = cyc_context(n)
    labels = [f"w{i}" for i in range(2 * n - 1)]

    def rule(a, b):
        i, j = int(a[1:]), int(b[1:])
        if i < j:
            i, j = j, i
        out = Counter()
        for k in range(j + 1):
            m = i - j + 2 * k
            if m <= 2 * n - 2:
                out[f"w{m}"] += 1
            elif m >= 2 * n:
                out[f"w{4 * n - 2 - m}"] -= 1
        return out

    ring = ChebyshevRing(ftype, labels, _table_from_rule(labels, rule),
                         [chebyshev_u(ctx, i) for i in range(2 * n - 1)])
    ring.vertex_basis = [(str(i), ring.element(f"w{i}")) for i in range(2 * n - 1)]
    ring.small_basis = [ring.element(f"w{2 * j}") for j in range(n)]
    return ring


def _d_plus_product(n: int, i: int, j: int) -> Counter:
    """w_i^+ w_j^+ as a Counter over (index, sign)"""
    if i < j:
        i, j = j, i
    out = Counter()
    for k in range(j + 1):
        m = i - j + 2 * k
        if m < n - 1:
            out[(m, 1)] += 1
        elif m == n - 1:
            out[(n - 1, 1 if (i + j - n + 1) % 4 == 0 else -1)] += 1
        else:
            out[(2 * n - 2 - m, -1)] += 1
    return out


def _build_d(ftype: FoldingType) -> ChebyshevRing:
    n = ftype.n
    ctx = cyc_context(n)
    labels = [f"w{i}{s}" for i in range(n) for s in '+-']

    def rule(a, b):
        i, s = int(a[1:-1]), a[-1]
        j, t = int(b[1:-1]), b[-1]
        flip = (s == '-') != (t == '-')
        out = Counter()
        for (m, sign), c in _d_plus_product(n, i, j).items():
            if flip:
                sign = -sign
            out[f"w{m}{'+' if sign > 0 else '-'}"] += c
        return out

    rho = [chebyshev_u(ctx, i) for i in range(n) for _ in '+-']
    ring = ChebyshevRing(ftype, labels, _table_from_rule(labels, rule), rho)
    ring.block_generator = 'w1+'
    ring.vertex_basis = [(str(i), ring.element(f"w{i}+") + ring.element(f"w{i}-")) for i in range(n - 1)]
    ring.vertex_basis += [(f"{n - 1}{s}", ring.element(f"w{n - 1}{s}")) for s in '+-']
    small = [ring.element('w0+'), ring.element('w0-')]
    for i in range(2, n, 2):
        small += [ring.element(f"w{i}+"), ring.element(f"w{i}-")]
    ring.small_basis = small
    return ring


def _build_d4(ftype: FoldingType) -> ChebyshevRing:
    ctx = cyc_context(3)
    labels = ['1', 'w1', 'g', 'g2']
    products = {
        ('w1', 'w1'): {'1': 1, 'g': 1, 'g2': 1},
        ('w1', 'g'): {'w1': 1},
        ('w1', 'g2'): {'w1': 1},
        ('g', 'g'): {'g2': 1},
        ('g', 'g2'): {'1': 1},
        ('g2', 'g2'): {'g': 1},
    }

    def rule(a, b):
        if a == '1':
            return {b: 1}
        if b == '1':
            return {a: 1}
        return products.get((a, b)) or products[(b, a)]

    rho = [ctx.one(), chebyshev_u(ctx, 1), ctx.one(), ctx.one()]
    ring = ChebyshevRing(ftype, labels, _table_from_rule(labels, rule), rho)
    ring.vertex_basis = [('0', ring.element('1')), ('1', ring.element('w1')),
                         ('2+', ring.element('g')), ('2-', ring.element('g2'))]
    ring.small_basis = [ring.element('1'), ring.element('g'), ring.element('g2')]
    return ring


def _adjacency(ftype: FoldingType, vertices: Sequence[str]) -> np.ndarray:
    index = {v: i for i, v in enumerate(vertices)}
    A = np.zeros((len(vertices), len(vertices)), dtype=np.int64)
    for a, b in dynkin_arrows(ftype):
        A[index[a], index[b]] = A[index[b], index[a]] = 1
    return A


def _closure_table(A: np.ndarray, identity: int) -> np.ndarray:
    """
    Structure constants of the commutative ring in which the block generator
    acts by the adjacency matrix A and the identity sits at vertex `identity`.
    The identity vector must be cyclic for A.
    """
    size = A.shape[0]
    M = Matrix(A.tolist())
    e0 = zeros(size, 1)
    e0[identity] = 1
    powers = [M ** k for k in range(size)]
    K = Matrix.hstack(*[P * e0 for P in powers])
    if K.det() == 0:
        raise ArithmeticError("identity vector is not cyclic for the adjacency matrix")

    reps = []
    for v in range(size):
        target = zeros(size, 1)
        target[v] = 1
        c = K.LUsolve(target)
        L = zeros(size, size)
        for k in range(size):
            if c[k] != 0:
                L += c[k] * powers[k]
        if not all(x.is_integer for x in L):
            raise ArithmeticError(f"regular representation of basis element {v} is not integral")
        reps.append(np.array(L.tolist(), dtype=np.int64))

    table = np.zeros((size, size, size), dtype=np.int64)
    for j, L in enumerate(reps):
        for i in range(size):
            table[i, j, :] = L[:, i]
    return table


def _build_e(ftype: FoldingType) -> ChebyshevRing:
    n = ftype.n
    ctx = cyc_context(n)
    vertex_of = _E_VERTEX_OF[ftype.rank]
    labels = list(vertex_of)
    vertices = [vertex_of[label] for label in labels]
    identity = 0
    table = _closure_table(_adjacency(ftype, vertices), identity)

    u = lambda i: chebyshev_u(ctx, i)
    v = lambda k: chebyshev_v(ctx, k)
    if ftype.rank == 6:
        rho = [u(0), u(0), u(1), u(1), u(2), v(3)]
        small = ['w0+', 'w0-', 'w2']
    elif ftype.rank == 7:
        c = v(2)
        rho = [u(0), u(1), c, u(2), c * c - 1, u(3), v(5)]
        small = ['w0', 'w2', '~w2']
    else:
        phi = v(6)
        rho = [u(0), phi, u(1), phi * u(1), u(2), phi * u(2), (phi - 1) * u(3), u(3)]
        small = ['w0', 'phi', 'w2', 'phi*w2']

    ring = ChebyshevRing(ftype, labels, table, rho)
    if ftype.rank == 6:
        ring.block_generator = 'w1+'
    ring.vertex_basis = [(vertex_of[label], ring.element(label)) for label in labels]
    ring.small_basis = [ring.element(label) for label in small]
    if ftype.rank == 7:
        ring.small_basis.append(ring.element('w2') * ring.element('~w2'))
    return ring


@lru_cache(maxsize=None)
def chebyshev_ring(ftype: FoldingType) -> ChebyshevRing:
    """Build (once) the hat-ring of a folding type"""
    if isinstance(ftype, str):
        ftype = FoldingType.parse(ftype)
    if ftype.family == 'A':
        ring = _build_a(ftype)
    elif ftype.is_d4:
        ring = _build_d4(ftype)
    elif ftype.family == 'D':
        ring = _build_d(ftype)
    else:
        ring = _build_e(ftype)
    logger.debug("built %r", ring)
    return ring


def maximality_element(ring: ChebyshevRing) -> RingElt:
    """The element whose action fills a whole column from any generator"""
    ftype = ring.ftype
    n = ftype.n
    if ftype.family == 'A':
        return sum((ring.element(f"w{2 * j}") for j in range(n)), ring.zero())
    if ftype.is_d4:
        return ring.parse('1 + g + g2')
    if ftype.family == 'D':
        total = ring.zero()
        for i in range(0, n, 2):
            total = total + ring.element(f"w{i}+") + ring.element(f"w{i}-")
        return total
    if ftype.rank == 6:
        return ring.parse('w0+ + w0- + w2')
    if ftype.rank == 7:
        return ring.parse('1 + w2 + ~w2 + w2*~w2')
    return ring.parse('1 + w2 + phi + phi*w2')


# Presentations of the E rings: the relations among the block generators,
# then those fixing the remaining vertex generators.
E_RELATIONS: Dict[int, Tuple[str, ...]] = {
    6: ('w0-*w0- - 1', 'w2*w2 - 1 - 2*w2 - w0-', 'w0-*w2 - w2',
        'w0-*w1+ - w1-', 'w1+*w1+ - 1 - w2', 'w1+*w2 - w1+ - w1- - wv6', 'w1+*wv6 - w2'),
    7: ('w2*w2 - 1 - w2*~w2', '~w2*~w2 - 1 - ~w2 - w2',
        'w1*w1 - 1 - w2', '~w1 - w2*~w2 + w2 + ~w2', 'w1*w2 - w3 - w1', 'w1*~w2 - w3 - wv7'),
    8: ('phi*phi - phi - 1', 'w2*w2 - phi*w2 - w2 - 1',
        'w1*w1 - 1 - w2', 'w1*w2 - w1 - phi*wv8', 'w1*wv8 - phi*w2'),
}


def defining_relations(ring: ChebyshevRing) -> Dict[str, RingElt]:
    """
    Relations that vanish in the ring, keyed by a readable form.

    Every type carries the neighbour relations gen·b_v = Σ_{u ~ v} b_u of the
    block generator on the vertex basis; D4 and the E types add their
    presentations.
    """
    ftype = ring.ftype
    gen = ring.element(ring.block_generator)
    vertices = ring.vertices
    A = _adjacency(ftype, vertices)
    out: Dict[str, RingElt] = {}
    for i, v in enumerate(vertices):
        neighbours = ring.zero()
        for j, u in enumerate(vertices):
            if A[i, j]:
                neighbours = neighbours + ring.vertex_element(u)
        out[f"{ring.block_generator}*[{v}] - neighbours"] = gen * ring.vertex_element(v) - neighbours
    if ftype.is_d4:
        out['g*g*g - 1'] = ring.parse('g*g*g - 1')
        out['g*w1 - w1'] = ring.parse('g*w1 - w1')
        out['w1*w1 - 1 - g - g2'] = ring.parse('w1*w1 - 1 - g - g2')
    elif ftype.family == 'E':
        for text in E_RELATIONS[ftype.rank]:
            out[text] = ring.parse(text)
    return out
