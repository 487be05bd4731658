"""
Exact Real Cyclotomic Arithmetic
Elements of Q(θ), θ = 2cos(π/2n), kept as rational coefficient vectors in the
power basis of θ and ordered through the real embedding.
"""
from __future__ import annotations

import logging
import math
import numbers
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from mpmath import mp, mpf
from sympy import Poly, QQ, Rational, Symbol, cyclotomic_poly, invert

logger = logging.getLogger(__name__)

_x = Symbol('x')
_y = Symbol('y')

# mp.prec is global to the mpmath context
_MP_LOCK = threading.Lock()


class ContextMismatchError(ValueError):
    """Raised when two values from different fields are combined"""


@dataclass(frozen=True)
class CycContext:
    """The field Q(2cos(π/2n)) with its minimal polynomial (low degree first)"""
    n: int
    degree: int
    minpoly: tuple

    def __repr__(self):
        return f"<CycContext n={self.n} degree={self.degree}>"

    @property
    def theta_float(self) -> float:
        return 2 * math.cos(math.pi / (2 * self.n))

    def element(self, coeffs: Iterable) -> 'RealCycNumber':
        return RealCycNumber(self, coeffs)

    def zero(self) -> 'RealCycNumber':
        return RealCycNumber(self, ())

    def one(self) -> 'RealCycNumber':
        return RealCycNumber(self, (1,))

    def theta(self) -> 'RealCycNumber':
        return RealCycNumber(self, (0, 1))

    def coerce(self, value) -> 'RealCycNumber':
        if isinstance(value, RealCycNumber):
            if value.ctx != self:
                raise ContextMismatchError(f"value lives in n={value.ctx.n}, expected n={self.n}")
            return value
        return RealCycNumber(self, (value,))


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as a rational coefficient")


def parse_rational(text: str) -> Fraction:
    """Parse a "p/q" or "p" string"""
    return Fraction(text.strip())


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@lru_cache(maxsize=None)
def cyc_context(n: int) -> CycContext:
    """
    Build Q(2cos(π/2n)).

    The minimal polynomial m of θ is read off the palindromic cyclotomic
    polynomial through Φ_{4n}(x) = x^d · m(x + 1/x).
    """
    if not isinstance(n, numbers.Integral) or n < 2:
        raise ValueError(f"invalid order: n must be an integer >= 2, got {n!r}")
    n = int(n)

    phi = Poly(cyclotomic_poly(4 * n, _x), _x)
    coeffs = [int(c) for c in reversed(phi.all_coeffs())]
    d = phi.degree() // 2

    # x^j + x^-j = V_j(x + 1/x), V_0 = 2, V_1 = y
    v = [Poly(2, _y), Poly(_y, _y)]
    for j in range(2, d + 1):
        v.append(v[1] * v[j - 1] - v[j - 2])

    m = Poly(coeffs[d], _y)
    for j in range(1, d + 1):
        m = m + v[j] * coeffs[d + j]

    minpoly = tuple(int(c) for c in reversed(m.all_coeffs()))
    if len(minpoly) != d + 1 or minpoly[-1] != 1:
        raise ArithmeticError(f"substitution did not produce a monic degree-{d} polynomial for n={n}")

    logger.debug("built context n=%d degree=%d minpoly=%s", n, d, minpoly)
    return CycContext(n=n, degree=d, minpoly=minpoly)


class RealCycNumber:
    """An exact element of Q(2cos(π/2n))"""

    __slots__ = ('ctx', 'coeffs')

    def __init__(self, ctx: CycContext, coeffs: Iterable):
        values = [_to_fraction(c) for c in coeffs]
        self.ctx = ctx
        self.coeffs = _reduce(values, ctx)

    @classmethod
    def _raw(cls, ctx: CycContext, coeffs: tuple) -> 'RealCycNumber':
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.coeffs = coeffs
        return obj

    # -------------------------
    # Coercion
    # -------------------------
    def _other(self, other):
        if isinstance(other, RealCycNumber):
            if other.ctx != self.ctx:
                raise ContextMismatchError(
                    f"cannot combine values from n={self.ctx.n} and n={other.ctx.n}"
                )
            return other.coeffs
        if isinstance(other, (numbers.Rational, Fraction)):
            d = self.ctx.degree
            return (_to_fraction(other),) + (Fraction(0),) * (d - 1)
        return None

    # -------------------------
    # Field operations
    # -------------------------
    def __add__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return RealCycNumber._raw(self.ctx, tuple(x + y for x, y in zip(self.coeffs, b)))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return RealCycNumber._raw(self.ctx, tuple(x - y for x, y in zip(self.coeffs, b)))

    def __rsub__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return RealCycNumber._raw(self.ctx, tuple(y - x for x, y in zip(self.coeffs, b)))

    def __neg__(self):
        return RealCycNumber._raw(self.ctx, tuple(-x for x in self.coeffs))

    def __pos__(self):
        return self

    def __mul__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        a = self.coeffs
        d = self.ctx.degree
        if not isinstance(other, RealCycNumber):
            return RealCycNumber._raw(self.ctx, tuple(x * b[0] for x in a))
        product = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        product[i + j] += x * y
        return RealCycNumber._raw(self.ctx, _reduce(product, self.ctx))

    __rmul__ = __mul__

    def inverse(self) -> 'RealCycNumber':
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(2cos(pi/2n))")
        if self.is_rational():
            return RealCycNumber._raw(
                self.ctx, (1 / self.coeffs[0],) + self.coeffs[1:]
            )
        f = Poly([Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)], _x, domain=QQ)
        m = Poly(list(reversed(self.ctx.minpoly)), _x, domain=QQ)
        g = invert(f, m)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(g.all_coeffs())]
        return RealCycNumber(self.ctx, coeffs)

    def __truediv__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        if isinstance(other, RealCycNumber):
            return self * other.inverse()
        if b[0] == 0:
            raise ZeroDivisionError("division by zero in Q(2cos(pi/2n))")
        return RealCycNumber._raw(self.ctx, tuple(x / b[0] for x in self.coeffs))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return RealCycNumber._raw(self.ctx, b) * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, numbers.Integral):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.ctx.one()
        base = self
        e = int(exponent)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -------------------------
    # Order and equality
    # -------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def sign(self) -> int:
        return sign_of(self)

    def __eq__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return self.coeffs == tuple(b)

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.ctx.n, self.coeffs))

    def _cmp(self, other):
        b = self._other(other)
        if b is None:
            return None
        return sign_of(RealCycNumber._raw(self.ctx, tuple(x - y for x, y in zip(self.coeffs, b))))

    def __lt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    def __bool__(self):
        return not self.is_zero()

    def __abs__(self):
        return -self if sign_of(self) < 0 else self

    def __float__(self):
        t = self.ctx.theta_float
        return sum(float(c) * t ** k for k, c in enumerate(self.coeffs))

    # -------------------------
    # Display and JSON
    # -------------------------
    def __repr__(self):
        return f"RealCycNumber(n={self.ctx.n}, {self})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = format_rational(abs(c))
            if k == 0:
                body = mag
            else:
                power = "θ" if k == 1 else f"θ^{k}"
                body = power if mag == "1" else f"{mag}*{power}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, body in terms[1:]:
            text += f" {s} {body}"
        return text

    def to_json(self) -> dict:
        return {"n": self.ctx.n, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> 'RealCycNumber':
        ctx = cyc_context(int(data["n"]))
        return cls(ctx, [parse_rational(c) for c in data["coeffs"]])


def _reduce(values: list, ctx: CycContext) -> tuple:
    """Reduce a coefficient list modulo the monic minimal polynomial"""
    d = ctx.degree
    m = ctx.minpoly
    values = list(values)
    for k in range(len(values) - 1, d - 1, -1):
        c = values[k]
        if c:
            for j in range(d):
                if m[j]:
                    values[k - d + j] -= c * m[j]
    values = values[:d]
    if len(values) < d:
        values.extend([Fraction(0)] * (d - len(values)))
    return tuple(values)


# -------------------------
# Operations
# -------------------------
def arith(a: RealCycNumber, b: RealCycNumber, op: str) -> RealCycNumber:
    """Apply one of add, sub, mul, div"""
    if a.ctx != b.ctx:
        raise ContextMismatchError(f"cannot combine values from n={a.ctx.n} and n={b.ctx.n}")
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    if op == 'div':
        return a / b
    raise ValueError(f"unknown operation: {op}")


def chebyshev_u(ctx: CycContext, i: int) -> RealCycNumber:
    """U_i(cos π/2n) via U_0 = 1, U_1 = θ, U_{i+1} = θU_i - U_{i-1}"""
    if i < 0:
        raise ValueError(f"Chebyshev index must be non-negative, got {i}")
    return _chebyshev_u(ctx, int(i))


@lru_cache(maxsize=None)
def _chebyshev_u(ctx: CycContext, i: int) -> RealCycNumber:
    theta = ctx.theta()
    prev, cur = ctx.one(), theta
    if i == 0:
        return prev
    for _ in range(i - 1):
        prev, cur = cur, theta * cur - prev
    return cur


@lru_cache(maxsize=None)
def chebyshev_v(ctx: CycContext, k: int) -> RealCycNumber:
    """2cos(kπ/2n) via V_0 = 2, V_1 = θ, V_{k+1} = θV_k - V_{k-1}"""
    if k < 0:
        raise ValueError(f"index must be non-negative, got {k}")
    theta = ctx.theta()
    prev, cur = ctx.one() * 2, theta
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, theta * cur - prev
    return cur


def _precision_bounds():
    start = int(os.environ.get('FOLDQ_PRECISION') or 53)
    ceiling = int(os.environ.get('FOLDQ_MAX_PRECISION') or 4096)
    return max(start, 16), max(ceiling, start)


def sign_of(x: RealCycNumber) -> int:
    """Sign of the real value of x at θ = 2cos(π/2n)"""
    coeffs = x.coeffs
    if not any(coeffs):
        return 0
    if not any(coeffs[1:]):
        return 1 if coeffs[0] > 0 else -1

    # float evaluation with a generous error bound
    t = x.ctx.theta_float
    terms = [float(c) * t ** k for k, c in enumerate(coeffs)]
    value = math.fsum(terms)
    bound = sum(abs(v) for v in terms) * 1e-12
    if abs(value) > bound:
        return 1 if value > 0 else -1

    prec, ceiling = _precision_bounds()
    steps = 0
    while prec <= ceiling:
        with _MP_LOCK:
            with mp.workprec(prec):
                theta = 2 * mp.cos(mp.pi / (2 * x.ctx.n))
                parts = [mpf(c.numerator) / c.denominator * theta ** k for k, c in enumerate(coeffs)]
                value = mp.fsum(parts)
                # rounding error of the sum stays below this
                radius = mp.fsum(abs(p) for p in parts) * (len(parts) + 8) * mp.ldexp(1, -prec + 4)
                positive = value > radius
                negative = value < -radius
        if positive:
            return 1
        if negative:
            return -1
        prec *= 2
        steps += 1
        if steps == 1:
            logger.warning("sign refinement for %s needs more than %d bits", x, prec // 2)
    raise ArithmeticError(f"sign of {x} not resolved within {ceiling} bits")


def compare(a: RealCycNumber, b: RealCycNumber) -> int:
    return sign_of(a - b)


# -------------------------
# Matrices over the field
# -------------------------
def cyc_matrix(ctx: CycContext, rows: Sequence[Sequence]) -> np.ndarray:
    """Object matrix of RealCycNumber entries"""
    return np.array([[ctx.coerce(v) for v in row] for row in rows], dtype=object)


def identity_matrix(ctx: CycContext, size: int) -> np.ndarray:
    return cyc_matrix(ctx, [[int(i == j) for j in range(size)] for i in range(size)])


def diagonal_matrix(ctx: CycContext, values: Sequence) -> np.ndarray:
    size = len(values)
    return cyc_matrix(ctx, [[values[i] if i == j else 0 for j in range(size)] for i in range(size)])


def matrix_inverse(X: np.ndarray) -> np.ndarray:
    """Invert a square matrix of field elements (Fraction or RealCycNumber).

    If X is non-square, a ValueError will be raised.
    If X is singular, a ZeroDivisionError will be raised.
    """
    X = np.array(X, dtype=object)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError("matrix is not square (shape = {})".format(X.shape))

    n = X.shape[0]
    X = np.array([[v if isinstance(v, (RealCycNumber, Fraction)) else _to_fraction(v)
                   for v in row] for row in X], dtype=object)
    zero = X[0, 0] * 0
    I = np.array([[zero + int(i == j) for j in range(n)] for i in range(n)], dtype=object)
    XI = np.hstack((X, I))

    for i in range(n):
        for j in range(i, n):
            if XI[j, i] != 0:
                if i != j:
                    XI[[i, j]] = XI[[j, i]]
                break
        else:
            raise ZeroDivisionError("matrix is singular")

        pivot = XI[i, i]
        XI[i, :] = np.array([v / pivot for v in XI[i, :]], dtype=object)
        for j in range(n):
            if j != i and XI[j, i] != 0:
                factor = XI[j, i]
                XI[j, :] = np.array([a - factor * b for a, b in zip(XI[j, :], XI[i, :])], dtype=object)

    return XI[:, n:]


def integer_inverse(X: np.ndarray) -> np.ndarray:
    """Inverse of an integer matrix whose inverse is integral"""
    inv = matrix_inverse(np.array(X, dtype=object))
    out = np.zeros(inv.shape, dtype=np.int64)
    for (i, j), v in np.ndenumerate(inv):
        if v.denominator != 1:
            raise ArithmeticError("inverse is not integral")
        out[i, j] = int(v.numerator)
    return out


def matrices_equal(A, B) -> bool:
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    if A.shape != B.shape:
        return False
    return all(a == b for a, b in zip(A.flat, B.flat))


def matrix_to_json(M: np.ndarray) -> list:
    return [[v.to_json() if isinstance(v, RealCycNumber) else int(v) for v in row] for row in M]
