from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from algnum import (ContextMismatchError, RealCycNumber, arith, chebyshev_u, chebyshev_v, cyc_context,
                    cyc_matrix, identity_matrix, integer_inverse, matrices_equal, matrix_inverse, matrix_to_json,
                    parse_rational)


@pytest.mark.parametrize("n,minpoly", [
    (2, (-2, 0, 1)),
    (3, (-3, 0, 1)),
    (4, (2, 0, -4, 0, 1)),
])
def test_minimal_polynomial(n: int, minpoly: tuple) -> None:
    ctx = cyc_context(n)
    assert ctx.minpoly == minpoly
    assert ctx.degree == len(minpoly) - 1


@pytest.mark.parametrize("n,degree", [(6, 4), (9, 6), (15, 8)])
def test_exceptional_degrees(n: int, degree: int) -> None:
    assert cyc_context(n).degree == degree


def test_invalid_order() -> None:
    with pytest.raises(ValueError):
        cyc_context(1)


def test_theta_satisfies_minpoly() -> None:
    for n in range(2, 16):
        ctx = cyc_context(n)
        theta = ctx.theta()
        value = ctx.zero()
        for c in reversed(ctx.minpoly):
            value = value * theta + c
        assert value.is_zero()


def test_chebyshev_values(ctx4) -> None:
    theta = ctx4.theta()
    assert chebyshev_u(ctx4, 0) == 1
    assert chebyshev_u(ctx4, 1) == theta
    # U_2(cos π/8) = 1 + √2
    assert chebyshev_u(ctx4, 2) == theta * theta - 1
    assert chebyshev_u(ctx4, 2).coeffs == (-1, 0, 1, 0)
    assert chebyshev_v(ctx4, 0) == 2
    assert chebyshev_v(ctx4, 4).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4, 6, 9, 15])
def test_chebyshev_symmetry(n: int) -> None:
    ctx = cyc_context(n)
    for i in range(2 * n - 1):
        assert chebyshev_u(ctx, i) == chebyshev_u(ctx, 2 * n - 2 - i)
    assert chebyshev_u(ctx, 2 * n - 1).is_zero()


def test_negative_index() -> None:
    with pytest.raises(ValueError):
        chebyshev_u(cyc_context(4), -1)


def test_field_operations(ctx4) -> None:
    theta = ctx4.theta()
    x = theta * theta - 2
    assert x * x == 2
    assert x * x.inverse() == 1
    assert (1 + x) / (1 + x) == 1
    assert x - x == 0
    assert 3 - x == -(x - 3)
    assert x ** 2 == 2
    assert x ** -2 == Fraction(1, 2)
    assert arith(x, theta, 'mul') == x * theta


def test_zero_division(ctx4) -> None:
    with pytest.raises(ZeroDivisionError):
        ctx4.zero().inverse()
    with pytest.raises(ZeroDivisionError):
        ctx4.theta() / 0


def test_context_mismatch() -> None:
    with pytest.raises(ContextMismatchError):
        cyc_context(3).theta() + cyc_context(4).theta()
    with pytest.raises(ContextMismatchError):
        cyc_context(4).coerce(cyc_context(3).one())


def test_sign_and_order(ctx4) -> None:
    theta = ctx4.theta()
    sqrt2 = theta * theta - 2
    assert theta.sign() == 1
    assert (3 - 2 * theta).sign() == -1
    assert ctx4.zero().sign() == 0
    assert sqrt2 > Fraction(7, 5)
    assert sqrt2 < Fraction(3, 2)
    assert abs(-sqrt2) == sqrt2


def test_sign_close_to_zero(ctx4) -> None:
    sqrt2 = ctx4.theta() * ctx4.theta() - 2
    # a Pell convergent above √2 by about 1.6e-12
    assert (sqrt2 - Fraction(665857, 470832)).sign() == -1
    assert (sqrt2 - Fraction(470832, 332929)).sign() == 1


def test_float_embedding(ctx4) -> None:
    assert float(ctx4.theta()) == pytest.approx(1.8477590650225735)
    assert float(ctx4.theta() * ctx4.theta() - 2) == pytest.approx(2 ** 0.5)


def test_display(ctx4) -> None:
    theta = ctx4.theta()
    assert str(theta) == "θ"
    assert str(theta * theta - 1) == "-1 + θ^2"
    assert str(ctx4.zero()) == "0"
    assert str(theta / 2) == "1/2*θ"


def test_json(ctx4) -> None:
    x = ctx4.theta() / 3 - 1
    data = x.to_json()
    assert data == {"n": 4, "coeffs": ["-1", "1/3", "0", "0"]}
    assert RealCycNumber.from_json(data) == x
    assert parse_rational(" -2/4 ") == Fraction(-1, 2)


def test_hash_agrees_with_rationals(ctx4) -> None:
    assert hash(ctx4.one() * 3) == hash(3)
    assert len({ctx4.theta(), ctx4.theta() * 1, ctx4.one()}) == 2


def test_matrix_inverse(ctx4) -> None:
    theta = ctx4.theta()
    M = cyc_matrix(ctx4, [[1, theta], [0, 1]])
    inv = matrix_inverse(M)
    assert matrices_equal(inv, cyc_matrix(ctx4, [[1, -theta], [0, 1]]))
    assert matrix_to_json(np.array([[1, 0], [0, 1]])) == [[1, 0], [0, 1]]


def test_field_inverse_with_row_swap(ctx4) -> None:
    theta = ctx4.theta()
    M = cyc_matrix(ctx4, [[0, 1, 0], [1, 0, theta], [theta, 0, 1]])
    assert matrices_equal(M @ matrix_inverse(M), identity_matrix(ctx4, 3))


def test_integer_inverse() -> None:
    C = np.array([[-1, 1, 0], [0, 1, 0], [0, 1, -1]], dtype=np.int64)
    inv = integer_inverse(C)
    assert inv.dtype == np.int64
    assert np.array_equal(C @ inv, np.eye(3, dtype=np.int64))
    with pytest.raises(ArithmeticError):
        integer_inverse(np.array([[2, 0], [0, 1]]))


def test_singular_matrix(ctx4) -> None:
    theta = ctx4.theta()
    with pytest.raises(ZeroDivisionError):
        matrix_inverse(cyc_matrix(ctx4, [[1, theta], [2, 2 * theta]]))
    with pytest.raises(ValueError):
        matrix_inverse(np.zeros((2, 3), dtype=object))
