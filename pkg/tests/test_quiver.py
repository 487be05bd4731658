from __future__ import annotations

import numpy as np
import pytest

from algnum import matrices_equal
from chebrings import FoldingType
from quiver import (ExchangeMatrix, FoldingError, block_words, build_folding, composite_mutate, double_matrix,
                    doubled_folding, doubled_order, is_skew_symmetrizable, mutate, mutate_matrix, opposite_folding,
                    restrict_doubled, skew_target, standard_target, symmetrizer, verify_unfolding)

A3_MATRIX = np.array([[0, 1, 0], [-1, 0, -1], [0, 1, 0]], dtype=np.int64)


def test_mutation_is_an_involution() -> None:
    for k in range(3):
        once = mutate_matrix(A3_MATRIX, k)
        assert np.array_equal(mutate_matrix(once, k), A3_MATRIX)


def test_mutation_example() -> None:
    B = np.array([[0, 1, 0], [-1, 0, 1], [0, -1, 0]], dtype=np.int64)
    expected = np.array([[0, -1, 1], [1, 0, -1], [-1, 1, 0]], dtype=np.int64)
    assert np.array_equal(mutate_matrix(B, 1), expected)


def test_mutation_bounds() -> None:
    with pytest.raises(IndexError):
        mutate_matrix(A3_MATRIX, 3)
    with pytest.raises(ValueError):
        mutate_matrix(np.zeros((2, 3), dtype=np.int64), 0)


def test_exchange_matrix_by_vertex(ctx4) -> None:
    target = standard_target(4)
    mutated = mutate(target, '[0]')
    theta = ctx4.theta()
    assert matrices_equal(mutated.matrix, [[0, -theta * theta], [1, 0]])
    assert mutate(mutated, 0) == target
    with pytest.raises(KeyError):
        mutate(target, '[2]')


def test_symmetrizer(ctx4) -> None:
    assert symmetrizer(A3_MATRIX) == [1, 1, 1]
    theta = ctx4.theta()
    assert symmetrizer(standard_target(4).matrix) == [1, theta * theta]
    assert is_skew_symmetrizable(skew_target(4).matrix)
    assert not is_skew_symmetrizable(np.array([[0, 1], [1, 0]], dtype=np.int64))


def test_type_a_folding(ctx4) -> None:
    folding = build_folding('A7')
    theta = ctx4.theta()
    assert folding.vertices == ('0', '1', '2', '3', '4', '5', '6')
    assert folding.blocks == ([0, 2, 4, 6], [1, 3, 5])
    assert folding.mu == (1, theta)
    assert folding.weight('0') == 1
    assert folding.weight('1') == theta
    assert folding.weight('3') == theta ** 3 - 2 * theta
    assert folding.row_weight('1') == 1
    assert ('0', '1') in folding.arrows() and ('2', '1') in folding.arrows()
    assert folding.is_origami()


def test_type_d_folding(ctx4) -> None:
    folding = build_folding('D5')
    assert folding.mu == (2, 2 * ctx4.theta())
    assert folding.weight('0') == 2
    assert folding.weight('3+') == folding.weight('3-')
    d4 = build_folding('D4')
    assert d4.weight('0') == 2
    assert d4.weight('2+') == 2


def test_unknown_vertex() -> None:
    with pytest.raises(KeyError):
        build_folding('A7').weight('7')


@pytest.mark.parametrize("name", ['A3', 'A5', 'A7', 'D4', 'D5', 'D6', 'E6', 'E7', 'E8'])
def test_initial_pairs_are_origami(name: str) -> None:
    assert build_folding(name).is_origami()
    assert doubled_folding(name).is_origami()


def test_folding_json(ctx4) -> None:
    data = build_folding('A7').to_json()
    assert data["type"] == "A7"
    assert data["doubled"] is False
    assert data["vertices"][1] == {"id": "1", "weight": ctx4.theta().to_json(), "image": "[1]"}
    assert data["valuation"]["[0]"] == {"n": 4, "coeffs": ["1", "0", "0", "0"]}


def test_doubled_folding() -> None:
    folding = doubled_folding('A3')
    assert folding.doubled
    assert folding.vertices == ('0', "1'", '2', "0'", '1', "2'")
    assert folding.mu == (1, 1)
    assert folding.blocks == ([0, 1, 2], [3, 4, 5])
    assert doubled_folding('D5').mu == (2, 2)


@pytest.mark.parametrize("name", ['A5', 'D5'])
def test_doubling_restricts_back(name: str) -> None:
    base = build_folding(name)
    order = doubled_order(base)
    big = double_matrix(base.B, order)
    assert big.shape == (2 * len(base.vertices),) * 2
    assert np.array_equal(restrict_doubled(big, order), base.B)
    assert np.array_equal(big, -big.T)


def test_block_words() -> None:
    assert list(block_words(2)) == [(), (0,), (1,), (0, 1), (1, 0)]
    assert len(list(block_words(5))) == 11


def test_composite_mutation_needs_independent_block() -> None:
    with pytest.raises(FoldingError):
        composite_mutate(A3_MATRIX, [0, 1])
    B = composite_mutate(A3_MATRIX, [0, 2])
    assert np.array_equal(B, -A3_MATRIX)


@pytest.mark.parametrize("name", ['A5', 'D5', 'E6'])
def test_unfolding_survives_mutation(name: str) -> None:
    report = verify_unfolding(build_folding(name), 4)
    assert report.ok, report.failures
    assert report.checked == 9


def test_doubled_unfolding() -> None:
    assert verify_unfolding(doubled_folding('A5'), 4).ok


def test_unfolding_depth() -> None:
    with pytest.raises(ValueError):
        verify_unfolding(build_folding('A3'), -1)


def test_opposite_folding_of_a3() -> None:
    base, opposite = build_folding('A3'), opposite_folding('A3')
    assert opposite.vertices == ("0'", "1'", "2'")
    assert opposite.blocks == ([1], [0, 2])
    assert np.array_equal(opposite.B, base.B.T)
    assert opposite.mu == (base.mu[1], base.mu[0])
    assert opposite.is_origami()


@pytest.mark.parametrize("name", ['A5', 'D5', 'E7'])
def test_doubled_order_permutes_within_halves(name: str) -> None:
    base = build_folding(name)
    order = doubled_order(base)
    size = len(base.vertices)
    sources = {(0, i) for i in base.blocks[0]} | {(1, i) for i in base.blocks[1]}
    assert set(order[:size]) == sources
    assert [i for _, i in order[:size]] == list(range(size))
    assert [i for _, i in order[size:]] == list(range(size))
    big = double_matrix(base.B, order, opposite_folding(name).B)
    assert np.array_equal(big, doubled_folding(name).B)


def test_d4_valuation_matches_its_weights() -> None:
    assert FoldingType.parse('D4').lam == 2
    d4 = build_folding('D4')
    assert d4.mu[0] == d4.weight('0') == 2
    assert doubled_folding('D4').mu == (2, 2)
    assert d4.row_weight('0') == 1
