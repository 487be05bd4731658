from __future__ import annotations

from collections import Counter

import numpy as np
import pytest

from algnum import cyc_context, identity_matrix, matrices_equal
from armodel import Indec, ar_model
from chebrings import chebyshev_ring, regular_rep
from quiver import build_folding, double_matrix, doubled_folding, doubled_order
from tropical import (SignCoherenceError, _block_node, adjugate_form, anchors, c_mutate, determinant,
                      exchange_period, folded_g_vector, from_rescaled, g_matrix, gvector_table, initial_seed,
                      integer_g_vector, mutate_c_matrix, project_cmatrix, projective_presentation,
                      random_words, recognize_rep, seed_at, tesseract_check, to_rescaled, verify_blocks,
                      verify_cvectors, walk)
from verify import appendix_cg, appendix_gvectors


def test_first_mutation_of_i2_8(ctx4) -> None:
    seed = seed_at('A7', 'standard', (0,))
    golden = appendix_cg()
    assert matrices_equal(seed.C, golden['C'])
    assert matrices_equal(seed.G, golden['G'])
    assert determinant(seed.C) == -1
    data = seed.to_json()
    assert data["word"] == ["[0]"]
    assert data["C"][0][1] == {"n": 4, "coeffs": ["0", "0", "1", "0"]}
    assert data["C"][0][0] == {"n": 4, "coeffs": ["-1", "0", "0", "0"]}


@pytest.mark.parametrize("name,period", [('A3', 6), ('A5', 8), ('A7', 10), ('D5', 10), ('E6', 14)])
def test_exchange_period(name: str, period: int) -> None:
    assert exchange_period(name) == period


def test_initial_seeds() -> None:
    assert initial_seed('A7', 'unfolded').C.shape == (7, 7)
    assert initial_seed('A7', 'doubled').C.shape == (14, 14)
    assert matrices_equal(initial_seed('A7', 'rescaled').G, identity_matrix(cyc_context(4), 2))
    with pytest.raises(ValueError):
        initial_seed('A7', 'folded')


def test_block_index() -> None:
    with pytest.raises(IndexError):
        c_mutate(initial_seed('A7'), 2)


def test_walk() -> None:
    seeds = walk('A7', 'unfolded', (0, 1, 0))
    assert [s.word for s in seeds] == [(), (0,), (0, 1), (0, 1, 0)]
    assert np.array_equal(seeds[-1].C, seed_at('A7', 'unfolded', (0, 1, 0)).C)
    for s in seeds:
        assert determinant(s.C) in (1, -1)
        assert np.array_equal(s.G @ s.C.T, np.eye(7, dtype=np.int64))


def test_sign_coherence_is_enforced() -> None:
    B = np.array([[0, 1], [-1, 0]], dtype=np.int64)
    C = np.array([[1, 0], [-1, 1]], dtype=np.int64)
    with pytest.raises(SignCoherenceError) as info:
        mutate_c_matrix(B, C, 0, (1, 0))
    assert info.value.column == 0
    assert info.value.word == (1, 0)
    assert np.array_equal(mutate_c_matrix(B, C, 1), [[1, 0], [-1, -1]])


@pytest.mark.parametrize("name", ['A3', 'A5', 'D4', 'E6'])
def test_cvectors_are_roots(name: str) -> None:
    report = verify_cvectors(name)
    assert report.ok, report.failures
    assert report.period == 2 * build_folding(name).n + 2
    assert report.seeds == 2 * (report.depth + 1)


def test_rescaling_round_trip(ctx4) -> None:
    C = seed_at('A7', 'standard', (0, 1)).C
    assert matrices_equal(from_rescaled(to_rescaled(C, 4), 4), C)
    R = seed_at('A7', 'rescaled', (0, 1)).C
    assert matrices_equal(from_rescaled(R, 4), C)


def test_g_matrix_and_adjugate() -> None:
    C = seed_at('A7', 'rescaled', (0, 1, 0)).C
    G = g_matrix(C)
    assert matrices_equal(G * determinant(C), adjugate_form(C))
    assert np.array_equal(g_matrix(np.array([[1, 1], [0, 1]], dtype=np.int64)), [[1, 0], [-1, 1]])


def test_recognize_rep() -> None:
    ring = chebyshev_ring('A7')
    assert recognize_rep(np.eye(7, dtype=np.int64), 'A7') == ring.one()
    w2 = ring.element('w2')
    assert recognize_rep(regular_rep(w2), 'A7') == w2
    assert recognize_rep(np.ones((7, 7), dtype=np.int64), 'A7') is None
    with pytest.raises(ValueError):
        recognize_rep(np.eye(3, dtype=np.int64), 'A7')


def test_recognize_rep_in_the_ideal() -> None:
    ring = chebyshev_ring('D5')
    block = ring.vertex_rep(ring.element('w2+'))
    r = recognize_rep(block, 'D5')
    assert r is not None
    assert np.array_equal(ring.vertex_rep(r), block)
    assert recognize_rep(np.eye(5, dtype=np.int64), 'D5') is not None


@pytest.mark.parametrize("name", ['A7', 'D5'])
@pytest.mark.parametrize("word", [(0, 1, 0), (1, 0, 1, 0)])
def test_doubled_blocks(name: str, word: tuple) -> None:
    report = verify_blocks(name, word)
    assert report.ok, report.failures
    assert report.checked == len(word) + 1
    assert set(report.elements) == {"[0][0]", "[0][1]", "[1][0]", "[1][1]"}


def test_anchors() -> None:
    assert anchors(build_folding('A7')) == ('0', '1')
    assert anchors(build_folding('E6')) == ('0+', '1+')
    assert anchors(doubled_folding('A7')) == ('0', "0'")


def test_projection_modes() -> None:
    C = seed_at('A7', 'unfolded', ()).C
    with pytest.raises(ValueError):
        project_cmatrix(build_folding('A7'), C, 'double')
    with pytest.raises(ValueError):
        project_cmatrix(build_folding('A7'), C, 'sideways')
    assert matrices_equal(project_cmatrix(build_folding('A7'), C, 'single'), initial_seed('A7').C)


@pytest.mark.parametrize("name", ['A5', 'A7', 'D5'])
def test_tesseract_commutes(name: str) -> None:
    word = (0, 1, 0, 1, 1)
    report = tesseract_check(name, word)
    assert report.ok, report.failures
    assert report.checked == 2 * len(word) + 1
    assert report.to_json()["ok"] is True


def test_random_words() -> None:
    words = random_words(30, 6, 2024)
    assert words == random_words(30, 6, 2024)
    assert len(set(words)) == len(words)
    assert words == sorted(words, key=lambda w: (len(w), w))
    assert all(len(w) <= 6 and set(w) <= {0, 1} for w in words)
    assert random_words(0, 6, 1) == []
    with pytest.raises(ValueError):
        random_words(3, -1, 1)


def test_integer_g_vectors(a7) -> None:
    x = a7.find("[0 2/1]")
    assert list(integer_g_vector(a7, x)) == [1, -1, 1, -1, 0, 0, 0]
    assert list(integer_g_vector(a7, a7.shifted_projective('1'))) == [0, -1, 0, 0, 0, 0, 0]
    top, kernel = projective_presentation(a7, x)
    assert top == Counter({'0': 1, '2': 1})
    assert kernel == Counter({'1': 1, '3': 1})
    assert projective_presentation(a7, a7.shifted_projective('3')) == (Counter(), Counter({'3': 1}))
    with pytest.raises(ValueError):
        integer_g_vector(a7, Indec('derived', '0', 0, 1))


@pytest.mark.parametrize("name", ['A7', 'D5'])
def test_folded_g_vectors_match_the_table(name: str) -> None:
    table = gvector_table(ar_model(name))
    assert len(table) == 10
    assert all(row["agrees"] for row in table)
    assert Counter(row["folded"] for row in table) == Counter(appendix_gvectors())


def test_folded_g_vector_needs_weight_one(a7) -> None:
    with pytest.raises(ValueError):
        folded_g_vector(a7, a7.injective('2', 'cluster'))
    result = folded_g_vector(a7, a7.shifted_projective('0'))
    assert result.value == (0, -1)
    assert result.to_json()["g"] == [{"n": 4, "coeffs": ["0", "0", "0", "0"]},
                                     {"n": 4, "coeffs": ["-1", "0", "0", "0"]}]


def test_opposite_copy_of_a3_after_one_mutation() -> None:
    word = (0,)
    uni, opp, dbl = (seed_at('A3', layer, word) for layer in ('unfolded', 'opposite', 'doubled'))
    assert np.array_equal(uni.C, [[-1, 1, 0], [0, 1, 0], [0, 1, -1]])
    assert np.array_equal(opp.C, [[1, 0, 0], [1, -1, 1], [0, 0, 1]])
    assert not np.array_equal(opp.C, uni.C.T)
    assert list(np.diag(dbl.C)) == [-1, -1, -1, 1, 1, 1]
    order = doubled_order(build_folding('A3'))
    assert np.array_equal(double_matrix(uni.C, order, opp.C), dbl.C)
    assert np.array_equal(double_matrix(uni.B, order, opp.B), dbl.B)


@pytest.mark.parametrize("name,word", [('A3', (0,)), ('A3', (1, 0, 1)), ('E6', (1, 0))])
def test_tesseract_doubling_edge(name: str, word: tuple) -> None:
    report = tesseract_check(name, word)
    assert report.ok, report.failures


def test_shared_prefixes_are_computed_once() -> None:
    seed = seed_at('A5', 'doubled', (0, 1))
    assert seed.G is seed.G
    verify_blocks('A5', (1, 0, 1))
    before = _block_node.cache_info().hits
    report = verify_blocks('A5', (1, 0))
    assert report.ok, report.failures
    assert _block_node.cache_info().hits == before + 3
