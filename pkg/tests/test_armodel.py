from __future__ import annotations

import numpy as np
import pytest

from armodel import (Indec, ProjectiveError, all_roots, ar_model, long_roots, positive_roots, rotation,
                     short_roots, squared_length)
from quiver import build_folding


@pytest.mark.parametrize("name,count,coxeter", [
    ('A3', 6, 4),
    ('A7', 28, 8),
    ('D4', 12, 6),
    ('D5', 20, 8),
    ('E6', 36, 12),
    ('E8', 120, 30),
])
def test_counts(name: str, count: int, coxeter: int) -> None:
    model = ar_model(name)
    assert len(model.module_indecs()) == count
    assert len(model.enumerate_indecs('cluster')) == count + len(model.vertices)
    assert len(model.enumerate_indecs('derived')) == 2 * count
    assert model.coxeter_order() == coxeter


def test_rows_have_equal_length(d5) -> None:
    assert {len(row) for row in d5.rows.values()} == {4}


def test_unknown_layer(a7) -> None:
    with pytest.raises(ValueError):
        a7.enumerate_indecs('stable')
    with pytest.raises(ValueError):
        Indec('stable', '0')


def test_names(a7) -> None:
    assert a7.name(a7.injective('1')) == "[0 2/1]"
    assert a7.name(a7.injective('0')) == "0"
    assert a7.name(a7.projective('1')) == "1"
    assert a7.name(a7.projective('0')) == "[0/1]"
    assert a7.name(a7.shifted_projective('1')) == "Σ1"
    assert a7.name(a7.shifted_projective('0')) == "Σ[0/1]"
    assert a7.name(Indec('derived', '0', 0, 1)) == "Σ^10"


def test_find(a7) -> None:
    assert a7.find("[0 2/1]") == a7.injective('1')
    assert a7.find([1, 1, 1, 0, 0, 0, 0]) == a7.injective('1')
    assert a7.find("[0 2/1]", 'cluster') == Indec('cluster', '1', 0)
    with pytest.raises(KeyError):
        a7.find([1, 0, 1, 0, 0, 0, 0])
    with pytest.raises(KeyError):
        a7.find("[9/9]")
    with pytest.raises(KeyError):
        a7.injective('7')


def test_every_module_is_named_uniquely(d5) -> None:
    names = [d5.name(x) for x in d5.module_indecs()]
    assert len(set(names)) == len(names)
    for x in d5.module_indecs():
        assert d5.find(d5.name(x)) == x
        assert d5.find(d5.dim(x)) == x


def test_projectives_and_injectives(a7) -> None:
    for v in a7.vertices:
        p = a7.projective(v)
        assert a7.is_projective(p)
        assert np.array_equal(a7.dim(p), a7.proj[a7.index[v]])
        assert a7.is_injective(a7.injective(v))
    assert a7.sigma['0'] == '6'
    assert a7.sigma['1'] == '5'


def test_tau_of_projective_module(a7) -> None:
    with pytest.raises(ProjectiveError):
        a7.tau(a7.projective('1'))
    with pytest.raises(ProjectiveError):
        a7.tau_inverse(a7.injective('1'))


def test_tau_on_modules(a7) -> None:
    x = a7.injective('1')
    y = a7.tau(x)
    assert y == Indec('module', '1', 1)
    assert a7.tau_inverse(y) == x
    assert np.array_equal(a7.dim(y), a7.coxeter @ a7.dim(x))


@pytest.mark.parametrize("layer", ['derived', 'cluster'])
def test_tau_round_trip(d5, layer: str) -> None:
    for x in d5.enumerate_indecs(layer):
        assert d5.tau_inverse(d5.tau(x)) == x
        assert d5.tau(d5.tau_inverse(x)) == x


def test_cluster_tau_of_projective(a7) -> None:
    p = a7.projective('1', 'cluster')
    assert a7.tau(p) == a7.shifted_projective('1')
    assert a7.tau(a7.shifted_projective('1')) == Indec('cluster', '1', 0)


def test_derived_tau_of_projective(a7) -> None:
    p = Indec('derived', a7.projective('1').vertex, a7.projective('1').m, 1)
    assert a7.tau(p) == Indec('derived', '1', 0, 0)


def test_hom_and_ext(a7) -> None:
    s0 = a7.injective('0')
    s1 = a7.projective('1')
    assert a7.hom_dim(s0, s1) == 0
    assert a7.ext1_dim(s0, s1) == 1
    assert a7.hom_dim(s1, a7.injective('1')) == 1
    assert a7.ext1_dim(s1, s0) == 0
    assert a7.cluster_ext1_dim(a7.shifted_projective('1'), a7.injective('1')) == 1
    assert a7.cluster_ext1_dim(a7.shifted_projective('0'), a7.shifted_projective('1')) == 0
    with pytest.raises(ValueError):
        a7.hom_dim(Indec('cluster', '0'), s0)


@pytest.mark.parametrize("name", ['A3', 'A5', 'D4'])
def test_hom_agrees_with_knitting(name: str) -> None:
    model = ar_model(name)
    objects = model.module_indecs()
    for x in objects:
        for y in objects:
            assert model.hom_dim(x, y) == model.hom_oracle(x, y), (model.name(x), model.name(y))
            assert model.ext1_dim(x, y) == model.ext_oracle(x, y), (model.name(x), model.name(y))


def test_cluster_ext_is_symmetric(a7) -> None:
    objects = a7.enumerate_indecs('cluster')
    for x in objects:
        for y in objects:
            assert a7.cluster_ext1_dim(x, y) == a7.cluster_ext1_dim(y, x)


def test_columns(a7) -> None:
    assert a7.column(a7.injective('0')) == 0
    assert a7.column(a7.injective('1')) == 1
    assert a7.column(a7.shifted_projective('1')) == 9
    assert a7.column(Indec('derived', '0', 0, 1)) == -8
    assert a7.cluster_columns() == 10


def test_dimproj(a7, ctx4) -> None:
    theta = ctx4.theta()
    assert a7.dimproj(a7.find("[0 2/1]")) == (theta * theta, 1)
    assert a7.dimproj(a7.injective('0')) == (1, 0)
    assert a7.dimproj([a7.injective('0'), a7.projective('1')]) == (1, 1)
    assert a7.dimproj(a7.shifted_projective('1')) == (0, -1)


@pytest.mark.parametrize("name", ['A5', 'A7', 'D4', 'D5', 'E6'])
@pytest.mark.parametrize("layer", ['module', 'derived', 'cluster'])
def test_projection_is_a_scaled_root(name: str, layer: str) -> None:
    model = ar_model(name)
    roots = all_roots(model.n)
    for x in model.enumerate_indecs(layer):
        alpha, eps = model.root_of(x)
        assert alpha in roots
        assert eps > 0
        assert model.dimproj(x) == (eps * alpha[0], eps * alpha[1])


def test_root_plane() -> None:
    n = 4
    assert len(positive_roots(n)) == 2 * n
    assert len(all_roots(n)) == 4 * n
    R = rotation(n)
    last = short_roots(n)[-1]
    assert (R[0, 0] * last[0] + R[0, 1] * last[1], R[1, 0] * last[0] + R[1, 1] * last[1]) == short_roots(n)[0]
    assert short_roots(n)[n] == (-1, 0)


@pytest.mark.parametrize("name", ['A7', 'D5'])
def test_root_lengths(name: str) -> None:
    folding = build_folding(name)
    lam = folding.ftype.lam
    t2 = folding.ctx.theta() ** 2
    for alpha in short_roots(folding.n):
        assert squared_length(folding, alpha) == lam * lam
    for beta in long_roots(folding.n):
        assert squared_length(folding, beta) == lam * lam * t2
