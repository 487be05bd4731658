from __future__ import annotations

import numpy as np
import pytest
from pydantic import ValidationError

from algnum import matrices_equal
from chebrings import chebyshev_ring
from models import (CheckResult, CycNumberModel, IndecModel, MatrixModel, RingEltModel, RunConfig,
                    VerifyReport, to_jsonable)
from tropical import seed_at


def test_cyc_number(ctx4) -> None:
    x = ctx4.theta() / 2 - 3
    model = CycNumberModel.from_value(x)
    assert model.coeffs == ["-3", "1/2", "0", "0"]
    assert model.to_value() == x


@pytest.mark.parametrize("data", [
    {"n": 4, "coeffs": ["1", "0", "0"]},
    {"n": 4, "coeffs": ["x", "0", "0", "0"]},
    {"n": 4, "coeffs": ["1/0", "0", "0", "0"]},
    {"n": 1, "coeffs": ["1"]},
])
def test_cyc_number_rejects(data: dict) -> None:
    with pytest.raises(ValidationError):
        CycNumberModel(**data)


def test_ring_element() -> None:
    model = RingEltModel(type='a7', coords={'w2': 1, 'w0': -1})
    assert model.type == 'A7'
    ring = chebyshev_ring('A7')
    assert model.to_value() == ring.parse('w2 - w0')
    assert RingEltModel.from_value(ring.element('w4')).coords == {'w4': 1}
    with pytest.raises(ValidationError):
        RingEltModel(type='A7', coords={'w9': 1})
    with pytest.raises(ValidationError):
        RingEltModel(type='A4')


def test_indecomposable(a7) -> None:
    x = a7.find("[0 2/1]")
    model = IndecModel.from_value(a7, x)
    assert model.name == "[0 2/1]"
    assert model.type == 'A7'
    assert model.to_value() == x
    with pytest.raises(ValidationError):
        IndecModel(type='A7', layer='stable', vertex='0')


def test_matrices(ctx4) -> None:
    ints = MatrixModel.from_value(np.array([[0, 1], [-1, 0]], dtype=np.int64))
    assert ints.rows == [[0, 1], [-1, 0]]
    assert np.array_equal(ints.to_value(), [[0, 1], [-1, 0]])

    C = seed_at('A7', 'standard', (0,)).C
    exact = MatrixModel.from_value(C)
    assert exact.rows[1][0].coeffs == ["0", "0", "0", "0"]
    assert matrices_equal(exact.to_value(), C)
    with pytest.raises(ValidationError):
        MatrixModel(rows=[[1, 2], [3]])


def test_run_config(cfg) -> None:
    with pytest.raises(ValidationError):
        RunConfig()
    run = RunConfig(types=['a7', 'A7', 'D5'])
    assert run.types == ['A7', 'D5']
    assert run.selected_types(cfg) == ['A7', 'D5']
    assert RunConfig(golden='appendix').selected_types(cfg) == ['A7', 'D5']
    assert RunConfig(all_types=True).selected_types(cfg) == cfg.VERIFY_TYPES


@pytest.mark.parametrize("fields", [
    {"types": ['A4']},
    {"types": ['A7'], "depth": -1},
    {"types": ['A7'], "words": -5},
    {"types": ['A7'], "word_length": 0},
    {"golden": 'table'},
    {"types": ['A7'], "emit": ['pdf']},
])
def test_run_config_rejects(fields: dict) -> None:
    with pytest.raises(ValidationError):
        RunConfig(**fields)


def test_run_config_defaults(cfg) -> None:
    run = RunConfig.from_config(cfg, types=['A3'], depth=None)
    assert run.depth == cfg.DEFAULT_DEPTH
    assert run.words == cfg.DEFAULT_WORDS
    assert run.seed == cfg.DEFAULT_SEED
    assert RunConfig.from_config(cfg, types=['A3'], depth=2).depth == 2


def test_report_ok() -> None:
    run = RunConfig(types=['A3'])
    passed = CheckResult(name='field', type='A3', passed=True, checked=3)
    failed = CheckResult(name='ring', type='A3', passed=False, failures=['boom'])
    assert VerifyReport(config=run).ok
    assert VerifyReport(config=run, checks=[passed]).ok
    report = VerifyReport(config=run, checks=[passed, failed])
    assert not report.ok
    assert report.failed() == [failed]
    assert VerifyReport.model_validate_json(report.model_dump_json()).failed()[0].failures == ['boom']


def test_to_jsonable(ctx4) -> None:
    ring = chebyshev_ring('A7')
    value = {
        1: ctx4.one(),
        "r": ring.element('w2'),
        "pair": (np.int64(3), np.bool_(True)),
        "m": np.array([[1, 0], [0, 1]], dtype=np.int64),
        "v": np.array([1, 2], dtype=np.int64),
    }
    assert to_jsonable(value) == {
        "1": {"n": 4, "coeffs": ["1", "0", "0", "0"]},
        "r": {"type": "A7", "coords": {"w2": 1}},
        "pair": [3, True],
        "m": [[1, 0], [0, 1]],
        "v": [1, 2],
    }
