from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from cli import cli, parse_word
from models import to_jsonable


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, ['--env', 'testing', *args])


def test_parse_word() -> None:
    assert parse_word("0,1,0") == (0, 1, 0)
    assert parse_word("[0][1]") == (0, 1)
    assert parse_word("101") == (1, 0, 1)
    assert parse_word("") == ()


def test_info_json(runner) -> None:
    result = invoke(runner, 'info', 'A7', '--emit', 'json')
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["n"] == 4
    assert data["target"] == "I2(8)"
    assert data["minpoly"] == [2, 0, -4, 0, 1]
    assert data["coxeter_order"] == 8
    assert data["indecomposables"] == 28
    assert len(data["vertices"]) == 7


def test_info_table(runner) -> None:
    result = invoke(runner, 'info', 'D5')
    assert result.exit_code == 0, result.output
    assert "D5" in result.stdout


def test_info_unknown_type(runner) -> None:
    assert invoke(runner, 'info', 'B3').exit_code == 2


def test_mutate_json(runner) -> None:
    result = invoke(runner, 'mutate', 'A7', '-w', '0', '--emit', 'json')
    assert result.exit_code == 0, result.output
    (seed,) = json.loads(result.stdout)
    assert seed["type"] == 'A7'
    assert seed["word"] == ["[0]"]
    assert len(seed["C"]) == 2

    result = invoke(runner, 'mutate', 'A7', '-w', '01', '--trace', '--emit', 'json')
    assert [s["word"] for s in json.loads(result.stdout)] == [[], ["[0]"], ["[0]", "[1]"]]


def test_mutate_bad_word(runner) -> None:
    result = invoke(runner, 'mutate', 'A7', '-w', '0,2')
    assert result.exit_code == 2


def test_ar_list_with_svg(runner, tmp_path) -> None:
    path = tmp_path / "a3.svg"
    result = invoke(runner, 'ar', 'list', 'A3', '--svg', str(path), '--emit', 'json')
    assert result.exit_code == 0, result.output
    rows = json.loads(result.stdout)
    assert len(rows) == 6
    assert {r["object"] for r in rows} >= {"1", "2"}
    assert "<svg" in path.read_text(encoding='utf-8')


def test_ar_list_unknown_layer(runner) -> None:
    assert invoke(runner, 'ar', 'list', 'A3', '--layer', 'stable').exit_code == 2


def test_ar_project(runner, a7) -> None:
    result = invoke(runner, 'ar', 'project', 'A7', '0', '1', '--emit', 'json')
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["objects"] == ["0", "1"]
    expected = a7.dimproj([a7.find('0'), a7.find('1')])
    assert data["dimproj"] == to_jsonable(expected)


def test_ar_project_unknown_object(runner) -> None:
    assert invoke(runner, 'ar', 'project', 'A7', '[9 9/9]').exit_code == 1


def test_act(runner) -> None:
    result = invoke(runner, 'act', 'A7', 'w6', '[0 2/1]', '--emit', 'json')
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["object"] == "[0 2/1]"
    assert [r["object"] for r in data["result"]] == ["[4 6/5]"]
    assert data["result"][0]["multiplicity"] == 1


def test_act_outside_semiring(runner) -> None:
    result = invoke(runner, 'act', 'A7', 'w1', '[0 2/1]')
    assert result.exit_code == 1


def test_generators(runner) -> None:
    result = invoke(runner, 'generators', 'A3', '--emit', 'json')
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert [entry["gamma"] for entry in data] == ['Gamma(0,1)', 'Gamma(2,1)']
    assert all(entry["ok"] for entry in data)


def test_generators_unknown_gamma(runner) -> None:
    assert invoke(runner, 'generators', 'A3', '--gamma', 'Gamma(9,9)').exit_code == 2


def test_tilting_enumerate(runner) -> None:
    result = invoke(runner, 'tilting', 'enumerate', 'A7', '--emit', 'json')
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["gamma"] == 'Gamma(0,1)'
    assert len(data["tilting"]) == 10
    assert all(len(T["summands"]) == 2 for T in data["tilting"])
    assert {T["orientation"] for T in data["tilting"]} == {'Q', 'Q^op'}


def test_tropical_gvectors(runner) -> None:
    result = invoke(runner, 'tropical', 'gvectors', 'A7', '--emit', 'json')
    assert result.exit_code == 0, result.output
    rows = json.loads(result.stdout)
    assert len(rows) == 10
    assert all(row["agrees"] for row in rows)


def test_tropical_tesseract(runner) -> None:
    result = invoke(runner, 'tropical', 'tesseract', 'A5', '-w', '0101', '--emit', 'json')
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["ok"] is True
    assert data["words"] == 1


def test_verify_needs_selection(runner) -> None:
    assert invoke(runner, 'verify').exit_code == 2


def test_verify_unknown_type(runner) -> None:
    assert invoke(runner, 'verify', '-t', 'A4').exit_code == 2


def test_verify_golden(runner, tmp_path) -> None:
    report_path = tmp_path / "report.json"
    svg_dir = tmp_path / "figures"
    result = invoke(runner, 'verify', '--golden', 'appendix', '--emit', 'json',
                    '-o', str(report_path), '--svg-dir', str(svg_dir))
    assert result.exit_code == 0, result.output
    report = json.loads(report_path.read_text(encoding='utf-8'))
    assert [(c["name"], c["type"]) for c in report["checks"]] == [
        ('golden_gvectors', 'A7'), ('golden_cg', 'A7'), ('golden_gvectors', 'D5'),
    ]
    assert json.loads(result.stdout)["checks"] == report["checks"]
    assert sorted(p.name for p in svg_dir.iterdir()) == ['A7-module.svg', 'D5-module.svg']


def test_verify_table(runner) -> None:
    result = invoke(runner, 'verify', '--golden', 'appendix')
    assert result.exit_code == 0, result.output
    assert "golden_cg" in result.stdout
