import json

import pytest
from click.testing import CliRunner
from hypothesis import given
from hypothesis import strategies as st

from torusalg.adams import E2Chart, emit_chart
from torusalg.cells import basic_cell, e_bracket, natural_cell_object, render_object, sphere, thom_twist
from torusalg.cli import (GrammarError, SchemaError, load, main, parse_object, persist, run_selfcheck)
from torusalg.lattice import Representation, canonical_subgroup, full_torus, trivial_subgroup
from torusalg.resolve import CellResolution


@pytest.fixture
def runner():
    return CliRunner()


# -- grammar ----------------------------------------------------------------------------------

def test_parse_examples():
    assert parse_object("sigma:ann=2", 1) == basic_cell(canonical_subgroup(1, [[2]]))
    assert parse_object("ebracket:ann=0", 1) == e_bracket(full_torus(1))
    assert parse_object("twist:1;2:ebracket:ann=full", 1) == \
        thom_twist(Representation([(1,), (2,)]), e_bracket(trivial_subgroup(1)))
    assert parse_object("sphere", 2) == sphere(2)


subgroup_rows = st.lists(st.lists(st.integers(-5, 5), min_size=2, max_size=2), min_size=1, max_size=2)


@st.composite
def named_objects(draw):
    rows = draw(subgroup_rows)
    h = canonical_subgroup(2, rows)
    base = draw(st.sampled_from([basic_cell, e_bracket, natural_cell_object]))(h)
    if draw(st.booleans()):
        chars = draw(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=2))
        base = thom_twist(Representation(chars), base)
    return base


@given(named_objects())
def test_parse_render_identity(obj):
    assert parse_object(render_object(obj), 2) == obj


@pytest.mark.parametrize("text,pos", [("sigma:ann=x", 10), ("blob:ann=2", 0), ("sigma", 5),
                                      ("sigma:bad", 6)])
def test_grammar_errors(text, pos):
    with pytest.raises(GrammarError) as err:
        parse_object(text, 1)
    assert err.value.pos == pos


# -- persistence ----------------------------------------------------------------------------------

def test_persist_round_trip(tmp_path):
    chart = E2Chart(1, (-2, 2), (0, 1), {(0, 0): 1, (1, 2): 1}, "a", "b")
    persist(chart, tmp_path / "c.json")
    assert load(tmp_path / "c.json") == chart

    res = CellResolution(trivial_subgroup(2)).to_json()
    persist(res, tmp_path / "r.json")
    assert load(tmp_path / "r.json") == res


def test_schema_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": 7, "entries": []}')
    with pytest.raises(SchemaError):
        load(bad)
    bad.write_text("{truncated")
    with pytest.raises(SchemaError):
        load(bad)
    with pytest.raises(SchemaError):
        persist({"schema": 0}, tmp_path / "x.json")


# -- self checks ---------------------------------------------------------------------------------

def test_selfcheck_lattice():
    report, code = run_selfcheck("lattice")
    assert code == 0 and all(r["pass"] for r in report["results"])


def test_selfcheck_acceptance_r1():
    report, code = run_selfcheck("acceptance-r1")
    assert code == 0 and report["falsified"] == []


def test_selfcheck_unknown(runner):
    with pytest.raises(KeyError):
        run_selfcheck("nope")
    out = runner.invoke(main, ["selfcheck", "--suite", "nope"])
    assert out.exit_code == 1 and "unknown suite" in out.output


# -- commands ------------------------------------------------------------------------------------

def test_subgroup_command(runner):
    out = runner.invoke(main, ["subgroup", "--rank", "2", "--ann", "2 4; 6 8"])
    assert out.exit_code == 0
    data = json.loads(out.output)
    assert data["component_group"] == [2, 4] and data["dim"] == 0


def test_bad_object_exits_1(runner):
    out = runner.invoke(main, ["conn", "--rank", "1", "--object", "sigma:ann=q", "--at", "ann=0"])
    assert out.exit_code == 1 and "position" in out.output


def test_ext_and_chart_commands(runner, tmp_path):
    path = tmp_path / "end.json"
    out = runner.invoke(main, ["ext", "--rank", "1", "--source", "sigma:ann=full", "--target",
                               "sigma:ann=full", "--window=-4:8", "--format", "json", "--out", str(path)])
    assert out.exit_code == 0, out.output
    data = json.loads(path.read_text())
    assert {(e["s"], e["t"]) for e in data["entries"]} == {(0, 0), (1, 2)}
    again = runner.invoke(main, ["chart", str(path), "--format", "json"])
    assert again.exit_code == 0
    assert again.output == emit_chart(E2Chart.from_json(data), "json")


def test_conn_command(runner):
    out = runner.invoke(main, ["conn", "--rank", "2", "--object", "ebracket:ann=full", "--at", "ann=0"])
    assert out.exit_code == 0
    assert json.loads(out.output)["algconn"] == 1


def test_euler_command(runner):
    out = runner.invoke(main, ["euler", "--rank", "1", "--rep", "1;2", "--at", "ann=full"])
    assert out.exit_code == 0
    assert json.loads(out.output)["variables"] == 1


def test_config_file(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"rank": 2, "window": [-2, 2]}))
    out = runner.invoke(main, ["--config", str(cfg), "subgroup", "--ann", "full"])
    assert out.exit_code == 0 and json.loads(out.output)["codim"] == 2
    cfg.write_text(json.dumps({"rank": 9}))
    assert runner.invoke(main, ["--config", str(cfg), "subgroup", "--ann", "0"]).exit_code == 1
