from pathlib import Path

import pytest

from tolmc import logic
from tolmc.bench import gen_mesh, gen_pipeline
from tolmc.case_study import build_case_study, phi1
from tolmc.model import (ClockConstraint, ModelError, max_constants,
                         parse_model, serialize_model)

FIXTURES = Path(__file__).parent / "fixtures"

MINIMAL = "wta\nlocation only init\n"


def test_minimal_model():
    m = parse_model(MINIMAL)
    assert m.clocks == () and m.edges == ()
    assert m.initial == "only"


def test_roundtrip_serialize_parse():
    text = """wta
clocks x y
location l0 init invariant x <= 2 & y < 3 labels p q
location l1 goal
edge l0 -> l1 action go guard x >= 1 reset x,y weight 2
edge l1 -> l1 action stay weight 0
"""
    m = parse_model(text)
    assert parse_model(serialize_model(m)) == m


def test_generator_outputs_roundtrip():
    for gen in (gen_pipeline, gen_mesh):
        for k in (2, 4, 7):
            m, _ = gen(k)
            assert parse_model(serialize_model(m)) == m


def test_case_study_fixture_matches_builder():
    m = parse_model((FIXTURES / "case_study.wta").read_text())
    assert m == build_case_study()


def test_comments_and_blank_lines_ignored():
    m = parse_model("# heading\nwta\n\nlocation l init  # trailing\n")
    assert m.initial == "l"


@pytest.mark.parametrize("code", [
    "header", "syntax", "duplicate-clock", "duplicate-location",
    "unknown-clock", "unknown-location", "no-init", "multiple-init",
    "bad-invariant-op", "init-invariant", "unsat-invariant", "bad-weight",
])
def test_error_corpus(code):
    text = (FIXTURES / "errors" / f"{code}.wta").read_text()
    with pytest.raises(ModelError) as err:
        parse_model(text)
    assert err.value.code == code


def test_valid_fixtures_pass_validation():
    for path in (FIXTURES / "errors").glob("*.wta"):
        with pytest.raises(ModelError):
            parse_model(path.read_text())


def test_edges_from_order_and_errors():
    m = build_case_study()
    outs = m.edges_from("s2")
    assert [(e.source, e.target) for e in outs] == [("s2", "s1"), ("s2", "s3"), ("s2", "s4")]
    assert m.edges_from("s5")[0].target == "s5"
    with pytest.raises(KeyError):
        m.edges_from("nowhere")


def test_edges_from_empty():
    m = parse_model("wta\nlocation a init\nlocation b\nedge a -> b action go weight 1\n")
    assert m.edges_from("b") == []


def test_pipeline_edges_from():
    m, _ = gen_pipeline(4)
    assert [(e.target for e in m.edges_from("s0"))]
    assert [e.target for e in m.edges_from("s0")] == ["s1"]


def test_mesh_out_degree():
    m, _ = gen_mesh(4)
    for loc in m.locations:
        assert len(m.edges_from(loc.name)) == 3


def test_goal_becomes_label():
    m = parse_model("wta\nlocation l init goal\n")
    assert "goal" in m.labels_of("l")


def test_max_constants_guard_and_formula():
    m = parse_model("""wta
clocks x
location l0 init
location l1
edge l0 -> l1 action go guard x <= 2 weight 1
""")
    f = logic.parse_formula("j . <#0> F (j <= 7 & p)")
    assert max_constants(m, f) == {"x": 2, "j": 7}


def test_max_constants_all_zero():
    m = parse_model("wta\nclocks x\nlocation l init\n")
    assert max_constants(m) == {"x": 0}


def test_max_constants_case_study():
    ks = max_constants(build_case_study(), phi1(3))
    assert ks["j"] == 3
    assert ks["x"] == 1


def test_weight_zero_allowed():
    m = parse_model("wta\nlocation l init\nedge l -> l action go weight 0\n")
    assert m.edges[0].weight == 0


def test_constraint_helpers():
    c = ClockConstraint("x", "<=", 2)
    assert c.sat_zero() and c.sat2(4) and not c.sat2(5)
