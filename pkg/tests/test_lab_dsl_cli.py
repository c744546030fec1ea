import json

import pytest
from click.testing import CliRunner
from hypothesis import given, settings, strategies as st

from chernlab import lab
from chernlab.cli import main
from chernlab.dsl import parse, parse_filtration
from chernlab.errors import DomainError, ParseError
from chernlab.report import ReportBundle, Result, stringify
from chernlab.session import run_instance, run_text

SCRIPT = """\
field Fp 32003
ring R = poly(x,y,z) / (x*z, y*z, z^2)
ideal J in R = (x, y)
coeffs R J
hdeg R
koszul R J
bounds R J seed=3
ring P = poly(x,y)
ideal I in P = (x^3, y^3)
closure I
compare P I closure(I)
"""


# ---------------------------------------------------------------------------
# DSL


def test_parse_round_trip():
    s = parse(SCRIPT)
    assert parse(str(s)) == s
    assert str(parse(str(s))) == str(s)
    assert s.field == "Fp 32003"
    assert [c.name for c in s.commands] == ["coeffs", "hdeg", "koszul", "bounds", "closure",
                                            "compare"]


def test_comments_and_blank_lines():
    s = parse("# header\n\nring R = poly(x,y)   # plane\nideal m in R = (x,y)\ncoeffs R m\n")
    assert len(s.statements) == 3


@pytest.mark.parametrize("text,line,col", [
    ("ring R = poly(x,y)\nfrob R", 2, 1),
    ("ring R = poly(x,y)\nideal I in R = (x, w)", 2, 20),
    ("ring R = poly(x,y)\nideal I in R = (x)\ncoeffs R I speed=3", 3, 12),
    ("ring R = poly(x,y)\nideal I in S = (x)", 2, 12),
    ("ring R = poly(x,y)\nideal I in R = (x, y\ncoeffs R I", 2, 16),
    ("field Fp 10", 1, 7),
])
def test_parse_errors_carry_positions(text, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_filtration_tokens():
    assert parse_filtration("J") == ("adic", "J")
    assert parse_filtration("adic(J)") == ("adic", "J")
    assert parse_filtration("closure(J)") == ("closure", "J")


names = st.sampled_from(["x", "y", "z", "w"])
monomial_text = st.lists(names, min_size=1, max_size=3).map("*".join)


@st.composite
def scripts(draw):
    nv = draw(st.integers(2, 4))
    variables = ["x", "y", "z", "w"][:nv]
    mono = st.lists(st.sampled_from(variables), min_size=1, max_size=3).map("*".join)
    lines = [draw(st.sampled_from(["field Fp 32003", "field QQ", "field Fp 101"]))]
    rels = draw(st.lists(mono, max_size=2))
    ring = f"ring R = poly({','.join(variables)})"
    if rels:
        ring += " / (" + ", ".join(rels) + ")"
    if draw(st.booleans()):
        ring += " weights " + ",".join(str(draw(st.integers(1, 3))) for _ in variables)
    lines.append(ring)
    gens = draw(st.lists(mono, min_size=1, max_size=3))
    lines.append(f"ideal I in R = ({', '.join(gens)})")
    for _ in range(draw(st.integers(0, 4))):
        cmd = draw(st.sampled_from(["coeffs R I", "coeffs R I maxn=20 guard=2",
                                    "hdeg R", "hdeg R rel I", "koszul R I",
                                    "bounds R I domain buchsbaum seed=5",
                                    "conjecture1 R I unmixed", "reductions R I trials=2",
                                    "compare R I closure(I)", "closure I"]))
        lines.append(cmd)
    return "\n".join(lines) + "\n"


@settings(max_examples=80, deadline=None)
@given(scripts())
def test_generated_scripts_round_trip(text):
    s = parse(text)
    again = parse(str(s))
    assert again == s
    assert str(again) == str(s)


# ---------------------------------------------------------------------------
# sessions and reports


def test_session_results_and_exit_code():
    bundle = run_text(SCRIPT, seed=1)
    assert bundle.exit_code == 0
    kinds = [r.kind for r in bundle.results()]
    assert "coefficients" in kinds and "closure" in kinds
    coeffs = next(r for r in bundle.results() if r.kind == "coefficients")
    assert (coeffs.values["e0"], coeffs.values["e1"], coeffs.values["e2"]) == (1, 0, 1)
    closure = next(r for r in bundle.results() if r.kind == "closure")
    assert (closure.values["e0"], closure.values["e1"], closure.values["e2"]) == (9, 3, 0)


def test_json_is_byte_stable():
    a = run_text(SCRIPT, seed=4).to_json()
    b = run_text(SCRIPT, seed=4).to_json()
    assert a == b
    doc = json.loads(a)
    assert set(doc) == {"version", "seed", "field", "instances"}
    for inst in doc["instances"]:
        for r in inst["results"]:
            assert set(r) == {"kind", "inputs", "values", "provenance", "verdict"}


def test_numbers_are_strings():
    from fractions import Fraction
    assert stringify({"a": 3, "b": [Fraction(1, 2), None, True]}) == \
        {"a": "3", "b": ["1/2", None, True]}


def test_falsifying_verdict_sets_exit_five():
    b = ReportBundle(0, "QQ")
    b.add("x", "", Result("bound:x", {}, {}, verdict="fails"))
    assert b.exit_code == 5


def test_errors_are_recorded_and_run_continues():
    bundle = run_text("ring R = poly(x,y)\nideal I in R = (x)\ncoeffs R I\n"
                      "ideal m in R = (x,y)\ncoeffs R m\n")
    assert bundle.exit_code == 3
    kinds = [r.kind for r in bundle.results()]
    assert kinds == ["error", "coefficients"]


def test_parse_error_exit_two():
    assert run_text("ring R = poly(x,y\n").exit_code == 2


# ---------------------------------------------------------------------------
# lab instances


@pytest.mark.parametrize("name", ["z-ring", "plane", "cubic-closure", "idealization-1"])
def test_lab_expectations_hold(name):
    inst = lab.build(name)
    rows = inst.verify()
    assert rows and all(r["ok"] for r in rows), rows


def test_every_expectation_has_provenance():
    for name in lab.INSTANCES:
        if name in lab.EXPENSIVE:
            continue
        for exp in lab.build(name).expected:
            assert exp.provenance in ("LITERATURE", "DERIVED")


def test_unknown_instance_and_family_index():
    with pytest.raises(DomainError):
        lab.build("nope")
    with pytest.raises(DomainError):
        lab.build_idealization_family(0)


def test_run_instance_bundle():
    bundle = run_instance(lab.build("plane"), seed=0)
    assert bundle.exit_code == 0
    assert any(r.kind == "bound:northcott" for r in bundle.results())


# ---------------------------------------------------------------------------
# command line


def test_cli_run_writes_json_and_tsv(tmp_path):
    script = tmp_path / "s.chl"
    script.write_text(SCRIPT)
    out = tmp_path / "out.json"
    tsv = tmp_path / "tables"
    res = CliRunner().invoke(main, ["run", str(script), "--json", str(out), "--tsv", str(tsv),
                                    "--seed", "2"])
    assert res.exit_code == 0, res.output
    assert json.loads(out.read_text())["seed"] == "2"
    table = (tsv / "R_J.tsv").read_text().splitlines()
    assert table[0] == "n\tlength\tfirst_difference"
    assert "coefficients" in res.output


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.chl"
    bad.write_text("ring R = poly(x,y\n")
    assert CliRunner().invoke(main, ["run", str(bad)]).exit_code == 2
    pre = tmp_path / "pre.chl"
    pre.write_text("ring R = poly(x,y,z)\nideal I in R = (x, y)\ncoeffs R I\n")
    assert CliRunner().invoke(main, ["run", str(pre)]).exit_code == 3
    big = tmp_path / "big.chl"
    big.write_text("ring R = poly(x,y,z)\n"
                   "ideal I in R = (x^5 - y*z^4, x*y^4 - z^5, y^5 - x^4*z, x^9, y^9, z^9)\n"
                   "coeffs R I\n")
    assert CliRunner().invoke(main, ["run", str(big), "--maxdeg", "6"]).exit_code == 4


def test_cli_field_override(tmp_path):
    script = tmp_path / "s.chl"
    script.write_text("ring R = poly(x,y)\nideal m in R = (x,y)\ncoeffs R m\n")
    out = tmp_path / "o.json"
    res = CliRunner().invoke(main, ["run", str(script), "--field", "qq", "--json", str(out)])
    assert res.exit_code == 0
    assert json.loads(out.read_text())["field"] == "QQ"


def test_cli_demo_and_list():
    runner = CliRunner()
    res = runner.invoke(main, ["list"])
    assert "z-ring" in res.output and "(expensive)" in res.output
    res = runner.invoke(main, ["demo", "z-ring"])
    assert res.exit_code == 0
    assert "expected" in res.output and "quantity=hdeg" in res.output
    assert runner.invoke(main, ["demo", "rees-cubic"]).exit_code == 3
    assert runner.invoke(main, ["demo", "nope"]).exit_code == 1
