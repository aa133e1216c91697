"""Parser round trips, CLI behavior, exit codes, golden files."""

import io
import json
import os
import subprocess
import sys

import pytest

from weylnf.cli import main
from weylnf.errors import ParseError, PreconditionError
from weylnf.operators import GradedOp
from weylnf.parsing import evaluate, parse, parse_operator, to_text

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")

CORPUS = [
    "d^2 + x",
    "d^3 + (3/2)*x*d + 3/4",
    "G{r=3; f[2,0]=1}",
    "G{r=0; f[1,0]=1/2; f[0,1]=2; g[2]=-1}",
    "x*d",
    "d*x",
    "(d + x)^4",
    "1/2",
    "7",
    "xi^2 + 1",
    "xi*x*d",
    "(x + d)*(x - d)",
    "d^2*x^3",
    "x^5 + d^5",
    "2*x - 3*d",
    "(1/3)*d + (2/7)*x",
    "G{r=1; f[0,0]=1}*d",
    "d*(d*(d*x))",
    "x - x",
    "0",
    "(d^2 + x)^2",
    "d^2 - 2*x*d + x^2",
    "G{r=2; g[1]=1; g[3]=1/2}",
    "x^2*d^2 + x*d + 1",
    "(d + 1)*(d - 1)",
    "3/4 + d",
    "-x",
    "-(d^2 + x)",
    "xi + xi^2",
    "G{r=0; f[0,1]=1+xi}",
    "G{r=0; f[2,1]=-1/2+2*xi^2}",
    "d^10",
]


@pytest.mark.parametrize("src", CORPUS)
def test_parse_print_round_trip(src):
    ast = parse(src)
    printed = to_text(ast)
    assert parse(printed) == ast


@pytest.mark.parametrize("src", CORPUS)
def test_round_trip_evaluates_identically(src):
    a = evaluate(parse(src), k=3, xcap=10)
    b = evaluate(parse(to_text(parse(src))), k=3, xcap=10)
    assert a == b


def test_parse_examples():
    A = parse_operator("d^2 + x")
    assert A == GradedOp.from_monomials(1, [(0, 2, 1), (1, 0, 1)])
    B = parse_operator("d^3 + (3/2)*x*d + 3/4")
    assert B.ord() == 3 and B.is_monic()
    H = parse_operator("G{r=3; f[2,0]=1}", k=2)
    assert H.components[3][2].rational_value() == 1


def test_parse_error_location():
    with pytest.raises(ParseError) as err:
        parse("d^2 + @")
    assert err.value.col == 7


def test_xi_requires_k():
    with pytest.raises(PreconditionError):
        evaluate(parse("xi + d"), k=None)


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_cli_eval_and_errors(capsys):
    code, out = run_cli(["eval", "d^2 + x"], capsys)
    assert code == 0 and out.strip() == "d^2 + x"
    code, out = run_cli(["eval", "d^"], capsys)
    assert code == 2
    assert json.loads(out)["error"]["kind"] == "ParseError"
    code, out = run_cli(["eval", "xi"], capsys)
    assert code == 3
    code, out = run_cli(["schur", "--q", "d^2 + d + x", "--depth", "3"], capsys)
    assert code == 3


def test_cli_mul_commutator(capsys):
    code, out = run_cli(["mul", "d", "x"], capsys)
    assert code == 0 and out.strip() == "x*d + 1"
    code, out = run_cli(["commutator", "d^2", "x"], capsys)
    assert code == 0 and out.strip() == "2*d"


def test_cli_verify_small(capsys):
    code, out = run_cli(["verify", "--suite", "powerform", "--cases", "4", "--seed", "1"],
                        capsys)
    assert code == 0
    assert "suite powerform: 4 cases: ok" in out


def test_cli_verify_worker_fanout(capsys):
    code, out = run_cli(["verify", "--suite", "appendix", "--cases", "6",
                         "--seed", "9", "--workers", "2"], capsys)
    assert code == 0
    assert "suite appendix: 6 cases: ok" in out


def test_cli_classify_candidate_table(capsys):
    cand = json.dumps([[2, 0, "1"], [0, 3, "-1"]])
    code, out = run_cli(["classify", "--fixture", "generic", "--depth", "6",
                         "--candidate", cand, "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["typeIdentities"][:3] == [[0, "0"], [1, "2"], [2, "1"]]


def _golden(name):
    with open(os.path.join(GOLDEN, name), "rb") as fh:
        return fh.read()


def test_golden_expand_power(capsys):
    code, out = run_cli(["expand-power", "--k", "3"], capsys)
    assert code == 0
    assert out.encode() == _golden("expand_power_k3.txt")


def test_golden_newton_svg(tmp_path, capsys):
    inp = os.path.join(GOLDEN, "normal_form_generic.json")
    svg1 = tmp_path / "a.svg"
    svg2 = tmp_path / "b.svg"
    code, _ = run_cli(["newton", "--input", inp, "--svg", str(svg1)], capsys)
    assert code == 0
    code, _ = run_cli(["newton", "--input", inp, "--svg", str(svg2)], capsys)
    assert code == 0
    assert svg1.read_bytes() == svg2.read_bytes() == _golden("newton_generic.svg")


def test_golden_normal_form_fixture_regenerates(tmp_path, capsys):
    out = tmp_path / "nf.json"
    code, _ = run_cli(["normal-form", "--fixture", "generic", "--depth", "8",
                       "--out", str(out)], capsys)
    assert code == 0
    assert out.read_bytes() == _golden("normal_form_generic.json")


def test_golden_classify_kdv(capsys):
    code, out = run_cli(["classify", "--fixture", "kdv24", "--depth", "8",
                         "--wmax", "6", "--format", "json"], capsys)
    assert code == 0
    assert out.encode() == _golden("classify_kdv.json")


def test_golden_classify_generic(capsys):
    code, out1 = run_cli(["classify", "--fixture", "generic", "--depth", "10",
                          "--format", "json"], capsys)
    assert code == 0
    code, out2 = run_cli(["classify", "--fixture", "generic", "--depth", "10",
                          "--format", "json"], capsys)
    assert out1 == out2
    assert out1.encode() == _golden("classify_generic.json")


PAIR_REPORT_SCHEMA = {
    "type": "object",
    "required": ["commutes", "classification", "certificate", "typeIdentities",
                 "windows", "verdict", "tentative", "p", "q", "stability"],
    "properties": {
        "commutes": {"type": "boolean"},
        "tentative": {"type": "boolean"},
        "verdict": {"type": "string"},
        "p": {"type": "integer"},
        "q": {"type": "integer"},
        "classification": {
            "type": "object",
            "required": ["variant", "sigma", "vertices", "tentative"],
            "properties": {
                "variant": {"enum": ["sdeg_zero", "restriction", "asymptotic",
                                     "undetermined"]},
                "sigma": {"type": ["string", "null"]},
                "tentative": {"type": "boolean"},
                "vertices": {"type": "array"},
            },
        },
        "certificate": {"type": ["object", "null"]},
        "typeIdentities": {"type": "array",
                           "items": {"type": "array", "minItems": 2, "maxItems": 2}},
        "windows": {"type": "object"},
    },
}


def test_cli_json_validates_against_schema(capsys):
    import jsonschema
    for argv in (["classify", "--fixture", "powers", "--depth", "4", "--format", "json"],
                 ["classify", "--fixture", "generic", "--depth", "6", "--format", "json"]):
        code, out = run_cli(argv, capsys)
        assert code == 0
        jsonschema.validate(json.loads(out), PAIR_REPORT_SCHEMA)


def test_cli_json_schema_shape(capsys):
    code, out = run_cli(["classify", "--fixture", "powers", "--depth", "4",
                         "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    for key in ("commutes", "classification", "certificate", "typeIdentities",
                "windows", "verdict", "tentative"):
        assert key in data
    assert data["certificate"]["text"] == "X^2 - Y^3"


def test_console_entry_point():
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "weylnf.cli", "eval", "x*d"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "x*d"
