import csv
import io
import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from superhedge.cli import run

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def schema(name):
    return json.loads(resources.files("superhedge").joinpath(f"schemas/{name}.json").read_text())


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv)
    return code, (json.loads(out) if out else None), err


@pytest.mark.parametrize(
    "argv,name",
    [
        (["omega-star", "-m", FIX / "trinomial.json"], "polar"),
        (["classify", "-m", FIX / "rising.json"], "polar"),
        (["classify", "-m", FIX / "section4.json"], "polar"),
        (["price", "-m", FIX / "binomial.json", "-g", FIX / "call.json"], "price"),
        (["hedge", "-m", FIX / "trinomial.json", "-g", FIX / "trinomial_call.json"], "hedge"),
        (["dual", "-m", FIX / "trinomial.json", "-g", FIX / "trinomial_call.json", "--cap", 5], "dual"),
        (["dual", "-m", FIX / "section4.json", "-g", FIX / "g1.json", "--with-options", "true"], "dual"),
        (["semistatic", "-m", FIX / "section4.json", "-g", FIX / "g2.json"], "semistatic"),
        (["check", "-m", FIX / "section4.json", "-g", FIX / "g2.json"], "check"),
        (["check", "-m", FIX / "binomial.json", "--seed", 3], "check"),
        (["replicate", "-m", FIX / "trinomial.json", "-g", FIX / "trinomial_call.json"], "replicate"),
        (["gen", "random", "--seed", 4, "--assets", 2, "--steps", 2], "market"),
        (["gen", "section4", "--emit", "g1"], "payoff"),
    ],
)
def test_outputs_match_schema(argv, name):
    code, doc, err = call_json(*argv)
    assert code == 0, err
    jsonschema.validate(doc, schema(name))


def test_price_golden():
    _, doc, _ = call_json("price", "-m", FIX / "binomial.json", "-g", FIX / "call.json")
    assert doc["price"] == "1/3" and doc["target"] == "omega-star"


def test_classify_rising():
    _, doc, _ = call_json("classify", "-m", FIX / "rising.json")
    assert doc["class"] == "no-martingale-measure"
    assert doc["omega_star"] == [] and doc["polar"] == ["a", "b", "c"]
    assert doc["witness"]["strict"] is True


def test_price_on_empty_support_is_neg_inf():
    _, doc, _ = call_json("price", "-m", FIX / "rising.json", "-g", FIX / "rising_payoff.json")
    assert doc["price"] == "-inf"


@pytest.mark.parametrize(
    "argv,code,needle",
    [
        (["hedge", "-m", FIX / "rising.json", "-g", FIX / "rising_payoff.json"], 3, "empty"),
        (["replicate", "-m", FIX / "rising.json", "-g", FIX / "rising_payoff.json"], 3, "martingale"),
        (["price", "-m", FIX / "binomial.json", "-g", FIX / "g1.json"], 2, "payoff"),
        (["price", "-m", FIX / "missing.json", "-g", FIX / "call.json"], 2, "cannot read"),
        (["price", "-m", FIX / "binomial.json"], 2, "required"),
        (["price", "-m", FIX / "binomial.json", "-g", FIX / "call.json", "--target", "x"], 2, "invalid choice"),
        (["dual", "-m", FIX / "binomial.json", "-g", FIX / "call.json", "--with-options", "maybe"], 2, "boolean"),
        (["gen", "binomial", "--u", "1/2", "--d", "2"], 2, "u > d"),
        (["gen", "section4", "--emit", "call:2"], 2, "g1"),
        (["nonsense"], 2, "invalid choice"),
    ],
)
def test_error_exit_codes(argv, code, needle, capsys):
    got, out, err = call(*argv)
    err += capsys.readouterr().err  # argparse writes to sys.stderr
    assert got == code
    assert needle in err
    assert out == ""


def test_csv_and_text_formats():
    args = ["price", "-m", FIX / "binomial.json", "-g", FIX / "call.json"]
    _, out, _ = call(*args, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["key", "value"] and ["price", "1/3"] in rows
    _, out, _ = call(*args, "--format", "text")
    assert "price: 1/3" in out.splitlines()


def test_semistatic_section4():
    _, doc, _ = call_json("semistatic", "-m", FIX / "section4.json", "-g", FIX / "g1.json")
    assert doc["price"] == "0" and doc["hypothesis"] == "fails"
    _, doc, _ = call_json("semistatic", "-m", FIX / "section4.json", "-g", FIX / "g2.json", "--target", "all")
    assert doc["price"] == "159/220"


def test_check_exit_zero_when_equal():
    code, doc, _ = call_json("check", "-m", FIX / "trinomial.json", "-g", FIX / "trinomial_call.json")
    assert code == 0 and doc["equal"] and doc["omega_star_agree"]


def test_gen_is_deterministic():
    a = call("gen", "random", "--seed", 11, "--steps", 2)
    b = call("gen", "random", "--seed", 11, "--steps", 2)
    assert a == b and a[0] == 0


def test_fixtures_validate():
    for f in FIX.glob("*.json"):
        doc = json.loads(f.read_text())
        jsonschema.validate(doc, schema("market" if "paths" in doc else "payoff"))


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run(
        [sys.executable, "-m", "superhedge", "price", "-m", FIX / "binomial.json", "-g", FIX / "call.json"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["price"] == "1/3"
