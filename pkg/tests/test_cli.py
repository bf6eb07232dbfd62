import io
import json
import os
import subprocess
import sys

import pytest

from coloc.cli import DEMOS, EXIT_FAIL, EXIT_OK, EXIT_PARSE, EXIT_USAGE, run
from coloc.report import CheckReport, Witness, emit_json, load_json

from conftest import DATA, ROOT

GOLDEN = ROOT / "tests" / "golden"
UPDATE = os.environ.get("COLOC_UPDATE_GOLDEN") == "1"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def normalized(text: str):
    payload = json.loads(text)
    for r in payload:
        r["timing_ms"] = 0
    return payload


# -- the documented examples -------------------------------------------------


def test_demo_qplane_compat():
    code, out, _ = call("demo", "qplane-compat")
    assert code == EXIT_OK
    assert "compatible" in out and "x⁻¹⊗g⁻¹" in out


def test_check_bialgebra_kc2(monkeypatch):
    monkeypatch.chdir(ROOT)
    code, out, _ = call("check", "bialgebra", "fixtures/kc2.alg")
    assert code == EXIT_OK
    assert "pass" in out


def test_compat_kx(monkeypatch):
    monkeypatch.chdir(ROOT)
    code, out, _ = call("compat", "fixtures/kx.alg", "--coaction", "delta", "--loc", "at_x")
    assert code == EXIT_FAIL
    assert "incompatible" in out and "x⊗1 + 1⊗t" in out


def test_unknown_subcommand():
    code, _, _ = call("frobnicate")
    assert code == EXIT_USAGE


def test_parse_error_exit_code_and_location():
    code, _, err = call("parse", str(ROOT / "tests" / "rejects" / "unknown_basis.alg"))
    assert code == EXIT_PARSE
    assert err.strip().endswith("unknown_basis.alg:3:10: unknown basis element 'c'")


def test_missing_file_is_usage_error():
    code, _, err = call("parse", str(ROOT / "no-such-file.alg"))
    assert code == EXIT_USAGE and "coloc:" in err


def test_field_flag_rejects_rational_scalar():
    code, _, err = call("check", "bialgebra", str(DATA / "kc2.alg"), "--field", "F2")
    assert code == EXIT_PARSE and "GF(2)" in err


def test_field_flag_over_f3():
    code, _, _ = call("check", "bialgebra", str(DATA / "kc2.alg"), "--field", "F3")
    assert code == EXIT_OK


def test_parse_prints_canonical_text():
    code, out, _ = call("parse", str(DATA / "qplane.alg"))
    assert code == EXIT_OK
    assert out.startswith("field Q\nskew qplane {")


def test_check_failure_exit_code():
    code, out, _ = call("check", "comodule-algebra", str(DATA / "2pt.alg"))
    assert code == EXIT_FAIL
    assert "broken" in out


def test_localize_subcommand():
    code, out, _ = call("localize", str(DATA / "qplane.alg"), "--at", "at_x", "--json")
    assert code == EXIT_OK
    assert all(r["status"] == "pass" for r in json.loads(out))


def test_unknown_name_is_usage_error():
    code, _, err = call("compat", str(DATA / "kx.alg"), "--coaction", "nope", "--loc", "at_x")
    assert code == EXIT_USAGE and "nope" in err


@pytest.mark.parametrize("demo,code", [
    ("qplane-compat", EXIT_OK), ("kx-incompat", EXIT_FAIL), ("kc2-survey", EXIT_OK), ("kc2xc2-survey", EXIT_OK),
    ("coinvariants", EXIT_OK), ("swap", EXIT_FAIL), ("prod", EXIT_OK), ("pasting", EXIT_OK),
    ("h4-entwining", EXIT_OK),
])
def test_demo_exit_codes(demo, code):
    assert call("demo", demo)[0] == code


def test_exit_code_is_a_function_of_statuses():
    for name in sorted(DEMOS):
        code, out, _ = call("demo", name, "--json")
        statuses = {r["status"] for r in json.loads(out)}
        assert code == (EXIT_OK if statuses == {"pass"} else EXIT_FAIL)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "coloc", "check", "bialgebra", str(DATA / "kc2.alg")],
                          capture_output=True, text=True)
    assert proc.returncode == 0


# -- JSON schema -------------------------------------------------------------


def test_pass_report_schema():
    r = CheckReport("bialgebra", timing_ms=3)
    assert json.loads(emit_json(r)) == {"check": "bialgebra", "status": "pass", "witnesses": [], "timing_ms": 3}


def test_fail_report_schema():
    r = CheckReport("algebra")
    r.add(Witness("associativity", ("g", "g", "g"), "1/2 g", "g"))
    d = json.loads(emit_json(r))
    assert d["status"] == "fail"
    (w,) = d["witnesses"]
    assert set(w) == {"object", "indices", "lhs", "rhs"} and w["lhs"] != w["rhs"]


def test_json_round_trip_on_demos():
    for name in sorted(DEMOS):
        _, out, _ = call("demo", name, "--json")
        data = out.strip().encode("utf-8")
        assert emit_json(load_json(data)) == data


def test_report_statuses_and_witness_invariant():
    for path in sorted(DATA.glob("*.alg")):
        _, out, _ = call("report", "--json", str(path))
        for r in json.loads(out):
            assert r["status"] in ("pass", "fail", "incompatible", "error")
            assert (r["status"] == "pass") == (not r["witnesses"])


# -- golden files --------------------------------------------------------------


def _golden(name: str, text: str):
    path = GOLDEN / f"{name}.json"
    got = normalized(text)
    if UPDATE:
        path.write_text(json.dumps(got, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    assert got == json.loads(path.read_text(encoding="utf-8"))


@pytest.mark.parametrize("name", sorted(DEMOS))
def test_demo_golden(name):
    _golden(f"demo-{name}", call("demo", name, "--json")[1])


@pytest.mark.parametrize("path", sorted(DATA.glob("*.alg")), ids=lambda p: p.stem)
def test_report_golden(path):
    _golden(f"report-{path.stem}", call("report", "--json", str(path))[1])
