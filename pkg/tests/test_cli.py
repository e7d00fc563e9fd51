import json
import subprocess
import sys

import pytest

from permgf.cli import main, run_verification
from permgf.exact import parse_ratfun, ratfun_from_json, ratfun_to_json


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_ar_text(capsys):
    code, out = run(capsys, "ar", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "AR(2,z)"
    assert lines[1] == "  factored:    z^4*(1-z)/(1-2*z)^3"
    assert lines[2].startswith("  canonical:")
    assert parse_ratfun(lines[1].split(": ")[1]) == parse_ratfun("z^4*(1-z)/(1-2*z)^3")


def test_aaron_json(capsys):
    code, out = run(capsys, "aaron", "1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["name"] == "Aaron(1,z)"
    assert ratfun_from_json(payload["ratfun"]) == parse_ratfun("2*z^5/(1-2*z)^3")


def test_json_round_trip_is_byte_identical(capsys):
    _, out = run(capsys, "ar", "4", "--format", "json")
    emitted = json.dumps(json.loads(out)["ratfun"])
    again = json.dumps(ratfun_to_json(ratfun_from_json(json.loads(emitted))))
    assert again == emitted


def test_series(capsys):
    code, out = run(capsys, "series", "--s", "1", "--r", "1", "--n", "6")
    assert code == 0
    assert out.strip() == "0, 0, 0, 0, 0, 2, 12"


def test_series_json(capsys):
    _, out = run(capsys, "series", "--s", "0", "--r", "0", "--n", "5", "--format", "json")
    assert json.loads(out) == {"s": 0, "r": 0, "n": 5, "coefficients": ["1", "1", "2", "4", "8", "16"]}


@pytest.mark.parametrize("argv", [
    ["ar", "9"],
    ["ar", "-1"],
    ["series", "--s", "2", "--r", "1", "--n", "3"],
    ["verify", "--nmax", "12"],
    ["verify", "--smax", "2"],
    ["bogus"],
])
def test_invalid_arguments_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_verify_small(capsys):
    code, out = run(capsys, "verify", "--rmax", "2", "--smax", "1", "--nmax", "6")
    assert code == 0
    assert out.strip().endswith("checks passed")
    assert "FAIL" not in out


def test_verify_json_status_matches_checks(capsys):
    code, out = run(capsys, "verify", "--rmax", "1", "--nmax", "5", "--format", "json")
    report = json.loads(out)
    assert report["passed"] == all(r["passed"] for r in report["results"])
    assert (code == 0) == report["passed"]


def test_verify_report_fails_on_bad_check(monkeypatch):
    import permgf.cli as cli
    from permgf.exact import RatFun

    real = cli.extract_gf

    def skewed(r, s, table=None, **kw):
        return real(r, s, table, **kw) + (RatFun(1) if (r, s) == (1, 0) else RatFun(0))

    monkeypatch.setattr(cli, "extract_gf", skewed)
    report = run_verification(2, 0, 5)
    assert not report.passed
    assert [r.name for r in report.results if not r.passed] == ["AR(1,z) vs enumeration"]


def test_verify_exit_1_on_failure(monkeypatch, capsys):
    import permgf.cli as cli
    from permgf.oracle import CheckResult, Report

    monkeypatch.setattr(cli, "run_verification",
                        lambda *a, **k: Report("x", [CheckResult("broken", 3, False)]))
    code, out = run(capsys, "verify", "--nmax", "3")
    assert code == 1
    assert "[FAIL] broken" in out


def test_selftest(capsys):
    code, out = run(capsys, "selftest")
    assert code == 0
    assert out.count("[PASS]") == len(out.strip().splitlines())


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "permgf", "ar", "0"],
                          capture_output=True, text=True, check=True)
    assert "(1-z)/(1-2*z)" in proc.stdout
