from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qdeform import __version__
from qdeform.cli import dumps, main


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


# --- eval ---------------------------------------------------------------------


def test_eval_hermite_I(capsys):
    code, rep = run_json(capsys, "eval", "--preset", "hermite_I", "--q", "0.5", "--n", "2", "--x", "1.0")
    assert code == 0
    assert rep["routes"] == {"recurrence": 0.5, "explicit": 0.5, "hypergeometric": 0.5}
    assert set(rep) >= {"tool_version", "command", "config", "checks", "family", "params", "n", "x", "routes", "gaps"}
    assert rep["tool_version"] == __version__ and rep["command"] == "eval"
    for c in rep["checks"]:
        assert set(c) >= {"name", "status", "lhs", "rhs", "gap", "tolerance"}


def test_eval_classical(capsys):
    code, rep = run_json(capsys, "eval", "--family", "classical", "--n", "2", "--x", "0")
    assert code == 0
    assert rep["routes"]["recurrence"] == -2 and rep["routes"]["explicit"] == -2


def test_eval_degree_zero(capsys):
    code, rep = run_json(capsys, "eval", "--preset", "hermite_I", "--n", "0", "--x", "3.7")
    assert code == 0
    assert all(v == 1 for v in rep["routes"].values())


def test_eval_off_restriction_reports_recurrence_only(capsys):
    code, rep = run_json(capsys, "eval", "--alpha", "0.3", "--beta", "0", "--l", "2", "--q", "0.5", "--n", "3", "--x", "0.4")
    assert code == 0
    assert rep["routes"]["explicit"] is None and rep["routes"]["recurrence"] is not None


@pytest.mark.parametrize(
    "argv",
    [
        ("eval", "--preset", "nope"),
        ("eval", "--preset", "hermite_I", "--q", "1.5"),
        ("eval", "--alpha", "0.3"),
        ("eval", "--preset", "hermite_I", "--n", "-1"),
    ],
)
def test_eval_invalid_params_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


# --- verify -------------------------------------------------------------------


def test_verify_routes(capsys):
    code, rep = run_json(capsys, "verify", "--suite", "routes", "--preset", "hermite_I", "--q", "0.5")
    assert code == 0
    assert rep["checks"] and all(c["status"] == "pass" for c in rep["checks"])


def test_verify_orthogonality(capsys):
    code, rep = run_json(capsys, "verify", "--suite", "orthogonality", "--preset", "hermite_II", "--q", "0.5", "--c", "1.0", "--kmax", "80")
    assert code == 0
    assert all(c["status"] == "pass" and c["gap"] <= 1e-7 for c in rep["checks"])


def test_verify_mismatch_expected(capsys):
    code, rep = run_json(capsys, "verify", "--suite", "generalized-closed-form", "--alpha", "0.3", "--beta", "0", "--l", "2", "--q", "0.5")
    assert code == 0
    assert [c["status"] for c in rep["checks"]] == ["pass", "pass"]


def test_verify_all_reports_flagged_and_skips(capsys):
    code, rep = run_json(capsys, "verify", "--preset", "hermite_I", "--q", "0.5")
    assert code == 0
    statuses = {c["status"] for c in rep["checks"]}
    assert statuses == {"pass", "flagged"}
    assert [s["suite"] for s in rep["skipped"]] == ["coherent"]
    names = {c["name"] for c in rep["checks"]}
    for gf in ("generating-function/hermite-I", "generating-function/generalized-I", "generating-function/generalized-II"):
        assert gf in names


def test_verify_fail_exit_1(capsys):
    code, rep = run_json(capsys, "verify", "--suite", "self-adjointness", "--preset", "bm_b")
    assert code == 1
    assert any(c["status"] == "fail" for c in rep["checks"])


def test_verify_text_summary(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "relations", "--preset", "hermite_I", "--format", "text")
    assert code == 0
    assert out.rstrip().splitlines()[-1].endswith("0 fail")


# --- tolerances and config -----------------------------------------------------


@pytest.mark.parametrize("form", [("--tol.relations", "1e-300"), ("--tol.relations=1e-300",)])
def test_tolerance_override(capsys, form):
    code, rep = run_json(capsys, "verify", "--suite", "relations", "--preset", "hermite_I", *form)
    assert rep["config"]["tolerances"]["relations"] == 1e-300
    assert code == 1


def test_bad_tolerance_exit_2(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "relations", "--tol.relations", "abc")
    assert code == 2


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# flat key=value\npreset = hermite_I\nq = 0.3\nn = 3\nx = 0.7\ntol.routes = 1e-9\n")
    code, rep = run_json(capsys, "eval", "--config", str(cfg))
    assert code == 0
    assert rep["n"] == 3 and rep["params"]["q"] == 0.3
    assert rep["config"]["tolerances"]["routes"] == 1e-9
    code, rep = run_json(capsys, "eval", "--config", str(cfg), "--q", "0.8")
    assert rep["params"]["q"] == 0.8 and rep["n"] == 3


def test_missing_config_exit_2(capsys, tmp_path):
    code, _, _ = run(capsys, "eval", "--config", str(tmp_path / "absent.cfg"))
    assert code == 2


# --- spectrum -----------------------------------------------------------------


def test_spectrum_head(capsys):
    code, rep = run_json(capsys, "spectrum", "--preset", "hermite_I", "--q", "0.5", "--dim", "128")
    assert code == 0
    assert rep["lattice"]["head"] == pytest.approx(1.414214, abs=1e-6)
    assert rep["rows"][0]["k"] == 0 and rep["rows"][0]["rel_gap"] <= 1e-6
    assert "table_verdict" in rep["classification"]


def test_spectrum_classify_only(capsys):
    code, rep = run_json(capsys, "spectrum", "--alpha", "-1", "--l", "2", "--q", "0.5", "--classify-only")
    assert code == 0
    v = rep["classification"]
    assert v["direct_verdict"] == "convergent" and v["deficiency_indices"] == [1, 1]


def test_spectrum_classical(capsys):
    code, rep = run_json(capsys, "spectrum", "--family", "classical", "--dim", "64")
    assert code == 0
    assert "not_applicable" in rep["lattice"]
    assert rep["classification"]["carleman_condition_holds"] is True


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--preset", "hermite_I", "--q", "0.5", "--dim", "32", "--format", "csv")
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "k,analytic_point,nearest_eigenvalue,rel_gap"
    assert "\r" not in out and len(lines) > 2


def test_spectrum_csv_header_when_empty(capsys):
    code, out, _ = run(capsys, "spectrum", "--family", "classical", "--dim", "16", "--format", "csv")
    assert code == 0
    assert out.split("\n")[0] == "k,analytic_point,nearest_eigenvalue,rel_gap"


def test_spectrum_restriction_violation_exit_2(capsys):
    code, _, err = run(capsys, "spectrum", "--alpha", "0.3", "--beta", "0", "--l", "2", "--q", "0.5")
    assert code == 2 and err


# --- coherent -----------------------------------------------------------------


def test_coherent_vacuum(capsys):
    code, rep = run_json(capsys, "coherent", "--z", "0")
    assert code == 0
    assert rep["eigen_residual"] == 0 and rep["norm_factor"] == 1


def test_coherent_hermite_II(capsys):
    code, rep = run_json(capsys, "coherent", "--preset", "hermite_II", "--q", "0.5", "--z", "0.5")
    assert code == 0
    assert rep["eigen_residual"] <= 1e-10
    for row in rep["overlaps"]:
        a, b = row["overlap"], row["overlap_series"]
        assert abs(complex(a["re"], a["im"]) - complex(b["re"], b["im"])) <= 1e-12


def test_coherent_hermite_I_outside_radius(capsys):
    # the series has radius zero at q < 1, so this request is rejected
    code, _, err = run(capsys, "coherent", "--preset", "hermite_I", "--q", "0.5", "--z", "1.0", "--ntrunc", "200")
    assert code == 2 and "radius" in err


def test_coherent_coefficients_and_complex_z(capsys):
    code, rep = run_json(capsys, "coherent", "--preset", "hermite_II", "--z", "0.3-0.4j", "--coefficients", "--ntrunc", "50")
    assert code == 0
    assert len(rep["coefficients"]) == 50
    assert rep["z"] == {"re": 0.3, "im": -0.4}


def test_coherent_csv(capsys):
    code, out, _ = run(capsys, "coherent", "--preset", "hermite_II", "--z", "0.5", "--format", "csv")
    assert code == 0
    assert out.split("\n")[0] == "z2,overlap_re,overlap_im,overlap_series_re,overlap_series_im"


# --- output contract ------------------------------------------------------------


def test_json_is_byte_identical(capsys):
    argv = ("verify", "--preset", "hermite_II", "--q", "0.5")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_dumps_format():
    text = dumps({"b": 1e-11, "a": [float("nan"), 1 + 2j, 0.1]})
    assert text.index('"a"') < text.index('"b"')
    assert "9.9999999999999994e-12" in text
    assert "null" in text and '"im": 2' in text
    assert "0.10000000000000001" in text


def test_out_file(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out, _ = run(capsys, "eval", "--preset", "hermite_I", "--out", str(dest))
    assert code == 0 and json.loads(dest.read_text())["command"] == "eval"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qdeform", "eval", "--preset", "hermite_I", "--n", "1", "--x", "2", "--format", "text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "recurrence" in proc.stdout


def test_help_lists_defaults(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--help"])
    out, _ = capsys.readouterr()
    assert "default" in out


def test_nonpositive_tolerance_exit_2(capsys):
    code, _, err = run(capsys, "verify", "--suite", "relations", "--tol.relations", "0")
    assert code == 2 and "positive" in err
