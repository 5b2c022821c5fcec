import json

import numpy as np
import pytest

from qbroadcast.cli import CSV_HEADER, run_command
from qbroadcast.errors import ContractError


def _run(capsys, argv):
    code = run_command(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------- baseline


def test_baseline_json(capsys):
    code, out, err = _run(capsys, ["baseline", "--grid", "60", "--tol", "1e-3"])
    assert code == 0
    assert err == ""
    payload = json.loads(out)
    assert payload["lo"] == pytest.approx(0.5 - np.sqrt(39.0) / 16.0, abs=3e-3)
    assert payload["hi"] == pytest.approx(0.5 + np.sqrt(39.0) / 16.0, abs=3e-3)
    assert payload["tolerance"] == 1e-3


# ------------------------------------------------------------------- sweep


def test_sweep_csv_contract(capsys):
    code, out, err = _run(
        capsys,
        ["sweep", "--pairs", "46,16", "--from", "0.2", "--to", "0.8", "--steps", "4"],
    )
    assert code == 0
    lines = out.rstrip("\n").split("\n")
    assert lines[0] == CSV_HEADER
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 8
    # sorted by (alpha2, pair) and all floats echo back in 12-digit form
    keys = [(float(r[0]), r[1]) for r in rows]
    assert keys == sorted(keys)
    assert {r[1] for r in rows} == {"16", "46"}
    for r in rows:
        for field in (r[0], *r[2:7]):
            assert field == f"{float(field):.12g}"
        assert r[7] in ("0", "1")


def test_sweep_handles_domain_edges(capsys):
    code, out, _ = _run(
        capsys,
        ["sweep", "--pairs", "16", "--from", "0.99", "--to", "1.0", "--steps", "2"],
    )
    assert code == 0
    rows = [line.split(",") for line in out.rstrip("\n").split("\n")[1:]]
    assert [r[0] for r in rows] == ["0.99", "1"]
    for r in rows:
        assert all(np.isfinite(float(x)) for x in (*r[2:7],))


def test_sweep_json_is_reproducible(capsys):
    argv = ["sweep", "--pairs", "12", "--from", "0.3", "--to", "0.6", "--steps", "3",
            "--format", "json"]
    _, first, _ = _run(capsys, argv)
    _, second, _ = _run(capsys, argv)
    assert first == second
    payload = json.loads(first)
    assert len(payload) == 3
    assert set(payload[0]) == {"alpha2", "pair", "min_pt_eigenvalue", "w3", "w4",
                               "concurrence", "eof", "entangled"}


def test_sweep_writes_output_file(tmp_path, capsys):
    target = tmp_path / "rows.csv"
    code, out, _ = _run(
        capsys,
        ["sweep", "--pairs", "16", "--from", "0.5", "--to", "0.5", "--steps", "1",
         "--out", str(target)],
    )
    assert code == 0
    assert out == ""
    text = target.read_text(encoding="utf-8")
    assert text.startswith(CSV_HEADER + "\n")
    assert len(text.rstrip("\n").split("\n")) == 2


def test_sweep_rejects_bad_pairs_and_steps(capsys):
    code, _, err = _run(capsys, ["sweep", "--pairs", "99", "--from", "0.2", "--to", "0.8",
                                 "--steps", "3"])
    assert code == 2
    assert "unknown pair" in err
    code, _, err = _run(capsys, ["sweep", "--pairs", "16", "--from", "0.2", "--to", "0.8",
                                 "--steps", "0"])
    assert code == 2


# -------------------------------------------------------------- thresholds


def test_thresholds_locates_known_boundaries(capsys):
    code, out, _ = _run(capsys, ["thresholds", "--grid", "60", "--tol", "1e-3"])
    assert code == 0
    payload = json.loads(out)
    assert payload["branch"] == "Q0Q0"
    assert payload["grid"] == 60

    def lo(key):
        ivs = payload[key]["intervals"]
        assert len(ivs) == 1
        return ivs[0]["lo"]

    assert lo("rho16") == pytest.approx(9.0 / 49.0, abs=3e-3)
    assert lo("rho14") == pytest.approx(9.0 / 49.0, abs=3e-3)
    assert lo("rho46") == pytest.approx((9.0 + 8.0 * np.sqrt(3.0)) / 37.0, abs=3e-3)
    assert payload["rho12"]["predicate"] == "separable"
    assert lo("rho12") == pytest.approx(3.0 / 11.0, abs=3e-3)
    assert lo("broadcast") == pytest.approx((9.0 + 8.0 * np.sqrt(3.0)) / 37.0, abs=3e-3)
    assert payload["broadcast"]["intervals"][0]["hi"] == 1.0


# ------------------------------------------------------------------ config


def test_config_file_sets_scan_settings(tmp_path, capsys):
    cfg = tmp_path / "scan.cfg"
    cfg.write_text("# coarse run\ngrid = 60\ntol = 1e-3\n", encoding="utf-8")
    code, out, _ = _run(capsys, ["thresholds", "--config", str(cfg)])
    assert code == 0
    payload = json.loads(out)
    assert payload["grid"] == 60
    assert payload["tol"] == 1e-3


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "scan.cfg"
    cfg.write_text("grid = 60\ntol = 1e-3\n", encoding="utf-8")
    code, out, _ = _run(capsys, ["thresholds", "--config", str(cfg), "--grid", "76"])
    assert code == 0
    assert json.loads(out)["grid"] == 76


def test_config_rejects_unknown_keys_and_bad_values(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("scale = 3\n", encoding="utf-8")
    code, _, err = _run(capsys, ["baseline", "--config", str(cfg)])
    assert code == 2
    assert "unknown key" in err
    cfg.write_text("grid = many\n", encoding="utf-8")
    code, _, err = _run(capsys, ["baseline", "--config", str(cfg)])
    assert code == 2
    cfg.write_text("grid\n", encoding="utf-8")
    assert _run(capsys, ["baseline", "--config", str(cfg)])[0] == 2


def test_config_missing_file_and_coarse_grid(tmp_path, capsys):
    code, _, err = _run(capsys, ["baseline", "--config", str(tmp_path / "nope.cfg")])
    assert code == 2
    cfg = tmp_path / "coarse.cfg"
    cfg.write_text("grid = 10\n", encoding="utf-8")
    code, _, err = _run(capsys, ["baseline", "--config", str(cfg)])
    assert code == 2
    assert "grid" in err


# -------------------------------------------------------------- exit codes


def test_unknown_subcommand_and_missing_args_exit_2(capsys):
    assert _run(capsys, ["frobnicate"])[0] == 2
    assert _run(capsys, [])[0] == 2
    assert _run(capsys, ["sweep", "--pairs", "16"])[0] == 2  # missing range


def test_help_exits_0(capsys):
    code, out, _ = _run(capsys, ["--help"])
    assert code == 0
    assert "baseline" in out


def test_contract_violation_exits_1(capsys, monkeypatch):
    def boom(grid, tol):
        raise ContractError("synthetic failure")

    monkeypatch.setattr("qbroadcast.cli.buzek_baseline", boom)
    code, _, err = _run(capsys, ["baseline"])
    assert code == 1
    assert "synthetic failure" in err


# -------------------------------------------------------------------- swap


def test_swap_derived_output(capsys):
    code, out, _ = _run(capsys, ["swap", "--alpha2", "0.8"])
    assert code == 0
    payload = json.loads(out)
    assert payload["corrections"] == "derived"
    assert [o["label"] for o in payload["outcomes"]] == ["B1+", "B1-", "B2+", "B2-"]
    for o in payload["outcomes"]:
        assert o["probability"] == pytest.approx(0.25, abs=1e-9)
        assert o["fidelity"] >= 1.0 - 1e-9
    words = {o["label"]: o["word"] for o in payload["outcomes"]}
    assert words == {"B1+": "iiy", "B1-": "iix", "B2+": "iiz", "B2-": "iii"}


def test_swap_published_output(capsys):
    code, out, _ = _run(capsys, ["swap", "--alpha2", "0.8", "--corrections", "paper"])
    assert code == 0
    payload = json.loads(out)
    assert payload["corrections"] == "published"
    by_label = {o["label"]: o for o in payload["outcomes"]}
    assert "word" not in by_label["B1+"]
    assert by_label["B1+"]["fidelity"] == pytest.approx(0.943670, abs=1e-5)
    for label in ("B1-", "B2+", "B2-"):
        assert by_label[label]["fidelity"] >= 1.0 - 1e-9


def test_swap_rejects_bad_alpha2(capsys):
    assert _run(capsys, ["swap", "--alpha2", "1.5"])[0] == 2


# ---------------------------------------------------------------------- gv


def test_gv_statistics_and_determinism(capsys):
    argv = ["gv", "--bits", "2000", "--eve", "intercept", "--seed", "0"]
    code, first, _ = _run(capsys, argv)
    assert code == 0
    _, second, _ = _run(capsys, argv)
    assert first == second
    payload = json.loads(first)
    assert payload["strategy"] == "intercept_resend"
    assert payload["bits_sent"] == 2000
    assert payload["eve_detected"] is True
    rate = payload["detection_events"] / payload["bits_sent"]
    assert abs(rate - payload["analytic_detection_rate"]) < 3.0 * np.sqrt(0.625 * 0.375 / 2000)


def test_gv_quiet_channel(capsys):
    code, out, _ = _run(capsys, ["gv", "--bits", "100"])
    assert code == 0
    payload = json.loads(out)
    assert payload["strategy"] == "none"
    assert payload["bit_errors"] == 0
    assert payload["eve_detected"] is False


def test_gv_rejects_bad_counts(capsys):
    assert _run(capsys, ["gv", "--bits", "0"])[0] == 2
    assert _run(capsys, ["gv", "--bits", "10", "--delay", "0"])[0] == 2
    assert _run(capsys, ["gv", "--bits", "10", "--trials", "0"])[0] == 2


# ------------------------------------------------------------------ report


def test_report_runs_and_shows_comparisons(capsys):
    code, out, _ = _run(capsys, ["report", "--grid", "60", "--tol", "1e-3"])
    assert code == 0
    assert "baseline inseparability interval" in out
    assert "rho16 entangled above" in out
    assert "rho46 entangled above" in out
    assert "broadcast interval, branch Q0Q0" in out
    assert "concurrence(rho16) over computed interval" in out
    assert "eof(rho46) over computed interval" in out
    assert "derived-correction fidelities" in out
    assert "published-correction fidelities" in out
    assert "channel per-bit detection rate" in out
    # every line carries both the computed and the published column
    for line in out.splitlines():
        if line.startswith(("baseline", "rho", "broadcast")):
            assert "computed" in line and "published" in line
