"""Command-line surface: JSON reports, CSV artifacts, cache replay, exit codes.

Commands run in-process through main(argv) so exit codes and streams are
asserted directly; grids and solver budgets are chosen so no call is slow.
"""

import json
import math

import numpy as np
import pytest

from isoqudit.cli import CSV_COLUMNS, main
from isoqudit.separability import derive_seed

# one solver call at most (the origin); everything else on this grid is
# unphysical or entangled by the mirror test
FAST_SCAN = ["--two-s", "2", "--grid", "4", "--max-outer", "200",
             "--inner-restarts", "4"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


# -- classify ---------------------------------------------------------------

def test_classify_apex(capsys):
    doc = run_json(capsys, "classify", "--alpha", "-1.5", "--beta", "3", "--cap", "8")
    assert doc["classification"] == "super_quantum"
    assert doc["sigma_two_s"] == 2
    assert doc["sigma_s"] == 1.0
    assert doc["state"]["rank"] == 1
    assert doc["state"]["relative_rank"] == pytest.approx(1 / 9)
    assert doc["q_positive"] is True
    assert [e["two_s"] for e in doc["per_spin"]] == list(range(2, 9))
    assert doc["per_spin"][0] == {"two_s": 2, "physical": True, "ppt": False}


def test_classify_origin(capsys):
    doc = run_json(capsys, "classify", "--alpha", "0", "--beta", "0", "--cap", "4")
    assert doc["classification"] == "interior_classical"
    assert doc["ppt_at_sigma"] is True
    assert doc["state"]["rank"] == 9
    assert doc["state"]["purity"] == pytest.approx(1 / 9)


def test_classify_lower_vertex(capsys):
    doc = run_json(capsys, "classify", "--alpha", "0", "--beta", "-6", "--cap", "4")
    assert doc["classification"] == "boundary_vw"
    assert doc["sigma_two_s"] is None
    assert doc["state"] is None


def test_classify_outside(capsys):
    doc = run_json(capsys, "classify", "--alpha", "5", "--beta", "5", "--cap", "4")
    assert doc["classification"] == "outside_svw"
    assert doc["q_positive"] is False
    assert all(e["physical"] is False for e in doc["per_spin"])


def test_classify_missing_flags(capsys):
    code, _, err = run_cli(capsys, "classify", "--alpha", "0")
    assert code == 2
    assert "--beta" in err


def test_classify_non_finite(capsys):
    code, _, err = run_cli(capsys, "classify", "--alpha", "nan", "--beta", "0")
    assert code == 2


# -- config file ------------------------------------------------------------

def test_config_file_supplies_and_flags_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nalpha = -1.5\nbeta = 3\ncap = 6\n")
    doc = run_json(capsys, "classify", "--config", str(cfg))
    assert doc["classification"] == "super_quantum"
    assert len(doc["per_spin"]) == 5  # cap from file
    # an explicit flag beats the file value
    doc = run_json(capsys, "classify", "--config", str(cfg), "--alpha", "0", "--beta", "0")
    assert doc["classification"] == "interior_classical"


def test_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("no_such_key = 1\n")
    code, _, err = run_cli(capsys, "classify", "--config", str(bad))
    assert code == 2 and "no_such_key" in err

    bad.write_text("alpha = not-a-number\n")
    code, _, err = run_cli(capsys, "classify", "--config", str(bad))
    assert code == 2 and "alpha" in err

    bad.write_text("alpha 0\n")
    code, _, err = run_cli(capsys, "classify", "--config", str(bad))
    assert code == 2 and "key=value" in err

    code, _, err = run_cli(capsys, "classify", "--config", str(tmp_path / "absent.cfg"))
    assert code == 2


# -- region -----------------------------------------------------------------

def test_region_spin_one(capsys):
    doc = run_json(capsys, "region", "--two-s", "2")
    assert doc["two_s"] == 2
    assert doc["area"] == pytest.approx(4.05)
    assert doc["area_fraction"] == pytest.approx(0.3)
    verts = np.array(doc["vertices"])
    assert verts == pytest.approx(np.array([[-1.5, 3.0], [-0.75, -1.5], [0.75, 0.3]]))


def test_region_limit(capsys):
    doc = run_json(capsys, "region", "--limit")
    assert doc["two_s"] is None
    assert doc["area"] == pytest.approx(13.5)
    assert doc["area_fraction"] == 1.0


def test_region_spin_eight_reports_reference(capsys):
    doc = run_json(capsys, "region", "--two-s", "16")
    assert doc["area_fraction"] == pytest.approx(408 / 513)
    assert doc["reference_area_fraction"] == 0.837


def test_region_flag_validation(capsys):
    assert run_cli(capsys, "region")[0] == 2
    assert run_cli(capsys, "region", "--two-s", "2", "--limit")[0] == 2
    assert run_cli(capsys, "region", "--two-s", "1")[0] == 2


# -- qfunc ------------------------------------------------------------------

def test_qfunc_uniform(capsys):
    code, out, _ = run_cli(capsys, "qfunc", "--alpha", "0", "--beta", "0",
                           "--samples", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("# isoqudit qfunc")
    assert "q_positive=true" in lines[0]
    assert lines[1] == "theta,f"
    assert len(lines) == 5
    for row in lines[2:]:
        _, f = row.split(",")
        assert float(f) == pytest.approx(1.0 / (4.0 * math.pi))


def test_qfunc_apex_starts_at_zero(capsys):
    code, out, _ = run_cli(capsys, "qfunc", "--alpha", "-1.5", "--beta", "3",
                           "--samples", "5")
    assert code == 0
    first = out.strip().splitlines()[2]
    theta, f = first.split(",")
    assert float(theta) == 0.0
    assert float(f) == pytest.approx(0.0, abs=1e-15)


def test_qfunc_negative_density_flagged(capsys):
    code, out, _ = run_cli(capsys, "qfunc", "--alpha", "3", "--beta", "0",
                           "--samples", "2")
    assert code == 0
    assert "q_positive=false" in out.splitlines()[0]


def test_qfunc_writes_file(tmp_path, capsys):
    target = tmp_path / "q.csv"
    code, out, _ = run_cli(capsys, "qfunc", "--alpha", "0", "--beta", "0",
                           "--samples", "4", "--out", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text().splitlines()[1] == "theta,f"


def test_qfunc_flag_validation(capsys, tmp_path):
    assert run_cli(capsys, "qfunc", "--alpha", "0", "--beta", "0",
                   "--samples", "1")[0] == 2
    assert run_cli(capsys, "qfunc", "--alpha", "0", "--samples", "4")[0] == 2
    code, _, err = run_cli(capsys, "qfunc", "--alpha", "0", "--beta", "0",
                           "--samples", "4", "--out",
                           str(tmp_path / "missing-dir" / "q.csv"))
    assert code == 3


# -- scan -------------------------------------------------------------------

def read_scan(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# isoqudit scan")
    assert lines[1].startswith("# alpha_range=")
    assert lines[2] == ",".join(CSV_COLUMNS)
    rows = [dict(zip(CSV_COLUMNS, line.split(","))) for line in lines[3:]]
    return lines, rows


def test_scan_csv_schema_and_content(tmp_path, capsys):
    out_file = tmp_path / "scan.csv"
    code, out, _ = run_cli(capsys, "scan", *FAST_SCAN, "--out", str(out_file))
    assert code == 0
    _, rows = read_scan(out_file)
    assert len(rows) == 16
    summary = json.loads(out)
    assert summary["summary"]["points"] == 16
    assert summary["summary"]["physical"] == 5
    assert summary["summary"]["separable"] == 1
    assert summary["summary"]["indeterminate"] == 0

    by_point = {(r["alpha"], r["beta"]): r for r in rows}
    origin = by_point[("0", "0")]
    assert origin["physical"] == "true" and origin["ppt"] == "true"
    assert origin["separable"] == "true"
    assert float(origin["d_hs"]) <= 1e-3
    assert origin["classification"] == "interior_classical"
    assert int(origin["seed"]) == derive_seed(0, 2, 0.0, 0.0)

    apex = by_point[("-1.5", "3")]
    assert apex["ppt"] == "false" and apex["separable"] == "false"
    assert apex["d_hs"] == ""  # mirror test decided it; no solver ran
    assert apex["classification"] == "super_quantum"

    dead = by_point[("0.75", "3")]
    assert dead["physical"] == "false"
    assert dead["ppt"] == "" and dead["separable"] == "" and dead["d_hs"] == ""


def test_scan_rerun_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(capsys, "scan", *FAST_SCAN, "--out", str(a))[0] == 0
    assert run_cli(capsys, "scan", *FAST_SCAN, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_scan_seed_changes_records_not_schema(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_cli(capsys, "scan", *FAST_SCAN, "--out", str(a))
    run_cli(capsys, "scan", *FAST_SCAN, "--seed", "9", "--out", str(b))
    rows_a = read_scan(a)[1]
    rows_b = read_scan(b)[1]
    assert [r["seed"] for r in rows_a] != [r["seed"] for r in rows_b]
    assert [r["physical"] for r in rows_a] == [r["physical"] for r in rows_b]


def test_scan_cache_replay(tmp_path, capsys):
    cache = tmp_path / "cache.jsonl"
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    code, out, _ = run_cli(capsys, "scan", *FAST_SCAN, "--out", str(a),
                           "--cache", str(cache))
    assert code == 0
    assert json.loads(out)["summary"]["cached_points"] == 0
    n_lines = len(cache.read_text().splitlines())
    assert n_lines == 16

    code, out, _ = run_cli(capsys, "scan", *FAST_SCAN, "--out", str(b),
                           "--cache", str(cache))
    assert code == 0
    assert json.loads(out)["summary"]["cached_points"] == 16
    assert a.read_bytes() == b.read_bytes()
    assert len(cache.read_text().splitlines()) == n_lines  # nothing re-appended

    # a different configuration does not reuse these records
    c = tmp_path / "c.csv"
    code, out, _ = run_cli(capsys, "scan", *FAST_SCAN, "--out", str(c),
                           "--cache", str(cache), "--threshold", "1e-4")
    assert code == 0
    assert json.loads(out)["summary"]["cached_points"] == 0


def test_scan_cache_env_var(tmp_path, capsys, monkeypatch):
    cache = tmp_path / "env-cache.jsonl"
    monkeypatch.setenv("ISOQUDIT_CACHE", str(cache))
    run_cli(capsys, "scan", *FAST_SCAN, "--out", str(tmp_path / "a.csv"))
    assert cache.exists()
    code, out, _ = run_cli(capsys, "scan", *FAST_SCAN, "--out", str(tmp_path / "b.csv"))
    assert json.loads(out)["summary"]["cached_points"] == 16


def test_scan_corrupt_cache(tmp_path, capsys):
    cache = tmp_path / "cache.jsonl"
    run_cli(capsys, "scan", *FAST_SCAN, "--out", str(tmp_path / "a.csv"),
            "--cache", str(cache))
    with cache.open("a") as fh:
        fh.write("{not json\n")
    code, _, err = run_cli(capsys, "scan", *FAST_SCAN,
                           "--out", str(tmp_path / "b.csv"), "--cache", str(cache))
    assert code == 4
    assert "line 17" in err


def test_scan_json_format(tmp_path, capsys):
    out_file = tmp_path / "scan.json"
    code, _, _ = run_cli(capsys, "scan", *FAST_SCAN, "--format", "json",
                         "--out", str(out_file))
    assert code == 0
    doc = json.loads(out_file.read_text())
    assert doc["meta"]["two_s"] == 2
    assert len(doc["records"]) == 16
    origin = [r for r in doc["records"] if r["alpha"] == 0.0 and r["beta"] == 0.0][0]
    assert origin["separable"] is True


def test_scan_flag_validation(tmp_path, capsys):
    assert run_cli(capsys, "scan", "--grid", "4", "--out", "x.csv")[0] == 2
    assert run_cli(capsys, "scan", "--two-s", "2", "--grid", "1",
                   "--out", "x.csv")[0] == 2
    code, _, _ = run_cli(capsys, "scan", *FAST_SCAN, "--out",
                         str(tmp_path / "no-dir" / "x.csv"))
    assert code == 3


def test_scan_ppt_mode_runs_no_solver(tmp_path, capsys):
    out_file = tmp_path / "ppt.csv"
    code, out, _ = run_cli(capsys, "scan", "--two-s", "2", "--grid", "5",
                           "--mode", "ppt", "--out", str(out_file))
    assert code == 0
    _, rows = read_scan(out_file)
    assert all(r["separable"] == "" and r["d_hs"] == "" for r in rows)
    physical = [r for r in rows if r["physical"] == "true"]
    assert physical and all(r["ppt"] in ("true", "false") for r in physical)


# -- separability -------------------------------------------------------------

def test_separability_export(tmp_path, capsys):
    doc = run_json(capsys, "separability", "--two-s", "2", "--alpha", "0",
                   "--beta", "0", "--inner-restarts", "4", "--max-outer", "100")
    assert doc["separable"] is True
    assert doc["ppt"] is True
    assert doc["d_hs"] <= 1e-3
    assert doc["seed"] == derive_seed(0, 2, 0.0, 0.0)
    assert doc["config"]["rng_seed"] == doc["seed"]
    w = np.array(doc["weights"])
    assert w.sum() == pytest.approx(1.0, abs=1e-9)
    fa = np.array(doc["factors_a"])  # (K, 3, 2) real/imag pairs
    fb = np.array(doc["factors_b"])
    assert fa.shape == (len(w), 3, 2) and fb.shape == (len(w), 3, 2)
    # reassemble the certificate from the export alone
    va = fa[..., 0] + 1j * fa[..., 1]
    vb = fb[..., 0] + 1j * fb[..., 1]
    prods = np.einsum("ki,kj->kij", va, vb).reshape(len(w), -1)
    sigma = np.einsum("k,ki,kj->ij", w, prods, prods.conj())
    rho = np.eye(9) / 9.0
    assert float(np.linalg.norm(rho - sigma)) == pytest.approx(doc["d_hs"], abs=1e-12)


def test_separability_npt_point(tmp_path, capsys):
    doc = run_json(capsys, "separability", "--two-s", "2", "--alpha", "-0.5",
                   "--beta", "-1", "--inner-restarts", "4", "--max-outer", "30")
    assert doc["ppt"] is False
    assert doc["separable"] is False
    assert doc["d_hs"] > 1e-3


def test_separability_rejects_unphysical(capsys):
    code, _, err = run_cli(capsys, "separability", "--two-s", "2",
                           "--alpha", "5", "--beta", "5")
    assert code == 2
    assert "not a physical state" in err


def test_separability_out_file(tmp_path, capsys):
    target = tmp_path / "cert.json"
    code, out, _ = run_cli(capsys, "separability", "--two-s", "2", "--alpha", "0",
                           "--beta", "0", "--inner-restarts", "4",
                           "--max-outer", "100", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["separable"] is True


# -- tables -------------------------------------------------------------------

def test_tables_budget_zero(capsys):
    doc = run_json(capsys, "tables", "--budget-seconds", "0")
    assert doc["incomplete"] is True
    assert all(row["complete"] is False for row in doc["ensemble_sizes"])
    assert [r["two_s"] for r in doc["ensemble_sizes"]] == [2, 4, 10, 16]
    bounds = doc["edge_relative_rank_bounds"]
    assert [r["two_s"] for r in bounds] == [2, 4, 6, 8, 10, 12, 14, 16]
    assert bounds[0]["lower"] == pytest.approx(1 / 9)
    assert bounds[0]["upper"] == pytest.approx(4 / 9)
    assert bounds[-1]["lower"] == pytest.approx(15 / 51)
    assert bounds[-1]["upper"] == pytest.approx(32 / 51)
    uni = doc["universal_relative_rank_bounds"]
    assert uni["lower"] == pytest.approx(1 / 9)
    assert uni["upper"] == pytest.approx(2 / 3)


# -- parser-level errors -------------------------------------------------------

def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_no_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
