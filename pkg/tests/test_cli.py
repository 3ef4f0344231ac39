import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from quantpoly import cli, io
from quantpoly.report import FitReport
from quantpoly.sampling import BENCHMARKS, draw_sample
from quantpoly.selection import GridConfig, sensitivity_matrices

SMALL_GRID = ["--nb-list", "1-4", "--nm-list", "3-5"]


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_parse_int_list():
    assert cli.parse_int_list("1-4") == [1, 2, 3, 4]
    assert cli.parse_int_list("3,5, 7") == [3, 5, 7]
    assert cli.parse_int_list("1-3,8") == [1, 2, 3, 8]
    assert cli.parse_int_list([2, 4]) == [2, 4]


def test_sample_then_fit(tmp_path):
    data = tmp_path / "x.csv"
    assert cli.main(["-q", "sample", "--dist", "normal", "--n", "2000", "--seed", "3",
                     "--output", str(data)]) == 0
    rows = _rows(data)
    assert rows[0] == ["x"] and len(rows) == 2001
    x = np.array([float(r[0]) for r in rows[1:]])
    np.testing.assert_array_equal(x, draw_sample(BENCHMARKS["normal"], 2000, 3))
    # moment oracle: mean and variance within Monte Carlo error
    assert abs(x.mean() - 1.0) < 4 * 0.16 / np.sqrt(2000)
    assert abs(x.var() / 0.16 ** 2 - 1) < 4 * np.sqrt(2 / 2000)

    report, model, curve = (tmp_path / n for n in ("r.json", "m.json", "c.csv"))
    assert cli.main(["-q", "fit", "--input", str(data), "--basis", "monomial", *SMALL_GRID,
                     "--out-report", str(report), "--out-model", str(model),
                     "--out-curve", str(curve), "--grid-points", "50"]) == 0
    rep = FitReport.from_json(report.read_text())
    assert rep.format_version == "1" and rep.input["n"] == 2000
    assert FitReport.from_json(rep.to_json()).to_dict() == rep.to_dict()
    chosen = rep.results["monomial"]["chosen"]
    assert chosen["ks"] < 0.05
    assert "kde" in rep.baselines
    rows = _rows(curve)
    assert rows[0] == ["x", "pdf", "cdf"] and len(rows) == 51
    assert float(rows[1][0]) == x.min() and float(rows[-1][0]) == x.max()
    models = json.loads(model.read_text())
    assert models["format_version"] == "1" and set(models["models"]) == {"monomial"}


def test_fit_both_bases_curve_columns(tmp_path):
    curve = tmp_path / "c.csv"
    assert cli.main(["-q", "fit", "--dist", "weibull", "--n", "1000", *SMALL_GRID, "--no-kde",
                     "--out-report", str(tmp_path / "r.json"),
                     "--out-curve", str(curve), "--grid-points", "10"]) == 0
    assert _rows(curve)[0] == ["x", "monomial_pdf", "monomial_cdf",
                               "lagrange_pdf", "lagrange_cdf"]


def test_global_fit_via_single_bin(tmp_path):
    r = tmp_path / "r.json"
    assert cli.main(["-q", "fit", "--dist", "normal", "--n", "1000", "--nb-list", "1",
                     "--nm-list", "11", "--no-kde", "--out-report", str(r)]) == 0
    t = tmp_path / "t.csv"
    assert cli.main(["-q", "benchmark", "--dist", "normal", "--n", "1000", "--nb-list", "1",
                     "--nm-list", "11", "--no-kde", "--out-table", str(t)]) == 0
    rep = json.loads(r.read_text())
    table = {row[0]: row for row in _rows(t)[1:]}
    for basis in ("monomial", "lagrange"):
        assert float(table[f"standard_{basis}"][3]) == rep["results"][basis]["chosen"]["ks"]


def test_three_point_file(tmp_path):
    data = tmp_path / "tiny.csv"
    data.write_text("0.1\n0.5\n0.7\n")
    r = tmp_path / "r.json"
    assert cli.main(["-q", "fit", "--input", str(data), "--basis", "monomial",
                     "--out-report", str(r), "--no-kde"]) == 0
    res = json.loads(r.read_text())["results"]["monomial"]
    assert res["skipped_n_bins"] == list(range(4, 20))
    assert res["chosen"]["n_bins"] <= 3
    # no cell at all is evaluable -> nonzero exit
    data.write_text("0.1\n")
    assert cli.main(["-q", "fit", "--input", str(data), "--nb-list", "2-3",
                     "--out-report", str(r), "--no-kde"]) == 1


def test_bad_csv_reports_row(tmp_path):
    data = tmp_path / "bad.csv"
    data.write_text("value\n1.0\n2.0\nabc\n")
    with pytest.raises(io.DataFormatError) as exc:
        io.read_sample_csv(data)
    assert (exc.value.row, exc.value.column) == (4, 1)
    # a real process, so the diagnostics land on stderr and stdout stays clean
    proc = subprocess.run([sys.executable, "-m", "quantpoly", "fit", "--input", str(data)],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert "row 4, column 1" in proc.stderr
    assert proc.stdout == ""


def test_missing_file(tmp_path):
    assert cli.main(["-q", "fit", "--input", str(tmp_path / "nope.csv")]) == 1


def test_header_autodetect(tmp_path):
    data = tmp_path / "h.csv"
    data.write_text("1.5,9\n2.5,9\n")
    np.testing.assert_array_equal(io.read_sample_csv(data), [1.5, 2.5])


def _benchmark(tmp_path, tag, *extra):
    table, report = tmp_path / f"t{tag}.csv", tmp_path / f"r{tag}.json"
    curve = tmp_path / f"c{tag}.csv"
    assert cli.main(["-q", "benchmark", "--dist", "weibull", "--n", "2000", "--seed", "5",
                     *SMALL_GRID, "--bandwidth", "0.05", "--out-table", str(table),
                     "--out-report", str(report), "--out-curve", str(curve),
                     "--grid-points", "25", *extra]) == 0
    return table, report, curve


def test_benchmark_is_byte_deterministic(tmp_path):
    first = _benchmark(tmp_path, "a")
    second = _benchmark(tmp_path, "b")
    for p, q in zip(first, second):
        assert p.read_bytes() == q.read_bytes()


def test_benchmark_improvements_recompute(tmp_path):
    table, report, curve = _benchmark(tmp_path, "a")
    rows = _rows(table)
    assert rows[0][:5] == ["method", "n_bins", "n_moments", "ks", "gof"]
    ks = {r[0]: float(r[3]) for r in rows[1:]}
    assert set(ks) == set(cli.METHODS)
    for r in rows[1:]:
        for col, method in ((5, "piecewise_monomial"), (6, "piecewise_lagrange")):
            if r[0] == method:
                assert r[col] == ""
                continue
            expected = 100 * (ks[r[0]] - ks[method]) / ks[r[0]]
            assert abs(float(r[col]) - expected) <= 0.01
    rep = json.loads(report.read_text())
    assert "timing" not in rep
    assert rep["baselines"]["true_distribution_ks"] > 0
    header = _rows(curve)[0]
    assert header[:3] == ["x", "true_pdf", "true_cdf"] and "kde_cdf" in header


def test_gridscan_matches_library(tmp_path):
    ks_path, gof_path = tmp_path / "ks.csv", tmp_path / "gof.csv"
    assert cli.main(["-q", "gridscan", "--dist", "bimodal-normal", "--n", "3000",
                     "--basis", "monomial", "--out-ks", str(ks_path),
                     "--out-gof", str(gof_path)]) == 0
    ks, nb, nm = io.read_matrix_csv(ks_path)
    assert ks.shape == (19, 9) and nb == list(range(1, 20)) and nm == list(range(3, 12))
    x = draw_sample(BENCHMARKS["bimodal-normal"], 3000, 0)
    ref_ks, ref_gof = sensitivity_matrices(x, GridConfig())
    np.testing.assert_array_equal(ks, ref_ks)
    np.testing.assert_array_equal(io.read_matrix_csv(gof_path)[0], ref_gof)


def test_gridscan_both_bases_suffixes(tmp_path):
    ks_path = tmp_path / "ks.csv"
    assert cli.main(["-q", "gridscan", "--dist", "normal", "--n", "500", *SMALL_GRID,
                     "--out-ks", str(ks_path)]) == 0
    assert (tmp_path / "ks_monomial.csv").exists() and (tmp_path / "ks_lagrange.csv").exists()


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"dist": "normal", "n": 700, "seed": 2, "basis": "monomial",
                               "nb-list": "1-2", "nm_list": "3", "no_kde": True}))
    r = tmp_path / "r.json"
    assert cli.main(["-q", "fit", "--config", str(cfg), "--n", "800",
                     "--out-report", str(r)]) == 0
    rep = json.loads(r.read_text())
    assert rep["input"]["n"] == 800 and rep["input"]["seed"] == 2
    assert list(rep["results"]) == ["monomial"]
    assert rep["config"]["monomial"]["nb_list"] == [1, 2]
    assert "kde" not in rep["baselines"]


def test_inline_distribution_spec(tmp_path):
    out = tmp_path / "s.csv"
    spec = BENCHMARKS["bimodal-normal"].to_json()
    assert cli.main(["-q", "sample", "--dist", spec, "--n", "10", "--output", str(out)]) == 0
    assert len(_rows(out)) == 11
    assert cli.main(["-q", "sample", "--dist", "no-such-thing", "--n", "10"]) == 1
