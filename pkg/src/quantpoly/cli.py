"""Command-line interface: ``quantpoly {fit,benchmark,gridscan,sample}``.

Data products go to files (or stdout when no path is given); diagnostics go
to stderr. Exit status is 0 iff every requested artifact was written.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from . import io
from ._validation import check_sample
from .baselines import KdeModel
from .exceptions import DegreesOfFreedomError, QuantpolyError
from .gof import gof_from_values, ks_from_values, ks_statistic, model_cdf_values
from .report import FitReport
from .sampling import BENCHMARKS, DistributionSpec, draw_sample, true_cdf, true_pdf
from .selection import GridConfig, fit_piecewise, grid_search

log = logging.getLogger("quantpoly")

DEFAULTS = {
    "input": None,
    "dist": None,
    "basis": "both",
    "nb_list": "1-19",
    "nm_list": "3-11",
    "feasibility_tol": 1e-3,
    "prefer_strict": False,
    "bandwidth": 0.05,
    "n": 50000,
    "seed": 0,
    "grid_points": 1000,
    "global_nm": 11,
    "n_jobs": 1,
    "no_kde": False,
    "out_report": None,
    "out_model": None,
    "out_curve": None,
    "out_table": None,
    "out_ks": None,
    "out_gof": None,
    "output": None,
}

METHODS = ("standard_monomial", "standard_lagrange", "piecewise_monomial",
           "piecewise_lagrange", "kde")


def parse_int_list(value):
    """``"1-19"``, ``"3,5,7"``, ``"1-3,8"`` or a list of ints."""
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    out = []
    for part in str(value).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def parse_dist(value):
    if isinstance(value, dict):
        return value.get("name", "custom"), DistributionSpec.from_dict(value)
    if value in BENCHMARKS:
        return value, BENCHMARKS[value]
    text = value.strip()
    if text.startswith("{"):
        return "custom", DistributionSpec.from_json(text)
    if os.path.exists(value):
        with open(value) as fh:
            return os.path.basename(value), DistributionSpec.from_json(fh.read())
    raise QuantpolyError(
        f"--dist must be one of {sorted(BENCHMARKS)}, a JSON spec or a spec file; got {value!r}")


def _add_common(p, data=True, grid=True, outputs=()):
    p.add_argument("--config", help="JSON file whose keys mirror the flags")
    if data:
        p.add_argument("--input", help="CSV file, one value per line")
        p.add_argument("--dist", help="benchmark name, inline JSON spec, or spec file")
        p.add_argument("--n", type=int, help="sample size for --dist (default 50000)")
        p.add_argument("--seed", type=int, help="random seed (default 0)")
    if grid:
        p.add_argument("--basis", choices=("monomial", "lagrange", "both"))
        p.add_argument("--nb-list", help="bin counts, e.g. 1-19")
        p.add_argument("--nm-list", help="moment counts, e.g. 3-11")
        p.add_argument("--feasibility-tol", type=float,
                       help="allowed negativity relative to peak density (default 1e-3)")
        p.add_argument("--prefer-strict", action="store_true", default=None,
                       help="rank exactly non-negative fits ahead of nearly non-negative ones")
        p.add_argument("--n-jobs", type=int, help="threads for the grid scan")
    for name in outputs:
        p.add_argument("--" + name.replace("_", "-"))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quantpoly",
        description="Piecewise moment-matched polynomial density estimation.")
    parser.add_argument("-q", "--quiet", action="store_true", help="only log warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="grid-search fit of a sample")
    _add_common(p, outputs=("out_report", "out_model", "out_curve"))
    p.add_argument("--bandwidth", type=float, help="KDE baseline bandwidth (default 0.05)")
    p.add_argument("--no-kde", action="store_true", default=None, help="skip the KDE baseline")
    p.add_argument("--grid-points", type=int, help="curve resolution (default 1000)")

    p = sub.add_parser("benchmark", help="compare all methods on a known distribution")
    _add_common(p, outputs=("out_report", "out_table", "out_curve"))
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--no-kde", action="store_true", default=None)
    p.add_argument("--grid-points", type=int)
    p.add_argument("--global-nm", type=int,
                   help="moments of the single-bin standard fits (default 11)")

    p = sub.add_parser("gridscan", help="K-S and GoF matrices over the grid")
    _add_common(p, outputs=("out_ks", "out_gof", "out_report"))

    p = sub.add_parser("sample", help="draw a sample from a distribution")
    _add_common(p, grid=False, outputs=("output",))
    return parser


def resolve(args):
    """Defaults, then the config file, then explicit flags."""
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
        opts.update({k.replace("-", "_"): v for k, v in cfg.items()})
    opts.update({k: v for k, v in vars(args).items() if v is not None and k != "config"})
    return opts


def _bases(opts):
    return ("monomial", "lagrange") if opts["basis"] == "both" else (opts["basis"],)


def _grid_config(opts, basis):
    return GridConfig(
        nb_list=tuple(parse_int_list(opts["nb_list"])),
        nm_list=tuple(parse_int_list(opts["nm_list"])),
        feasibility_tolerance_factor=float(opts["feasibility_tol"]),
        basis=basis,
        n_jobs=int(opts["n_jobs"]),
        prefer_strict=bool(opts["prefer_strict"]),
    )


def load_sample(opts):
    """Sample and input descriptor from ``--input`` or ``--dist``."""
    if opts["input"]:
        sample = io.read_sample_csv(opts["input"])
        descriptor = {"kind": "file", "path": opts["input"], "n": int(sample.size)}
    elif opts["dist"] is not None:
        name, spec = parse_dist(opts["dist"])
        sample = draw_sample(spec, int(opts["n"]), int(opts["seed"]))
        descriptor = {"kind": "distribution", "name": name, "spec": spec.to_dict(),
                      "n": int(opts["n"]), "seed": int(opts["seed"])}
    else:
        raise QuantpolyError("one of --input or --dist is required")
    if sample.size == 0:
        raise QuantpolyError("input contains no data")
    return check_sample(sample), descriptor


def _suffixed(path, basis, multi):
    if not multi:
        return path
    stem, ext = os.path.splitext(path)
    return f"{stem}_{basis}{ext}"


def summarize(result):
    cells = result.flat_cells()
    skipped = sorted({c.n_bins for c in cells if c.skipped})
    model = result.model
    return {
        "chosen": result.chosen.to_dict(),
        "n_cells": len(cells),
        "n_evaluated": sum(c.evaluated for c in cells),
        "n_feasible": sum(c.evaluated and c.feasible for c in cells),
        "n_strictly_feasible": sum(c.evaluated and c.strict for c in cells),
        "n_solver_failed": sum(c.solver_failed for c in cells),
        "skipped_n_bins": skipped,
        "model": {
            "n_bins": model.n_bins,
            "n_moments": model.n_moments,
            "support": list(model.support),
            "total_mass": model.total_mass,
        },
    }


def _ks_and_gof(sample, cdf, nb, nm):
    """K-S and GoF (``None`` when undefined) from a single CDF evaluation."""
    f = model_cdf_values(sample, cdf)
    try:
        gof = gof_from_values(sample, f, nb, nm)
    except DegreesOfFreedomError:
        gof = None
    return ks_from_values(f), gof


def _write_or_print(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_fit(opts):
    sample, descriptor = load_sample(opts)
    bases = _bases(opts)
    report = FitReport("fit", descriptor, {}, timing={})
    models = {}
    for basis in bases:
        config = _grid_config(opts, basis)
        report.config[basis] = config.to_dict()
        t0 = time.perf_counter()
        result = grid_search(sample, config, assume_sorted=True)
        report.timing[basis] = time.perf_counter() - t0
        report.results[basis] = summarize(result)
        models[basis] = result.model
        c = result.chosen
        log.info("%s: N_B=%d N_M=%d K-S=%.3e (%.1fs)", basis, c.n_bins, c.n_moments,
                 c.ks, report.timing[basis])
    if not opts["no_kde"]:
        t0 = time.perf_counter()
        kde = KdeModel(sample, opts["bandwidth"])
        report.baselines["kde"] = {"bandwidth": kde.bandwidth,
                                   "ks": ks_statistic(sample, kde.cdf)}
        report.timing["kde"] = time.perf_counter() - t0
    _write_or_print(report.to_json(), opts["out_report"])
    if opts["out_model"]:
        io.dump_json({"format_version": "1",
                      "models": {b: m.to_dict() for b, m in models.items()}},
                     opts["out_model"])
    if opts["out_curve"]:
        x = np.linspace(sample[0], sample[-1], int(opts["grid_points"]))
        if len(models) == 1:
            (m,) = models.values()
            io.write_curve_csv(opts["out_curve"], x, m.pdf(x), m.cdf(x))
        else:
            cols = {"x": x}
            for b, m in models.items():
                cols[f"{b}_pdf"] = m.pdf(x)
                cols[f"{b}_cdf"] = m.cdf(x)
            io.write_columns_csv(opts["out_curve"], cols)
    return report


def improvement(baseline_ks, method_ks):
    """Percentage reduction of K-S relative to a baseline."""
    return 100.0 * (baseline_ks - method_ks) / baseline_ks


def run_benchmark(opts):
    """All methods on one sample; returns ``(report, table_rows, curves)``."""
    sample, descriptor = load_sample(opts)
    gnm = int(opts["global_nm"])
    rows = {}
    models = {}
    config = {}
    for basis in ("monomial", "lagrange"):
        t0 = time.perf_counter()
        m = fit_piecewise(sample, 1, gnm, basis, assume_sorted=True)
        models[f"standard_{basis}"] = m
        ks, gof = _ks_and_gof(sample, m.cdf, 1, gnm)
        rows[f"standard_{basis}"] = {"n_bins": 1, "n_moments": gnm, "ks": ks, "gof": gof}
        cfg = _grid_config(opts, basis)
        config[basis] = cfg.to_dict()
        result = grid_search(sample, cfg, assume_sorted=True)
        c = result.chosen
        models[f"piecewise_{basis}"] = result.model
        rows[f"piecewise_{basis}"] = {
            "n_bins": c.n_bins, "n_moments": c.n_moments, "ks": c.ks,
            "gof": c.gof, "feasible": c.feasible,
        }
        log.info("%s done in %.1fs", basis, time.perf_counter() - t0)
    if not opts["no_kde"]:
        t0 = time.perf_counter()
        kde = KdeModel(sample, opts["bandwidth"])
        models["kde"] = kde
        ks, gof = _ks_and_gof(sample, kde.cdf, 1, 1)
        rows["kde"] = {"bandwidth": kde.bandwidth, "ks": ks, "gof": gof}
        log.info("kde done in %.1fs", time.perf_counter() - t0)

    comparison = {"methods": rows, "improvement_pct": {}}
    for method in ("piecewise_monomial", "piecewise_lagrange"):
        comparison["improvement_pct"][method] = {
            other: improvement(rows[other]["ks"], rows[method]["ks"])
            for other in rows if other != method
        }
    baselines = {}
    if descriptor["kind"] == "distribution":
        spec = DistributionSpec.from_dict(descriptor["spec"])
        baselines["true_distribution_ks"] = ks_statistic(sample, lambda x: true_cdf(spec, x))
    report = FitReport("benchmark", descriptor, {"grid": config, "global_n_moments": gnm,
                                                 "bandwidth": opts["bandwidth"]},
                       results={m: r for m, r in rows.items()},
                       baselines=baselines, comparison=comparison)

    curves = None
    if opts["out_curve"]:
        x = np.linspace(sample[0], sample[-1], int(opts["grid_points"]))
        curves = {"x": x}
        if descriptor["kind"] == "distribution":
            curves["true_pdf"] = true_pdf(spec, x)
            curves["true_cdf"] = true_cdf(spec, x)
        for name, m in models.items():
            curves[f"{name}_pdf"] = m.pdf(x)
            curves[f"{name}_cdf"] = m.cdf(x)
    return report, comparison, curves


def comparison_csv(comparison):
    rows = comparison["methods"]
    imp = comparison["improvement_pct"]
    header = ["method", "n_bins", "n_moments", "ks", "gof",
              "piecewise_monomial_improvement_pct", "piecewise_lagrange_improvement_pct"]
    lines = [",".join(header)]
    for method in METHODS:
        if method not in rows:
            continue
        r = rows[method]
        vals = [method, r.get("n_bins", ""), r.get("n_moments", ""),
                io._fmt(r["ks"]), "" if r.get("gof") is None else io._fmt(r["gof"])]
        for pw in ("piecewise_monomial", "piecewise_lagrange"):
            v = imp[pw].get(method)
            # "+ 0.0" folds a rounded -0.00 into 0.00
            vals.append("" if v is None else f"{round(v, 2) + 0.0:.2f}")
        lines.append(",".join(str(v) for v in vals))
    return "\n".join(lines) + "\n"


def cmd_benchmark(opts):
    if opts["dist"] is None:
        raise QuantpolyError("benchmark requires --dist")
    opts = dict(opts, input=None)
    report, comparison, curves = run_benchmark(opts)
    _write_or_print(comparison_csv(comparison), opts["out_table"])
    if opts["out_report"]:
        with open(opts["out_report"], "w") as fh:
            fh.write(report.to_json())
    if curves is not None:
        io.write_columns_csv(opts["out_curve"], curves)
    return report


def cmd_gridscan(opts):
    sample, descriptor = load_sample(opts)
    bases = _bases(opts)
    multi = len(bases) > 1
    report = FitReport("gridscan", descriptor, {})
    results = {}
    for basis in bases:
        config = _grid_config(opts, basis)
        report.config[basis] = config.to_dict()
        result = grid_search(sample, config, assume_sorted=True)
        results[basis] = result
        report.results[basis] = result.to_dict(include_cells=True)
        nb, nm = config.nb_list, config.nm_list
        if opts["out_ks"]:
            io.write_matrix_csv(_suffixed(opts["out_ks"], basis, multi), result.ks_matrix, nb, nm)
        if opts["out_gof"]:
            io.write_matrix_csv(_suffixed(opts["out_gof"], basis, multi), result.gof_matrix, nb, nm)
        c = result.chosen
        log.info("%s: chosen N_B=%d N_M=%d K-S=%.3e", basis, c.n_bins, c.n_moments, c.ks)
    if opts["out_report"]:
        with open(opts["out_report"], "w") as fh:
            fh.write(report.to_json())
    if not (opts["out_ks"] or opts["out_gof"] or opts["out_report"]):
        for basis, result in results.items():
            if multi:
                sys.stdout.write(f"# {basis}\n")
            sys.stdout.write(io.matrix_csv(result.ks_matrix, result.config.nb_list,
                                           result.config.nm_list))
    return report


def cmd_sample(opts):
    if opts["dist"] is None:
        raise QuantpolyError("sample requires --dist")
    name, spec = parse_dist(opts["dist"])
    sample = draw_sample(spec, int(opts["n"]), int(opts["seed"]))
    if opts["output"]:
        io.write_sample_csv(opts["output"], sample)
    else:
        sys.stdout.write("x\n" + "".join(io._fmt(v) + "\n" for v in sample))
    return sample


COMMANDS = {"fit": cmd_fit, "benchmark": cmd_benchmark,
            "gridscan": cmd_gridscan, "sample": cmd_sample}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    command = args.command
    opts = resolve(args)
    try:
        COMMANDS[command](opts)
    except (QuantpolyError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
