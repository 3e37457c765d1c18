"""Command-line frontend.

Subcommands: ``filter`` (arc-length filtering of one demo), ``optimize-delta``
(spacing search), ``evaluate`` (group pipelines, sweeps and quality tables),
``benchmark`` (runtime scaling) and ``rpc`` (the machine interface used by
language bindings).  Data goes to files under ``--out``; stdout carries only
short human-readable summaries.

Exit codes: 0 success, 2 usage/argument errors, 3 data/parse errors,
4 numeric/degenerate failures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .dataio import load_dataset, read_demo_csv
from .errors import (
    DegeneratePathError,
    InfeasibleBandError,
    InvalidArgumentError,
    ParseError,
    UndefinedMetricError,
)
from .harness import (
    PipelineConfig,
    benchmark_runtimes,
    evaluate_group,
    gmm_sweep,
    process_demos,
    reference_sensitivity,
)
from .metrics import MetricReport
from .spatial import optimize_delta, spatial_sample

_FLOAT_FMT = "{:.17g}"


def _fmt(value: float) -> str:
    return _FLOAT_FMT.format(value)


def _cmd_filter(args) -> int:
    traj = read_demo_csv(args.input)
    path = spatial_sample(traj, args.delta, keep_endpoint=args.keep_endpoint)
    header = ",".join(["s", "t"] + [f"x{j}" for j in range(path.dimension)])
    with open(args.out, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for s, t, row in zip(path.s, path.t, path.points):
            fh.write(",".join([_fmt(s), _fmt(t)] + [_fmt(v) for v in row]) + "\n")
    print(f"filtered {traj.n_samples} samples -> {path.n_samples} at delta={args.delta}")
    return 0


def _cmd_optimize_delta(args) -> int:
    if args.dh_tol >= args.dh_star:
        raise InvalidArgumentError("--dh-tol must be smaller than --dh-star")
    traj = read_demo_csv(args.input)
    report = optimize_delta(traj, args.dh_star, args.dh_tol, args.delta1)
    with open(args.out, "w", newline="\n") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    if args.plots:
        from . import plots

        plots.save_delta_search(report, _sibling(args.out, "delta_search.svg"))
    if report.feasible:
        print(f"delta*={report.chosen:.6g} with d_H={report.achieved:.6g} (target {args.dh_star})")
    else:
        print(f"infeasible: d_H({args.delta1}) already exceeds {args.dh_star}")
    return 0


def _sibling(path: str, name: str) -> str:
    return os.path.join(os.path.dirname(os.path.abspath(path)), name)


def _write_rows(path: str, header: str, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _cmd_evaluate(args) -> int:
    workers = int(os.environ.get("TRAJKIT_THREADS", "1"))
    dset = load_dataset(args.manifest, workers=workers)
    cfg = PipelineConfig(
        domain=args.domain,
        aligner=args.aligner,
        barycenter_method=args.method,
        delta=args.delta if args.domain == "arclength" else None,
        g=args.G,
        reference=args.reference,
        resample_length=args.resample,
        seed=args.seed,
    )
    os.makedirs(args.out, exist_ok=True)
    report, result = evaluate_group(dset, cfg)
    _write_rows(
        os.path.join(args.out, "metrics.csv"), MetricReport.csv_header(), [report.to_csv_row()]
    )
    u, seqs = process_demos(dset, cfg)
    bary_header = ",".join(["u"] + [f"x{j}" for j in range(result.curve.shape[1])])
    _write_rows(
        os.path.join(args.out, "barycenter.csv"),
        bary_header,
        [
            ",".join([_fmt(ui)] + [_fmt(v) for v in row])
            for ui, row in zip(u, result.curve)
        ],
    )
    ground_truth = None
    if args.ground_truth:
        gt_traj = read_demo_csv(args.ground_truth)
        ground_truth = gt_traj.points
        from .metrics import hausdorff
        from .dtw import dtw

        d_h = hausdorff(result.curve, ground_truth)
        d_dtw = dtw(result.curve, ground_truth, compute_path=False).distance
        _write_rows(
            os.path.join(args.out, "quality.csv"),
            "group,domain,method,d_h,d_dtw",
            [f"{dset.name},{cfg.domain},{cfg.barycenter_method},{_fmt(d_h)},{_fmt(d_dtw)}"],
        )
    if args.sweep_reference:
        if ground_truth is None:
            raise InvalidArgumentError("--sweep-reference requires --ground-truth")
        rows = reference_sensitivity(dset, cfg, ground_truth)
        _write_rows(
            os.path.join(args.out, "reference_sensitivity.csv"),
            "reference,d_h,d_dtw",
            [f"{r.reference},{_fmt(r.d_h)},{_fmt(r.d_dtw)}" for r in rows],
        )
        if args.plots:
            from . import plots

            plots.save_reference_sensitivity(
                rows, os.path.join(args.out, "reference_sensitivity.svg")
            )
    if args.sweep_g:
        if ground_truth is None:
            raise InvalidArgumentError("--sweep-g requires --ground-truth")
        g_values = [int(v) for v in args.sweep_g.split(",") if v]
        rows = gmm_sweep(dset, cfg, g_values, ground_truth)
        _write_rows(
            os.path.join(args.out, "gmm_sweep.csv"),
            "g,d_h,d_dtw,feasible",
            [f"{r.g},{_fmt(r.d_h)},{_fmt(r.d_dtw)},{int(r.feasible)}" for r in rows],
        )
        if args.plots:
            from . import plots

            plots.save_gmm_sweep(rows, os.path.join(args.out, "gmm_sweep.svg"))
    if args.plots:
        from . import plots

        plots.save_group_overlay(
            u,
            seqs,
            result.curve,
            os.path.join(args.out, "group_overlay.svg"),
            title=f"{dset.name} [{cfg.domain}/{cfg.barycenter_method}]",
        )
    print(
        f"group={dset.name} domain={cfg.domain} method={cfg.barycenter_method} "
        f"rho={report.rho:.4f} H={report.entropy:.4f} snCSD={report.sncsd:.4f} l2={report.l2:.4f}"
    )
    return 0


def _cmd_benchmark(args) -> int:
    try:
        sizes = [int(v) for v in args.sizes.split(",") if v]
    except ValueError:
        raise InvalidArgumentError(f"--sizes must be a comma-separated integer list, got {args.sizes!r}")
    rows = benchmark_runtimes(sizes, repeats=args.repeats)
    _write_rows(
        args.out,
        "algorithm,complexity,size,median_s,iqr_s",
        [
            f"{r.algorithm},{r.complexity},{r.size},{_fmt(r.median_s)},{_fmt(r.spread_s)}"
            for r in rows
        ],
    )
    if args.plots:
        from . import plots

        plots.save_runtime_scaling(rows, _sibling(args.out, "benchmark.svg"))
    print(f"benchmarked {len(sizes)} sizes x 5 algorithms ({args.repeats} repeats)")
    return 0


def _cmd_rpc(args) -> int:
    from . import rpc

    return rpc.serve()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trajkit", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_filter = sub.add_parser("filter", help="arc-length filter a demo CSV")
    p_filter.add_argument("--in", dest="input", required=True, help="demo CSV (t,x0,...)")
    p_filter.add_argument("--delta", type=float, required=True, help="spatial period")
    p_filter.add_argument("--keep-endpoint", action="store_true", help="append the recorded endpoint")
    p_filter.add_argument("--out", required=True, help="output CSV (s,t,x0,...)")
    p_filter.set_defaults(func=_cmd_filter)

    p_opt = sub.add_parser("optimize-delta", help="search the largest spacing meeting a d_H target")
    p_opt.add_argument("--in", dest="input", required=True)
    p_opt.add_argument("--dh-star", type=float, default=0.004, help="max admissible d_H")
    p_opt.add_argument("--dh-tol", type=float, default=1e-4, help="accepted gap below the target")
    p_opt.add_argument("--delta1", type=float, default=1e-3, help="initial spacing of the progression")
    p_opt.add_argument("--out", default="delta_report.json")
    p_opt.add_argument("--plots", action="store_true")
    p_opt.set_defaults(func=_cmd_optimize_delta)

    p_eval = sub.add_parser("evaluate", help="run a pipeline over a demonstration group")
    p_eval.add_argument("--manifest", required=True)
    p_eval.add_argument("--domain", choices=("time", "arclength"), required=True)
    p_eval.add_argument("--aligner", choices=("none", "dtw-to-reference"), default="none")
    p_eval.add_argument("--method", choices=("euc", "dba", "sdtw", "gmr"), required=True)
    p_eval.add_argument("--delta", type=float, default=0.005, help="spacing (arclength domain)")
    p_eval.add_argument("--G", type=int, default=5, help="mixture components (gmr)")
    p_eval.add_argument("--reference", type=int, default=0)
    p_eval.add_argument("--resample", type=int, default=200, help="common resample length")
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--ground-truth", default=None, help="ground-truth CSV for quality metrics")
    p_eval.add_argument("--sweep-g", default=None, help="comma-separated G values")
    p_eval.add_argument("--sweep-reference", action="store_true")
    p_eval.add_argument("--plots", action="store_true")
    p_eval.add_argument("--out", default="results")
    p_eval.set_defaults(func=_cmd_evaluate)

    p_bench = sub.add_parser("benchmark", help="runtime scaling of the alignment algorithms")
    p_bench.add_argument("--sizes", default="256,512,1024", help="comma-separated signal sizes")
    p_bench.add_argument("--repeats", type=int, default=20)
    p_bench.add_argument("--plots", action="store_true")
    p_bench.add_argument("--out", default="benchmark.csv")
    p_bench.set_defaults(func=_cmd_benchmark)

    p_rpc = sub.add_parser("rpc", help="serve the NDJSON binding interface on stdio")
    p_rpc.set_defaults(func=_cmd_rpc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DegeneratePathError, UndefinedMetricError, InfeasibleBandError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
