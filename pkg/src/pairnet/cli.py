"""Command line entry point.

    pairnet run <scenario> [--seed S] [--rtol R] [--out-dir D] [--runs N]
    pairnet moments <scenario-or-spec> [--out-dir D]
    pairnet compare <a.csv> <b.csv>

Exit codes: 0 ok, 1 configuration error, 2 numerical failure.  The default
output directory can be set through the PAIRNET_OUT_DIR environment
variable.
"""

import argparse
import csv
import json
import os
import sys
from importlib import resources

from . import bench
from .integrator import IntegrationError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def bundled_scenario_path(name):
    """Path of a bundled scenario file (fig1, fig2, fig3, table1)."""
    ref = resources.files("pairnet.scenarios") / f"{name}.scenario"
    if not ref.is_file():
        raise FileNotFoundError(name)
    return str(ref)


def _resolve_scenario_arg(arg):
    if os.path.exists(arg):
        return arg
    try:
        return bundled_scenario_path(arg)
    except FileNotFoundError:
        raise bench.ScenarioError(f"no such scenario file or bundled name: {arg}")


def _cmd_run(args):
    path = _resolve_scenario_arg(args.scenario)
    reports, report_path = bench.run_scenario(
        path, out_dir=args.out_dir, seed=args.seed, rtol=args.rtol,
        runs=args.runs,
    )
    for rep in reports:
        label = rep["case"] or rep["scenario"]
        print(f"[{label}] tau={rep['tau']:.6g} files:")
        for model, fname in rep["files"].items():
            print(f"  {model}: {fname}")
        for cmp_entry in rep["comparisons"]:
            a, b = cmp_entry["models"]
            print(f"  sup|I_{a} - I_{b}| = {cmp_entry['sup_norm_I']:.6g}")
        if rep.get("max_abs_E") is not None:
            print(f"  max|E| = {rep['max_abs_E']:.6g}")
    print(f"report: {report_path}")
    return EXIT_OK


def _network_specs_from_file(path):
    """Accept a scenario file or a JSON list/dict of network specs."""
    with open(path) as fh:
        raw = json.load(fh)
    if isinstance(raw, dict) and "kind" in raw:
        return [("network", raw)]
    if isinstance(raw, list):
        return [(item.get("name", f"row{i}"), item["network"] if "network" in item
                 else item) for i, item in enumerate(raw)]
    scenario = bench.load_scenario(path)
    return [
        (case.name or scenario.name, case.network) for case in scenario.cases
    ]


def _cmd_moments(args):
    path = _resolve_scenario_arg(args.spec)
    rows = bench.moments_table(_network_specs_from_file(path))
    print(bench.format_moments_table(rows))
    out_dir = args.out_dir or bench.default_out_dir()
    os.makedirs(out_dir, exist_ok=True)
    out_path = os.path.join(out_dir, "moments.csv")
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "mean", "std", "n2", "n3"])
        for r in rows:
            writer.writerow([r["name"], repr(r["mean"]), repr(r["std"]),
                             repr(r["n2"]), repr(r["n3"])])
    print(f"table: {out_path}")
    return EXIT_OK


def _cmd_compare(args):
    a = bench.read_series_csv(args.a)
    b = bench.read_series_csv(args.b)
    result = bench.compare_series(a, b)
    print(f"models: {result['models'][0]} vs {result['models'][1]}")
    print(f"sup|I_a - I_b|      = {result['sup_norm_I']:.6g}")
    print(f"terminal |I_a - I_b| = {result['terminal_diff_I']:.6g}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pairnet",
        description="Pairwise SIS epidemic models on heterogeneous networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file")
    p_run.add_argument("scenario",
                       help="scenario file path or bundled name (fig1/fig2/fig3)")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--rtol", type=float, default=None)
    p_run.add_argument("--out-dir", default=None)
    p_run.add_argument("--runs", type=int, default=None)
    p_run.set_defaults(func=_cmd_run)

    p_mom = sub.add_parser("moments", help="moments table for network specs")
    p_mom.add_argument("spec",
                       help="scenario file, network-spec JSON, or bundled name")
    p_mom.add_argument("--out-dir", default=None)
    p_mom.set_defaults(func=_cmd_moments)

    p_cmp = sub.add_parser("compare", help="compare two series CSVs")
    p_cmp.add_argument("a")
    p_cmp.add_argument("b")
    p_cmp.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (bench.ScenarioError, FileNotFoundError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, RuntimeError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
