"""Scenario-driven experiment runner.

A scenario is a JSON file describing a network (or several cases), epidemic
parameters, the models to run and integration/simulation settings.  Running
one produces a CSV time series per model plus a comparison report; the
bundled scenarios reproduce the paper-style figure experiments and the
moments table.  CSV schema: ``t,S,I,SI,SS,II,source,model`` with an extra
``std_I`` column for simulation output.
"""

import csv
import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import closures, netgen_sim, ode_models
from .degree_model import (
    EpidemicParams,
    default_tau,
    distribution_from_config,
    moments,
)
from .integrator import IntegrationSpec, integrate, solve_to_plateau

__all__ = [
    "ScenarioError",
    "Scenario",
    "ScenarioCase",
    "load_scenario",
    "run_scenario",
    "moments_table",
    "format_moments_table",
    "read_series_csv",
    "write_series_csv",
    "compare_series",
    "default_out_dir",
]

OUT_DIR_ENV = "PAIRNET_OUT_DIR"
CSV_FIELDS = ["t", "S", "I", "SI", "SS", "II", "source", "model"]

KNOWN_MODELS = ode_models.MODELS + ("simulation",)


class ScenarioError(ValueError):
    """Scenario file failed validation; message names the offending field."""


@dataclass
class ScenarioCase:
    name: str
    network: dict


@dataclass
class Scenario:
    name: str
    cases: list
    N: int
    gamma: float
    i0: float
    models: list
    tau: float = None
    tau_multiple: float = None
    integration: dict = field(default_factory=dict)
    simulation: dict = field(default_factory=dict)

    def tau_for(self, dist):
        if self.tau is not None:
            return self.tau
        return default_tau(dist, self.gamma, self.tau_multiple)


def default_out_dir():
    return os.environ.get(OUT_DIR_ENV, "pairnet_out")


def load_scenario(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}")

    def need(key, typ=None):
        if key not in raw:
            raise ScenarioError(f"{path}: missing required field {key!r}")
        val = raw[key]
        if typ is not None and not isinstance(val, typ):
            raise ScenarioError(f"{path}: field {key!r} has wrong type")
        return val

    name = raw.get("name") or os.path.splitext(os.path.basename(path))[0]
    if "cases" in raw:
        cases = [
            ScenarioCase(name=c.get("name", f"case{i}"), network=c["network"])
            for i, c in enumerate(raw["cases"])
        ]
    elif "network" in raw:
        cases = [ScenarioCase(name="", network=raw["network"])]
    else:
        raise ScenarioError(f"{path}: need either 'network' or 'cases'")

    tau = raw.get("tau")
    tau_multiple = raw.get("tau_multiple")
    if (tau is None) == (tau_multiple is None):
        raise ScenarioError(
            f"{path}: exactly one of 'tau' and 'tau_multiple' must be given"
        )

    models = need("models", list)
    for m in models:
        if m not in KNOWN_MODELS:
            raise ScenarioError(f"{path}: unknown model {m!r} in 'models'")

    for case in cases:
        try:
            distribution_from_config(case.network)
        except (KeyError, ValueError) as exc:
            raise ScenarioError(f"{path}: bad network spec for case "
                                f"{case.name or name!r}: {exc}")

    scenario = Scenario(
        name=name,
        cases=cases,
        N=int(need("N")),
        gamma=float(need("gamma")),
        i0=float(raw.get("i0", 0.01)),
        models=models,
        tau=tau,
        tau_multiple=tau_multiple,
        integration=raw.get("integration", {}),
        simulation=raw.get("simulation", {}),
    )
    if not 0.0 < scenario.i0 < 1.0:
        raise ScenarioError(f"{path}: i0 must lie in (0, 1)")
    if scenario.gamma <= 0:
        raise ScenarioError(f"{path}: gamma must be positive")
    return scenario


def write_series_csv(path, times, columns, source, model, std_I=None):
    """columns maps S/I/SI/SS/II to arrays on the common grid."""
    fields = list(CSV_FIELDS) + (["std_I"] if std_I is not None else [])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for i, t in enumerate(times):
            row = [repr(float(t))]
            row += [repr(float(columns[k][i])) for k in ("S", "I", "SI", "SS", "II")]
            row += [source, model]
            if std_I is not None:
                row.append(repr(float(std_I[i])))
            writer.writerow(row)


def read_series_csv(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: empty series")
    out = {k: np.array([float(r[k]) for r in rows])
           for k in ("t", "S", "I", "SI", "SS", "II")}
    if "std_I" in rows[0]:
        out["std_I"] = np.array([float(r["std_I"]) for r in rows])
    out["source"] = rows[0]["source"]
    out["model"] = rows[0]["model"]
    return out


def compare_series(a, b):
    """Sup-norm and terminal difference of [I](t) on a shared grid."""
    if a["t"].size != b["t"].size or not np.allclose(a["t"], b["t"]):
        raise ValueError("series are not on a common time grid")
    diff = np.abs(a["I"] - b["I"])
    return {
        "models": (a["model"], b["model"]),
        "sup_norm_I": float(diff.max()),
        "terminal_diff_I": float(diff[-1]),
    }


def moments_table(network_specs):
    """Rows of (name, <k>, std) for a list of (name, network-config) pairs."""
    rows = []
    for name, cfg in network_specs:
        dist = distribution_from_config(cfg)
        m = moments(dist)
        rows.append({"name": name, "mean": m.n1, "std": m.std,
                     "n2": m.n2, "n3": m.n3})
    return rows


def format_moments_table(rows):
    lines = [f"{'Network':<20} {'<k>':>10} {'std':>10}"]
    for r in rows:
        lines.append(f"{r['name']:<20} {r['mean']:>10.4f} {r['std']:>10.4f}")
    return "\n".join(lines)


def _integration_settings(scenario):
    integ = scenario.integration
    horizon = integ.get("horizon_over_gamma", 15.0) / scenario.gamma
    points = int(integ.get("points", 201))
    rtol = float(integ.get("rtol", 1e-8))
    atol = float(integ.get("atol_per_node", 1e-10)) * scenario.N
    return horizon, points, rtol, atol


def run_case(scenario, case, out_dir, seed=None, rtol=None, runs=None):
    """Run all requested models for one network case; returns a report dict."""
    dist = distribution_from_config(case.network)
    tau = scenario.tau_for(dist)
    params = EpidemicParams(tau=tau, gamma=scenario.gamma, N=scenario.N)
    horizon, points, rtol_default, atol = _integration_settings(scenario)
    if rtol is None:
        rtol = rtol_default
    grid = np.linspace(0.0, horizon, points)
    prefix = scenario.name + (f"_{case.name}" if case.name else "")
    m = moments(dist)

    report = {
        "scenario": scenario.name,
        "case": case.name,
        "network": case.network,
        "moments": {"mean": m.n1, "std": m.std, "n2": m.n2, "n3": m.n3},
        "tau": tau,
        "gamma": scenario.gamma,
        "N": scenario.N,
        "files": {},
        "plateau_I": {},
        "comparisons": [],
    }

    series = {}
    compact_states = None
    for model in scenario.models:
        if model == "simulation":
            sim_cfg = scenario.simulation
            n_runs = runs if runs is not None else int(sim_cfg.get("runs", 200))
            sim_seed = seed if seed is not None else sim_cfg.get("seed", 0)
            result = netgen_sim.ensemble(
                dist, params, scenario.i0, horizon, grid, runs=n_runs,
                seed=sim_seed,
                fresh_graph_per_run=sim_cfg.get("fresh_graph_per_run", True),
                condition_on_survival=sim_cfg.get("condition_on_survival", False),
            )
            cols = {"S": result.S, "I": result.I, "SI": result.SI,
                    "SS": result.SS, "II": result.II}
            path = os.path.join(out_dir, f"{prefix}_simulation.csv")
            write_series_csv(path, grid, cols, "simulation", "simulation",
                             std_I=result.std_I)
            report["files"]["simulation"] = path
            report["plateau_I"]["simulation"] = float(np.mean(result.I[-20:]))
            report["simulation_runs"] = result.runs
            report["simulation_excluded"] = result.excluded
            series["simulation"] = dict(cols, t=grid, model="simulation")
            continue

        rhs = ode_models.make_rhs(model, dist, params)
        y0 = ode_models.initial_conditions(dist, params, scenario.i0, model)
        spec = IntegrationSpec(
            t0=0.0, t_end=horizon, output_times=grid,
            rtol=rtol, atol=atol, scale=float(scenario.N),
        )
        ts = integrate(rhs, y0, spec)
        if not ts.success:
            raise RuntimeError(
                f"integration of {model} failed for {prefix}: {ts.message}"
            )
        agg = np.array([
            ode_models.aggregate(model, y, dist, scenario.N) for y in ts.states
        ])
        cols = {k: agg[:, i] for i, k in enumerate(("S", "I", "SI", "SS", "II"))}
        path = os.path.join(out_dir, f"{prefix}_{model}.csv")
        write_series_csv(path, grid, cols, "model", model)
        report["files"][model] = path
        series[model] = dict(cols, t=grid, model=model)
        if model == "compact":
            compact_states = ts.states

        plateau = solve_to_plateau(rhs, y0, params)
        Sp, Ip, *_ = ode_models.aggregate(model, plateau["state"], dist,
                                          scenario.N)
        report["plateau_I"][model] = Ip

    models_run = list(series)
    for i, ma in enumerate(models_run):
        for mb in models_run[i + 1:]:
            cmp_entry = compare_series(
                dict(series[ma], model=ma), dict(series[mb], model=mb)
            )
            report["comparisons"].append(cmp_entry)

    if compact_states is not None:
        E = np.full(grid.size, np.nan)
        for i, y in enumerate(compact_states):
            state = ode_models.unpack("compact", y, dist)
            try:
                E[i] = closures.closure_error_E(state, dist, t=grid[i]).E
            except closures.DegenerateStateError:
                pass
        path = os.path.join(out_dir, f"{prefix}_closure_error.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "E"])
            for t, e in zip(grid, E):
                writer.writerow([repr(float(t)), repr(float(e))])
        report["files"]["closure_error"] = path
        finite = E[np.isfinite(E)]
        report["max_abs_E"] = float(np.max(np.abs(finite))) if finite.size else None
        if "supercompact" in series and report["max_abs_E"]:
            sup = next(
                c["sup_norm_I"] for c in report["comparisons"]
                if set(c["models"]) == {"supercompact", "compact"}
            )
            # Empirical constant in |I_s - I_c| <= C max|E|; diagnostic only.
            report["supercompact_error_over_max_E"] = sup / report["max_abs_E"]

    return report


def run_scenario(path_or_scenario, out_dir=None, seed=None, rtol=None,
                 runs=None):
    """Execute a scenario file end to end; returns the list of case reports."""
    scenario = (
        path_or_scenario
        if isinstance(path_or_scenario, Scenario)
        else load_scenario(path_or_scenario)
    )
    out_dir = out_dir or default_out_dir()
    os.makedirs(out_dir, exist_ok=True)
    reports = [
        run_case(scenario, case, out_dir, seed=seed, rtol=rtol, runs=runs)
        for case in scenario.cases
    ]
    report_path = os.path.join(out_dir, f"{scenario.name}_report.json")
    with open(report_path, "w") as fh:
        json.dump(reports, fh, indent=2)
    return reports, report_path
