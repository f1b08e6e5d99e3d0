"""Experiment orchestration and result emission.

An experiment is described by a config tree (usually loaded from YAML):
the victim, the attack goal, a data source, an evaluation-set source, the
attack parameters, and optionally a sweep over k or epsilon. Running one
produces up to three files in the output directory:

  trace.csv    poisoned-item coordinates at sampled iterations
               (iteration, item, x0..x{d-1}, y); attack runs only
  costs.csv    Monte-Carlo cost estimates with the theoretical lower
               bound (iteration or sweep value, mean, stderr, lower_bound)
  summary.json config echo, final estimates, bound, runtime, seed

All randomness is derived from the single experiment seed through named
substreams, so a re-run with the same config and seed reproduces the CSVs
bit for bit (the summary differs only in its runtime entry).
"""

import csv
import dataclasses
import json
import os
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..attacks import (
    AttackConfig,
    SelectionMethod,
    deep_scores,
    run_attack,
    shallow_scores,
    top_k_indices,
)
from ..bounds import BoundQuery, lower_bound_approx, lower_bound_pure
from ..core import BaseLearner, CostSpec, Goal, ModelParams, Sign, VictimSpec
from ..learners import (
    SolverError,
    train_base_logistic,
    train_base_ridge_constrained,
    train_mechanism,
)
from ..rng import (
    STAGE_DATA,
    STAGE_EVALSET,
    STAGE_SELECT,
    STAGE_MC_CLEAN,
    STAGE_MC_POISONED,
    STAGE_CURVE,
    STAGE_SWEEP,
    subseed,
    substream,
)
from .datasets import (
    build_nn_eval_set,
    gen_1d_dataset,
    gen_2d_dataset,
    gen_eval_grid_1d,
    gen_eval_grid_2d,
    load_csv_dataset,
    normalize_dataset,
    pick_extreme_eval_item,
    save_csv_dataset,
)
from .montecarlo import estimate_attack_cost

__all__ = [
    "DataSource",
    "EvalSource",
    "CostDescriptor",
    "SweepSpec",
    "ExperimentConfig",
    "config_from_dict",
    "config_to_dict",
    "build_dataset",
    "build_eval_set",
    "build_cost",
    "conservative_clean_cost",
    "bound_for",
    "curve_iterations",
    "run_experiment",
    "run_evaluation",
    "write_dataset_files",
]

_FMT = "%.17g"

_DATA_KINDS = ("gen-1d", "gen-2d", "csv")
_EVAL_KINDS = ("grid-1d", "grid-2d", "nn-flip", "extreme-item", "csv", "none")


@dataclass(frozen=True)
class DataSource:
    """Where the training set comes from."""

    kind: str
    n: int = 0
    theta_star: tuple = (1.0, 1.0)
    path: Optional[str] = None
    feature_columns: Optional[tuple] = None
    label_column: str = "y"
    label_map: Optional[dict] = None
    normalize: bool = False
    normalize_labels: bool = False
    label_range: tuple = (0.0, 10.0)

    def __post_init__(self):
        if self.kind not in _DATA_KINDS:
            raise ValueError(f"data kind must be one of {_DATA_KINDS}, got {self.kind!r}")
        if self.kind.startswith("gen") and self.n < 1:
            raise ValueError("generated data sources need n >= 1")
        if self.kind == "gen-2d" and len(self.theta_star) != 2:
            raise ValueError("gen-2d needs a 2-vector theta_star")
        if self.kind == "csv" and not self.path:
            raise ValueError("csv data source needs a path")


@dataclass(frozen=True)
class EvalSource:
    """Where the cost's evaluation set comes from (kind 'none' for
    parameter targeting with an explicit target)."""

    kind: str
    m: int = 21
    count: int = 10
    class_label: float = 1.0
    include_seed: bool = False
    extreme: str = "min"
    target_label: float = 1.0
    path: Optional[str] = None
    feature_columns: Optional[tuple] = None
    label_column: str = "y"
    label_map: Optional[dict] = None

    def __post_init__(self):
        if self.kind not in _EVAL_KINDS:
            raise ValueError(f"eval kind must be one of {_EVAL_KINDS}, got {self.kind!r}")
        if self.kind == "csv" and not self.path:
            raise ValueError("csv eval source needs a path")
        if self.kind.startswith("grid") and self.m < 1:
            raise ValueError("grid eval sources need m >= 1")
        if self.kind == "nn-flip" and self.count < 0:
            raise ValueError("nn-flip count must be nonnegative")


@dataclass(frozen=True)
class CostDescriptor:
    """Config-level description of the attack goal; materialized into a
    CostSpec once data and evaluation set exist.

    target applies to parameter targeting only: an explicit vector, or
    "fit-eval" to fit the base learner on the evaluation set.
    """

    goal: Goal
    loss: str = "logistic"
    target: object = None
    cbar: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "goal", Goal(self.goal))
        if self.loss not in ("logistic", "squared"):
            raise ValueError("loss must be 'logistic' or 'squared'")
        if self.goal is Goal.PARAMETER_TARGETING:
            if self.target is None:
                raise ValueError("parameter targeting needs a target vector or 'fit-eval'")
            if isinstance(self.target, str) and self.target != "fit-eval":
                raise ValueError(f"unknown target directive {self.target!r}")
        elif self.target is not None:
            raise ValueError("target applies to parameter targeting only")
        if self.cbar is not None and self.cbar <= 0:
            raise ValueError("cbar must be positive when given")


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    values: tuple

    def __post_init__(self):
        if self.kind not in ("k", "epsilon"):
            raise ValueError("sweep kind must be 'k' or 'epsilon'")
        vals = tuple(self.values)
        if len(vals) < 2:
            raise ValueError("a sweep needs at least two values")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if self.kind == "k":
            if any(int(v) != v or v < 0 for v in vals):
                raise ValueError("k sweep values must be nonnegative integers")
            vals = tuple(int(v) for v in vals)
        else:
            if any(v <= 0 for v in vals):
                raise ValueError("epsilon sweep values must be positive")
            vals = tuple(float(v) for v in vals)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class ExperimentConfig:
    victim: VictimSpec
    cost: CostDescriptor
    data: DataSource
    eval: EvalSource
    attack: AttackConfig
    seed: int = 0
    sweep: Optional[SweepSpec] = None
    curve_points: int = 21

    def __post_init__(self):
        if self.curve_points < 2:
            raise ValueError("curve_points must be at least 2")


def _build_section(raw, fields, section, required=()):
    """Construct dataclass kwargs from a config mapping, rejecting unknown
    keys and filling declared defaults."""
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ValueError(f"config section {section!r} must be a mapping")
    unknown = set(raw) - set(fields)
    if unknown:
        raise ValueError(f"unknown keys in config section {section!r}: {sorted(unknown)}")
    for key in required:
        if raw.get(key) is None:
            raise ValueError(f"config section {section!r} needs {key!r}")
    return {k: raw[k] for k in raw if raw[k] is not None}


def _as_tuple(v):
    return tuple(v) if isinstance(v, (list, tuple)) else v


def _resolve_path(path, base_dir):
    if path is None or base_dir is None or os.path.isabs(path):
        return path
    return os.path.join(base_dir, path)


def config_from_dict(raw, base_dir=None):
    """Build an ExperimentConfig from a plain config tree (e.g. parsed
    YAML). Unknown keys anywhere are an error. Relative data/eval paths
    are resolved against base_dir; referenced files must exist."""
    top = _build_section(raw, ("victim", "cost", "data", "eval", "attack", "seed", "sweep", "curve_points"), "top level", required=("victim", "cost", "data", "attack"))

    v = _build_section(top["victim"], ("mechanism", "base", "lam", "epsilon", "delta", "rho", "noise_scale"), "victim", required=("mechanism", "base", "lam", "epsilon"))
    victim = VictimSpec(**v)

    c = _build_section(top["cost"], ("goal", "loss", "target", "cbar"), "cost", required=("goal",))
    if "target" in c:
        c["target"] = _as_tuple(c["target"])
    cost = CostDescriptor(**c)

    d = _build_section(top["data"], ("kind", "n", "theta_star", "path", "feature_columns", "label_column", "label_map", "normalize", "normalize_labels", "label_range"), "data", required=("kind",))
    for key in ("theta_star", "feature_columns", "label_range"):
        if key in d:
            d[key] = _as_tuple(d[key])
    if "path" in d:
        d["path"] = _resolve_path(d["path"], base_dir)
        if not os.path.exists(d["path"]):
            raise ValueError(f"data file not found: {d['path']}")
    data = DataSource(**d)

    e = _build_section(top.get("eval"), ("kind", "m", "count", "class_label", "include_seed", "extreme", "target_label", "path", "feature_columns", "label_column", "label_map"), "eval")
    e.setdefault("kind", "none")
    if "feature_columns" in e:
        e["feature_columns"] = _as_tuple(e["feature_columns"])
    if "path" in e:
        e["path"] = _resolve_path(e["path"], base_dir)
        if not os.path.exists(e["path"]):
            raise ValueError(f"eval file not found: {e['path']}")
    eval_src = EvalSource(**e)

    a = _build_section(top["attack"], ("k", "T", "selection", "mode", "eta", "m_select", "alpha", "T_eval", "relax_T"), "attack", required=("k", "T"))
    attack = AttackConfig(**a)

    sweep = None
    if top.get("sweep") is not None:
        s = _build_section(top["sweep"], ("kind", "values"), "sweep", required=("kind", "values"))
        sweep = SweepSpec(s["kind"], tuple(s["values"]))

    return ExperimentConfig(
        victim=victim,
        cost=cost,
        data=data,
        eval=eval_src,
        attack=attack,
        seed=int(top.get("seed", 0)),
        sweep=sweep,
        curve_points=int(top.get("curve_points", 21)),
    )


def config_to_dict(config):
    """Inverse of config_from_dict: a plain tree suitable for JSON/YAML."""
    victim = {
        "mechanism": config.victim.mechanism.value,
        "base": config.victim.base.value,
        "lam": config.victim.lam,
        "epsilon": config.victim.epsilon,
        "delta": config.victim.delta,
        "rho": config.victim.rho,
        "noise_scale": config.victim.noise_scale,
    }
    cost = {
        "goal": config.cost.goal.value,
        "loss": config.cost.loss,
        "target": list(config.cost.target) if isinstance(config.cost.target, tuple) else config.cost.target,
        "cbar": config.cost.cbar,
    }
    data = {
        "kind": config.data.kind,
        "n": config.data.n,
        "theta_star": list(config.data.theta_star),
        "path": config.data.path,
        "feature_columns": list(config.data.feature_columns) if config.data.feature_columns else None,
        "label_column": config.data.label_column,
        "label_map": dict(config.data.label_map) if config.data.label_map else None,
        "normalize": config.data.normalize,
        "normalize_labels": config.data.normalize_labels,
        "label_range": list(config.data.label_range),
    }
    ev = {
        "kind": config.eval.kind,
        "m": config.eval.m,
        "count": config.eval.count,
        "class_label": config.eval.class_label,
        "include_seed": config.eval.include_seed,
        "extreme": config.eval.extreme,
        "target_label": config.eval.target_label,
        "path": config.eval.path,
        "feature_columns": list(config.eval.feature_columns) if config.eval.feature_columns else None,
        "label_column": config.eval.label_column,
        "label_map": dict(config.eval.label_map) if config.eval.label_map else None,
    }
    attack = {
        "k": config.attack.k,
        "T": config.attack.T,
        "selection": config.attack.selection.value,
        "mode": config.attack.mode.value,
        "eta": config.attack.eta,
        "m_select": config.attack.m_select,
        "alpha": config.attack.alpha,
        "T_eval": config.attack.T_eval,
        "relax_T": config.attack.relax_T,
    }
    out = {
        "victim": victim,
        "cost": cost,
        "data": data,
        "eval": ev,
        "attack": attack,
        "seed": config.seed,
        "curve_points": config.curve_points,
        "sweep": None,
    }
    if config.sweep is not None:
        out["sweep"] = {"kind": config.sweep.kind, "values": list(config.sweep.values)}
    return out


def build_dataset(config):
    """Materialize the training set from the config's data source."""
    src = config.data
    if src.kind == "gen-1d":
        data = gen_1d_dataset(src.n, substream(config.seed, STAGE_DATA))
    elif src.kind == "gen-2d":
        data = gen_2d_dataset(src.n, np.asarray(src.theta_star, dtype=float), substream(config.seed, STAGE_DATA))
    else:
        data = load_csv_dataset(
            src.path,
            list(src.feature_columns) if src.feature_columns else None,
            src.label_column,
            src.label_map,
        )
    if src.normalize:
        data = normalize_dataset(data, src.normalize_labels, src.label_range)
    return data


def build_eval_set(config, data):
    """Materialize the evaluation set, or None for kind 'none'."""
    ev = config.eval
    if ev.kind == "none":
        return None
    if ev.kind == "grid-1d":
        return gen_eval_grid_1d(ev.m)
    if ev.kind == "grid-2d":
        return gen_eval_grid_2d(ev.m)
    if ev.kind == "nn-flip":
        rng = substream(config.seed, STAGE_EVALSET)
        return build_nn_eval_set(data, rng, ev.class_label, ev.count, ev.include_seed)
    if ev.kind == "extreme-item":
        return pick_extreme_eval_item(data, ev.extreme, ev.target_label)
    return load_csv_dataset(
        ev.path,
        list(ev.feature_columns) if ev.feature_columns else None,
        ev.label_column,
        ev.label_map,
    )


def _fit_target(victim, eval_set):
    if eval_set is None or len(eval_set) == 0:
        raise ValueError("target 'fit-eval' needs a nonempty evaluation set")
    if victim.base is BaseLearner.LOGISTIC:
        return train_base_logistic(eval_set, victim.lam)
    return train_base_ridge_constrained(eval_set, victim.lam, victim.rho)


def build_cost(config, data, eval_set):
    """Materialize the CostSpec for a built dataset and evaluation set."""
    desc = config.cost
    if desc.goal is Goal.PARAMETER_TARGETING:
        if desc.target == "fit-eval":
            target = _fit_target(config.victim, eval_set)
        else:
            target = ModelParams(np.asarray(desc.target, dtype=float))
        return CostSpec(desc.goal, target_model=target, loss=desc.loss, cbar=desc.cbar)
    if eval_set is None:
        raise ValueError(f"{desc.goal.value} needs an evaluation set (eval kind is 'none')")
    return CostSpec(desc.goal, eval_set=eval_set, loss=desc.loss, cbar=desc.cbar)


def conservative_clean_cost(estimate, sign):
    """Pessimistic clean-cost endpoint fed into the bound: two standard
    errors below the mean, clamped into the cost's sign range. Keeps the
    emitted bound honest when J(D) is itself only estimated."""
    v = estimate.mean - 2.0 * estimate.stderr
    if Sign(sign) is Sign.NON_NEGATIVE:
        return max(0.0, v)
    return min(0.0, v)


def bound_for(victim, cost, k, j_clean):
    """Theoretical lower bound on the k-item attack cost for this victim."""
    if victim.delta == 0.0:
        q = BoundQuery(j_clean, victim.epsilon, k=k, sign=cost.sign)
        return lower_bound_pure(q)
    q = BoundQuery(
        j_clean,
        victim.epsilon,
        k=k,
        delta=victim.delta,
        cbar=cost.cbar,
        sign=cost.sign,
    )
    return lower_bound_approx(q)


def curve_iterations(T, points):
    """Evenly spaced iteration indices from 0 to T inclusive."""
    return np.unique(np.round(np.linspace(0.0, T, points)).astype(int))


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _cell(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return _FMT % v


def _write_trace(path, trace, iterations):
    if len(trace.selected) == 0 or len(trace.iterations) == 0:
        d = trace.clean_data.dim
    else:
        d = trace.features.shape[2]
    header = ["iteration", "item"] + [f"x{j}" for j in range(d)] + ["y"]
    rows = []
    for t in iterations:
        pos = int(np.searchsorted(trace.iterations, t))
        for j, item in enumerate(trace.selected):
            rows.append(
                [str(int(t)), str(int(item))]
                + [_cell(v) for v in trace.features[pos, j]]
                + [_cell(trace.labels[pos, j])]
            )
    _write_csv(path, header, rows)


def _estimate_dict(est):
    return {"mean": est.mean, "stderr": est.stderr, "samples": est.samples}


def _summary_base(config, data, out_dir):
    return {
        "config": config_to_dict(config),
        "seed": config.seed,
        "n": data.n,
        "dim": data.dim,
        "out_dir": os.path.abspath(out_dir),
        "error": None,
    }


def _finish_summary(summary, out_dir, t0):
    summary["runtime_seconds"] = time.perf_counter() - t0
    path = os.path.join(out_dir, "summary.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary


def _run_attack_curve(config, data, cost, out_dir, threads, summary):
    victim = config.victim
    atk = dataclasses.replace(config.attack, seed=config.seed)
    trace = run_attack(victim, data, cost, atk)
    summary["selected"] = [int(i) for i in trace.selected]
    if trace.error is not None:
        summary["error"] = trace.error
    if len(trace.surrogate_costs) > 0:
        summary["final_surrogate_cost"] = float(trace.surrogate_costs[-1])
        summary["final_surrogate_model"] = _surrogate_model_dict(victim, trace)

    rows = []
    est_rows = []
    try:
        clean_est = estimate_attack_cost(
            victim, data, cost, atk.T_eval, subseed(config.seed, STAGE_MC_CLEAN), threads
        )
        summary["clean_cost"] = _estimate_dict(clean_est)
        j_clean = conservative_clean_cost(clean_est, cost.sign)
        bound = bound_for(victim, cost, atk.k, j_clean)
        summary["lower_bound"] = bound
        last = int(trace.iterations[-1]) if len(trace.iterations) else 0
        iters = curve_iterations(last, config.curve_points)
        _write_trace(os.path.join(out_dir, "trace.csv"), trace, iters)
        for t in iters:
            if t == 0:
                est = clean_est
            else:
                est = estimate_attack_cost(
                    victim,
                    trace.dataset_at(t),
                    cost,
                    atk.T_eval,
                    subseed(config.seed, STAGE_CURVE, int(t)),
                    threads,
                )
            rows.append([str(int(t)), _cell(est.mean), _cell(est.stderr), _cell(bound)])
            est_rows.append({"iteration": int(t), **_estimate_dict(est)})
        summary["final_cost"] = est_rows[-1] if est_rows else None
    except SolverError as exc:
        summary["error"] = f"cost estimation failed: {exc}"
    summary["curve"] = est_rows
    _write_csv(os.path.join(out_dir, "costs.csv"), ["iteration", "mean", "stderr", "lower_bound"], rows)


def _surrogate_model_dict(victim, trace):
    model = train_mechanism(victim, trace.final_data, np.zeros(trace.final_data.dim))
    return {"theta": [float(v) for v in model.theta], "mu": model.mu}


def _sweep_selection_scores(config, data, cost):
    victim = config.victim
    atk = dataclasses.replace(config.attack, seed=config.seed)
    rng = substream(config.seed, STAGE_SELECT)
    if atk.selection is SelectionMethod.SHALLOW:
        return shallow_scores(victim, data, cost, atk.mode, atk.m_select, rng)
    if atk.selection is SelectionMethod.DEEP:
        return deep_scores(victim, data, cost, atk, rng)
    raise ValueError("a k sweep needs shallow or deep selection")


def _run_k_sweep(config, data, cost, out_dir, threads, summary):
    victim = config.victim
    values = config.sweep.values
    if values[-1] > data.n:
        raise ValueError(f"sweep k={values[-1]} exceeds dataset size n={data.n}")
    rows = []
    sweep_rows = []
    try:
        scores = _sweep_selection_scores(config, data, cost)
        clean_est = estimate_attack_cost(
            victim, data, cost, config.attack.T_eval, subseed(config.seed, STAGE_MC_CLEAN), threads
        )
        summary["clean_cost"] = _estimate_dict(clean_est)
        j_clean = conservative_clean_cost(clean_est, cost.sign)
        for i, k in enumerate(values):
            selected = top_k_indices(scores, k)
            atk = dataclasses.replace(
                config.attack, k=k, seed=subseed(config.seed, STAGE_SWEEP, i)
            )
            trace = run_attack(victim, data, cost, atk, selected=selected)
            if trace.error is not None:
                summary["error"] = f"k={k}: {trace.error}"
            est = estimate_attack_cost(
                victim,
                trace.final_data,
                cost,
                atk.T_eval,
                subseed(config.seed, STAGE_MC_POISONED, i),
                threads,
            )
            bound = bound_for(victim, cost, k, j_clean)
            rows.append([str(int(k)), _cell(est.mean), _cell(est.stderr), _cell(bound)])
            sweep_rows.append({"k": int(k), "lower_bound": bound, **_estimate_dict(est)})
    except SolverError as exc:
        summary["error"] = f"sweep failed: {exc}"
    summary["sweep_rows"] = sweep_rows
    _write_csv(os.path.join(out_dir, "costs.csv"), ["k", "mean", "stderr", "lower_bound"], rows)


def _run_epsilon_sweep(config, data, cost, out_dir, threads, summary):
    values = config.sweep.values
    rows = []
    sweep_rows = []
    try:
        for i, eps in enumerate(values):
            victim = dataclasses.replace(config.victim, epsilon=eps)
            atk = dataclasses.replace(config.attack, seed=subseed(config.seed, STAGE_SWEEP, i))
            clean_est = estimate_attack_cost(
                victim, data, cost, atk.T_eval, subseed(config.seed, STAGE_MC_CLEAN, i), threads
            )
            j_clean = conservative_clean_cost(clean_est, cost.sign)
            trace = run_attack(victim, data, cost, atk)
            if trace.error is not None:
                summary["error"] = f"epsilon={eps}: {trace.error}"
            est = estimate_attack_cost(
                victim,
                trace.final_data,
                cost,
                atk.T_eval,
                subseed(config.seed, STAGE_MC_POISONED, i),
                threads,
            )
            bound = bound_for(victim, cost, atk.k, j_clean)
            rows.append([_cell(float(eps)), _cell(est.mean), _cell(est.stderr), _cell(bound)])
            sweep_rows.append(
                {
                    "epsilon": float(eps),
                    "lower_bound": bound,
                    "clean": _estimate_dict(clean_est),
                    **_estimate_dict(est),
                }
            )
    except SolverError as exc:
        summary["error"] = f"sweep failed: {exc}"
    summary["sweep_rows"] = sweep_rows
    _write_csv(os.path.join(out_dir, "costs.csv"), ["epsilon", "mean", "stderr", "lower_bound"], rows)


def run_experiment(config, out_dir, threads=1):
    """Run the configured experiment and write its report files.

    Returns the summary dict (also written to summary.json). Solver
    failures are recorded in the summary; partial outputs are retained.
    """
    t0 = time.perf_counter()
    os.makedirs(out_dir, exist_ok=True)
    data = build_dataset(config)
    eval_set = build_eval_set(config, data)
    cost = build_cost(config, data, eval_set)
    summary = _summary_base(config, data, out_dir)
    if config.sweep is None:
        _run_attack_curve(config, data, cost, out_dir, threads, summary)
    elif config.sweep.kind == "k":
        _run_k_sweep(config, data, cost, out_dir, threads, summary)
    else:
        _run_epsilon_sweep(config, data, cost, out_dir, threads, summary)
    return _finish_summary(summary, out_dir, t0)


def run_evaluation(config, out_dir, threads=1):
    """Estimate the clean cost J(D) and its bound without attacking."""
    t0 = time.perf_counter()
    os.makedirs(out_dir, exist_ok=True)
    data = build_dataset(config)
    eval_set = build_eval_set(config, data)
    cost = build_cost(config, data, eval_set)
    summary = _summary_base(config, data, out_dir)
    rows = []
    try:
        est = estimate_attack_cost(
            config.victim,
            data,
            cost,
            config.attack.T_eval,
            subseed(config.seed, STAGE_MC_CLEAN),
            threads,
        )
        summary["clean_cost"] = _estimate_dict(est)
        j_clean = conservative_clean_cost(est, cost.sign)
        bound = bound_for(config.victim, cost, config.attack.k, j_clean)
        summary["lower_bound"] = bound
        rows.append(["0", _cell(est.mean), _cell(est.stderr), _cell(bound)])
    except SolverError as exc:
        summary["error"] = f"cost estimation failed: {exc}"
    _write_csv(os.path.join(out_dir, "costs.csv"), ["iteration", "mean", "stderr", "lower_bound"], rows)
    return _finish_summary(summary, out_dir, t0)


def write_dataset_files(config, out_dir):
    """Materialize the config's data (and evaluation set, if any) to CSVs."""
    os.makedirs(out_dir, exist_ok=True)
    data = build_dataset(config)
    save_csv_dataset(data, os.path.join(out_dir, "dataset.csv"))
    written = {"dataset": os.path.join(out_dir, "dataset.csv")}
    eval_set = build_eval_set(config, data)
    if eval_set is not None and len(eval_set) > 0:
        save_csv_dataset(eval_set, os.path.join(out_dir, "eval.csv"))
        written["eval"] = os.path.join(out_dir, "eval.csv")
    return written
