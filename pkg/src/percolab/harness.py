"""Experiment configuration, deterministic sweep execution, record
persistence, and measurement-vs-prediction comparison.

Records are JSON lines: one config record, one record per trial, then a
summary record that doubles as the completion sentinel.  Every byte of
the record file is a pure function of (config, master_seed): trial seeds
are counter-derived, floats serialize via repr, keys are sorted, and
wall-clock time is logged but never serialized.  A companion CSV table
holds the per-trial census columns.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import multiprocessing
import os
import time
from dataclasses import dataclass, field, replace
from statistics import median

import numpy as np

from .census import ComponentCensus, take_census
from .generators import GenSpec, generate
from .graph_core import RegularGraph, VertexSet
from .percolation import CoinStream, PercolationSample, run_dfs
from .rng import TAG_SUBSETS, make_generator, trial_seed
from .spectral import SpectrumReport, compute_spectrum
from .theory import TheoryPrediction, predict
from .verify import (
    check_corollary_2_3,
    check_giant_expansion,
    check_lemma_2_4,
    check_mixing,
    check_stream_properties,
)

__all__ = [
    "CHECKER_IDS",
    "ExperimentConfig",
    "TrialRecord",
    "compare",
    "compare_rows",
    "config_from_mapping",
    "load_config_file",
    "run_sweep",
]

log = logging.getLogger("percolab.harness")

REGIMES = ("sub", "super")
CHECKER_IDS = ("stream", "mixing", "corollary_2_3", "lemma_2_4", "giant_expansion")
_SPECTRUM_CHECKERS = ("mixing", "corollary_2_3")

DEFAULT_TOLERANCES = {
    "L1_median": 0.10,
    "L1_window_rate": 0.80,
    "L2_rate": 0.95,
    "T1_median": 0.10,
    "T2_median": 0.15,
    "Zp_median": 0.05,
    "eL1_median": 0.10,
    "cycle_rate": 1.0,
    "max_component_rate": 1.0,
}


@dataclass(frozen=True)
class ExperimentConfig:
    gen: GenSpec
    epsilon: float
    alpha: float
    regime: str
    trials: int
    master_seed: int
    out: str | None = None
    k_max: int = 4
    checkers: tuple = ()
    tolerances: dict = field(default_factory=dict)
    workers: int = 1
    regen_graph: bool = False
    spectrum: bool = False
    spectrum_tol: float = 1e-8
    pairs: int = 1000
    subsets: int = 1000
    samples: int = 200
    beta_test: float = 0.01

    @property
    def p(self) -> float:
        d = self.gen.d if self.gen.d else (self.gen.blowup_factor * self.gen.base.d)
        sign = -1.0 if self.regime == "sub" else 1.0
        return (1.0 + sign * self.epsilon) / d

    def tol(self, metric: str) -> float:
        if metric in self.tolerances:
            return float(self.tolerances[metric])
        return DEFAULT_TOLERANCES[metric]

    def validate(self) -> None:
        self.gen.validate()
        if self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}, got {self.regime!r}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"regime/epsilon give retention probability {self.p}, not in [0,1]")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.k_max < 1:
            raise ValueError("k_max must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        for metric, t in self.tolerances.items():
            if t <= 0:
                raise ValueError(f"tolerance for {metric} must be positive, got {t}")
        for c in self.checkers:
            if c not in CHECKER_IDS:
                raise ValueError(f"unknown checker id {c!r}; known: {CHECKER_IDS}")
        if any(c in self.checkers for c in _SPECTRUM_CHECKERS) and not self.spectrum:
            raise ValueError("mixing/corollary_2_3 checkers need spectrum=true")

    def to_dict(self) -> dict:
        # workers is scheduling, not experiment identity: records must be
        # byte-identical across pool sizes, so it stays out of the file
        return {
            "gen": _gen_to_dict(self.gen),
            "epsilon": self.epsilon,
            "alpha": self.alpha,
            "regime": self.regime,
            "trials": self.trials,
            "seed": self.master_seed,
            "out": self.out,
            "k_max": self.k_max,
            "checkers": list(self.checkers),
            "tolerances": {k: float(v) for k, v in sorted(self.tolerances.items())},
            "regen_graph": self.regen_graph,
            "spectrum": self.spectrum,
            "spectrum_tol": self.spectrum_tol,
            "pairs": self.pairs,
            "subsets": self.subsets,
            "samples": self.samples,
            "beta_test": self.beta_test,
        }


def _gen_to_dict(gen: GenSpec) -> dict:
    out = {
        "family": gen.family,
        "n": gen.n,
        "d": gen.d,
        "graph_seed": gen.seed,
    }
    if gen.blowup_factor is not None:
        out["blowup_factor"] = gen.blowup_factor
    if gen.base is not None:
        out["base"] = _gen_to_dict(gen.base)
    return out


@dataclass
class TrialRecord:
    trial_index: int
    seed: int
    census: ComponentCensus
    dfs_summary: dict
    checks: list
    wall_time: float  # logged, never serialized: records must be replay-identical

    def to_json_obj(self) -> dict:
        return {
            "kind": "trial",
            "trial_index": self.trial_index,
            "seed": self.seed,
            "census": self.census.to_summary(),
            "dfs": self.dfs_summary,
            "checks": [r.to_dict() for r in self.checks],
        }


# ----------------------------------------------------------------------
# flat key=value config files
# ----------------------------------------------------------------------
def _parse_scalar(text: str):
    text = text.strip()
    low = text.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def load_config_file(path: str) -> dict:
    """Flat key=value lines; '#' starts a comment; later keys win."""
    mapping: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.rstrip()!r}")
            key, value = line.split("=", 1)
            mapping[key.strip()] = _parse_scalar(value)
    return mapping


_GEN_KEYS = ("family", "n", "d", "graph_seed", "blowup_factor",
             "base_family", "base_n", "base_d", "base_seed")
_INT_KEYS = ("n", "d", "graph_seed", "blowup_factor", "base_n", "base_d", "base_seed",
             "trials", "seed", "k_max", "workers", "pairs", "subsets", "samples")


def config_from_mapping(mapping: dict) -> ExperimentConfig:
    m = dict(mapping)
    for key in _INT_KEYS:
        if key in m and m[key] is not None and not isinstance(m[key], bool):
            m[key] = int(m[key])
    base = None
    if m.get("family") == "blowup":
        base = GenSpec(
            family=m.get("base_family", "random_regular"),
            n=m.get("base_n", 0),
            d=m.get("base_d", 0),
            seed=m.get("base_seed", 0),
        )
        factor = m.get("blowup_factor")
        gen = GenSpec(
            family="blowup",
            n=m.get("n", 0),
            d=m.get("d", 0),
            seed=m.get("graph_seed", 0),
            blowup_factor=factor,
            base=base,
        )
    else:
        gen = GenSpec(
            family=m.get("family", "random_regular"),
            n=m.get("n", 0),
            d=m.get("d", 0),
            seed=m.get("graph_seed", 0),
        )
    checkers = m.get("checkers", ())
    if isinstance(checkers, str):
        checkers = tuple(c.strip() for c in checkers.split(",") if c.strip())
    tolerances = {k[len("tol_"):]: float(v) for k, v in m.items() if k.startswith("tol_")}
    cfg = ExperimentConfig(
        gen=gen,
        epsilon=float(m["epsilon"]),
        alpha=float(m.get("alpha", 0.1)),
        regime=str(m.get("regime", "super")),
        trials=int(m["trials"]),
        master_seed=int(m["seed"]),
        out=m.get("out"),
        k_max=int(m.get("k_max", 4)),
        checkers=tuple(checkers),
        tolerances=tolerances,
        workers=int(m.get("workers", 1)),
        regen_graph=bool(m.get("regen_graph", False)),
        spectrum=bool(m.get("spectrum", False)),
        spectrum_tol=float(m.get("spectrum_tol", 1e-8)),
        pairs=int(m.get("pairs", 1000)),
        subsets=int(m.get("subsets", 1000)),
        samples=int(m.get("samples", 200)),
        beta_test=float(m.get("beta_test", 0.01)),
    )
    cfg.validate()
    return cfg


# ----------------------------------------------------------------------
# trial execution
# ----------------------------------------------------------------------
def _run_trial(
    g: RegularGraph,
    cfg: ExperimentConfig,
    spect: SpectrumReport | None,
    trial_index: int,
) -> TrialRecord:
    t0 = time.perf_counter()
    seed = trial_seed(cfg.master_seed, trial_index)
    if cfg.regen_graph:
        g = generate(replace(cfg.gen, seed=trial_seed(cfg.gen.seed, trial_index)))
    stream = CoinStream(g.n, cfg.p, seed)
    trace = run_dfs(g, stream)
    sample = PercolationSample.from_membership(cfg.p, seed, trace.accepted_mask())
    census = take_census(g, sample, cfg.k_max)
    assert census.retained == trace.accepted_count, "census/DFS vertex conservation"
    assert census.num_components == trace.num_epochs, "census/DFS component conservation"
    checks = []
    for cid in cfg.checkers:
        if cid == "stream":
            checks.append(check_stream_properties(stream, cfg.epsilon, g.d, cfg.regime))
        elif cid == "mixing":
            checks.append(check_mixing(g, spect, cfg.pairs, seed))
        elif cid == "corollary_2_3":
            rng = make_generator(seed, TAG_SUBSETS, 23)
            half = rng.choice(g.n, size=(g.n + 1) // 2, replace=False)
            checks.append(check_corollary_2_3(g, spect, VertexSet.from_indices(g.n, half), cfg.alpha))
        elif cid == "lemma_2_4":
            checks.append(check_lemma_2_4(g, sample, cfg.alpha, cfg.subsets, seed, spect))
        elif cid == "giant_expansion":
            checks.append(
                check_giant_expansion(g, sample, census, cfg.alpha, cfg.samples, cfg.beta_test, seed)
            )
    return TrialRecord(
        trial_index=trial_index,
        seed=seed,
        census=census,
        dfs_summary=trace.summary(),
        checks=checks,
        wall_time=time.perf_counter() - t0,
    )


_WORKER_STATE: dict = {}


def _trial_worker(trial_index: int) -> dict:
    rec = _run_trial(
        _WORKER_STATE["graph"],
        _WORKER_STATE["cfg"],
        _WORKER_STATE["spect"],
        trial_index,
    )
    return rec.to_json_obj()


def _dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# ----------------------------------------------------------------------
# comparison rows
# ----------------------------------------------------------------------
def _rate(flags) -> float:
    flags = list(flags)
    return sum(1.0 for f in flags if f) / len(flags) if flags else 0.0


def compare_rows(trials: list, pred: TheoryPrediction, regime: str, tol) -> list:
    """Per-metric table rows.  `trials` holds trial-record dicts; `tol`
    maps metric name -> tolerance (relative for medians, threshold for
    rates).  Claim tags follow the numbered statements the metrics
    instantiate."""
    cen = [t["census"] for t in trials]
    rows = []

    def row(metric, claim, measured, predicted, claim_bound, tolerance, passed):
        rows.append({
            "metric": metric,
            "claim": claim,
            "measured": float(measured),
            "predicted": None if predicted is None else float(predicted),
            "claim_bound": None if claim_bound is None else float(claim_bound),
            "tolerance": float(tolerance),
            "pass": bool(passed),
        })

    if regime == "super":
        l1 = [c["largest"] for c in cen]
        med_l1 = median(l1)
        t = tol("L1_median")
        row("L1_median", "theorem_2", med_l1, pred.L1_pred, pred.L1_tol, t,
            abs(med_l1 - pred.L1_pred) <= t * pred.L1_pred)
        t = tol("L1_window_rate")
        rate = _rate(abs(v - pred.L1_pred) <= pred.L1_tol for v in l1)
        row("L1_window_rate", "theorem_2", rate, 1.0, pred.L1_tol, t, rate >= t)

        l2 = [c["second_largest"] for c in cen]
        t = tol("L2_rate")
        rate = _rate(v <= pred.straggler_bound for v in l2)
        row("L2_rate", "theorem_3", rate, 1.0, pred.straggler_bound, t, rate >= t)

        for k, metric in ((1, "T1_median"), (2, "T2_median")):
            vals = [c["tree_counts"][k - 1] for c in cen]
            med = median(vals)
            t = tol(metric)
            target = pred.T_k_pred[k - 1]
            row(metric, "lemma_5_4", med, target, None, t, abs(med - target) <= t * target)

        zp = [c["retained_edges"] for c in cen]
        med = median(zp)
        t = tol("Zp_median")
        row("Zp_median", "lemma_6_1", med, pred.Zp_pred, None, t,
            abs(med - pred.Zp_pred) <= t * pred.Zp_pred)

        el1 = [c["largest_edges"] for c in cen]
        med = median(el1)
        t = tol("eL1_median")
        row("eL1_median", "theorem_4", med, pred.e_L1_pred, None, t,
            abs(med - pred.e_L1_pred) <= t * pred.e_L1_pred)

        cycle_bound = pred.epsilon ** 2 * pred.n / (100.0 * pred.d)
        vals = [c["cycle_lb"] for c in cen]
        t = tol("cycle_rate")
        rate = _rate(v >= cycle_bound for v in vals)
        row("cycle_rate", "theorem_5", rate, 1.0, cycle_bound, t, rate >= t)
    else:
        l1 = [c["largest"] for c in cen]
        t = tol("max_component_rate")
        rate = _rate(v <= pred.subcritical_bound for v in l1)
        row("max_component_rate", "theorem_1", rate, 1.0, pred.subcritical_bound, t, rate >= t)
        med = median(l1)
        row("max_component_median", "theorem_1", med, pred.subcritical_bound,
            pred.subcritical_bound, 1.0, med <= pred.subcritical_bound)
    return rows


def _summary_obj(cfg: ExperimentConfig, trials: list, pred: TheoryPrediction) -> dict:
    cen = [t["census"] for t in trials]

    def med(key):
        return float(median(c[key] for c in cen))

    metrics = {
        "L1_median": med("largest"),
        "L2_median": med("second_largest"),
        "eL1_median": med("largest_edges"),
        "Zp_median": med("retained_edges"),
        "retained_median": med("retained"),
        "cycle_lb_median": med("cycle_lb"),
        "components_median": med("components"),
    }
    for k in range(1, cfg.k_max + 1):
        metrics[f"T{k}_median"] = float(median(c["tree_counts"][k - 1] for c in cen))
    checker_rates = {}
    for cid in cfg.checkers:
        flags = []
        for t in trials:
            flags.extend(r["pass"] for r in t["checks"] if r["checker"] == cid)
        checker_rates[cid] = _rate(flags)
    rows = compare_rows(trials, pred, cfg.regime, cfg.tol)
    return {
        "kind": "summary",
        "complete": True,
        "trials": len(trials),
        "metrics": metrics,
        "checker_pass_rates": checker_rates,
        "rows": rows,
        "pass": all(r["pass"] for r in rows),
    }


# ----------------------------------------------------------------------
# sweep driver
# ----------------------------------------------------------------------
def _read_existing(path: str, config_obj: dict) -> dict:
    """Map trial_index -> serialized line for resumable prefixes."""
    found: dict = {}
    if not os.path.exists(path):
        return found
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    for i, line in enumerate(lines):
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            break  # torn tail from a killed run; recompute from here
        kind = obj.get("kind")
        if i == 0:
            if kind != "config" or obj != config_obj:
                raise ValueError("existing records were produced by a different config")
            continue
        if kind == "trial":
            found[obj["trial_index"]] = obj
    return found


def _csv_path(out: str) -> str:
    return out + ".csv"


def _write_csv(path: str, cfg: ExperimentConfig, trials: list) -> None:
    cols = ["trial_index", "seed", "retained", "components", "largest", "second_largest",
            "largest_edges", "retained_edges"]
    cols += [f"T{k}" for k in range(1, cfg.k_max + 1)]
    cols += ["straggler_vertices", "cycle_lb", "epochs", "largest_epoch", "checks_pass"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for t in trials:
        c, d = t["census"], t["dfs"]
        row = [t["trial_index"], t["seed"], c["retained"], c["components"], c["largest"],
               c["second_largest"], c["largest_edges"], c["retained_edges"]]
        row += [c["tree_counts"][k - 1] for k in range(1, cfg.k_max + 1)]
        row += [c["straggler_vertices"], c["cycle_lb"], d["epochs"], d["largest_epoch"],
                int(all(r["pass"] for r in t["checks"]))]
        w.writerow(row)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def _warm_kernels() -> None:
    """Compile the jitted kernels in the parent before any fork."""
    from .generators import cycle_graph

    g = cycle_graph(6)
    stream = CoinStream(g.n, 0.5, 7)
    trace = run_dfs(g, stream)
    take_census(g, PercolationSample.from_membership(0.5, 7, trace.accepted_mask()), 4)


def run_sweep(cfg: ExperimentConfig, resume: bool = False) -> dict:
    """Execute all trials, persist JSON-lines + CSV, return the summary."""
    cfg.validate()
    if cfg.out is None:
        raise ValueError("config needs an output path")
    t_start = time.perf_counter()
    graph = generate(cfg.gen)
    spect = compute_spectrum(graph, tol=cfg.spectrum_tol) if cfg.spectrum else None
    pred = predict(graph.n, graph.d, cfg.epsilon, cfg.alpha, cfg.k_max)

    config_obj = {
        "kind": "config",
        "config": cfg.to_dict(),
        "n": graph.n,
        "d": graph.d,
        "p": cfg.p,
        "prediction": pred.to_dict(),
        "spectrum": None if spect is None else spect.to_dict(),
        "format": 1,
    }

    have = _read_existing(cfg.out, config_obj) if resume else {}
    missing = [i for i in range(cfg.trials) if i not in have]

    _warm_kernels()
    if cfg.workers > 1 and missing:
        _WORKER_STATE.update(graph=graph, cfg=cfg, spect=spect)
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(cfg.workers) as pool:
            fresh = pool.map(_trial_worker, missing, chunksize=1)
        _WORKER_STATE.clear()
    else:
        fresh = []
        for i in missing:
            rec = _run_trial(graph, cfg, spect, i)
            log.info("trial %d: %.3fs", i, rec.wall_time)
            fresh.append(rec.to_json_obj())
    for i, obj in zip(missing, fresh):
        have[i] = obj
    trials = [have[i] for i in range(cfg.trials)]

    summary = _summary_obj(cfg, trials, pred)
    with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(_dumps(config_obj) + "\n")
        for obj in trials:
            fh.write(_dumps(obj) + "\n")
        fh.write(_dumps(summary) + "\n")
    _write_csv(_csv_path(cfg.out), cfg, trials)
    log.info("sweep finished in %.3fs (%d trials)", time.perf_counter() - t_start, cfg.trials)
    return summary


# ----------------------------------------------------------------------
# offline comparison
# ----------------------------------------------------------------------
def compare(records_path: str, prediction: TheoryPrediction | None = None) -> dict:
    """Rebuild the per-metric comparison table from a finished record file.

    Requires the terminating summary sentinel; a sweep that died mid-run
    leaves records without one and must be re-run or resumed first.
    """
    with open(records_path, "r", encoding="utf-8") as fh:
        lines = [line for line in fh.read().split("\n") if line]
    if not lines:
        raise ValueError(f"{records_path}: empty record file")
    objs = [json.loads(line) for line in lines]
    if objs[0].get("kind") != "config":
        raise ValueError(f"{records_path}: first record must be the config record")
    if objs[-1].get("kind") != "summary" or not objs[-1].get("complete"):
        raise ValueError(
            f"{records_path}: missing terminating sentinel record; sweep incomplete"
        )
    head = objs[0]
    trials = [o for o in objs if o.get("kind") == "trial"]
    if len(trials) != head["config"]["trials"]:
        raise ValueError(
            f"{records_path}: {len(trials)} trial records, config says {head['config']['trials']}"
        )
    if prediction is None:
        p = head["prediction"]
        prediction = predict(p["n"], p["d"], p["epsilon"], p["alpha"], len(p["T_k_pred"]))
    tolerances = dict(head["config"].get("tolerances", {}))

    def tol(metric: str) -> float:
        return float(tolerances.get(metric, DEFAULT_TOLERANCES[metric]))

    rows = compare_rows(trials, prediction, head["config"]["regime"], tol)
    return {
        "rows": rows,
        "pass": all(r["pass"] for r in rows),
        "trials": len(trials),
        "regime": head["config"]["regime"],
    }
