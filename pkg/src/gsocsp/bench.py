"""Multi-seed benchmark runs, trace files and summary tables."""
from __future__ import annotations

import csv
import io
import os
import statistics
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .baselines import PsoParams, solve_backtracking, solve_pso, solve_standard_gso
from .exceptions import ConfigurationError
from .gso import GsoParams
from .instances import load, load_bundled
from .network import ConstraintNetwork
from .solver import ConvergenceTrace, StopCriterion, TraceRow, solve

ALGORITHMS = ("apm-cpgso", "gso", "pso", "backtrack")
OUT_DIR_ENV = "GSOCSP_OUT_DIR"

SUMMARY_FIELDS = (
    "algorithm",
    "instance",
    "seeds_run",
    "success_rate",
    "max_best_fitness",
    "mean_best_fitness",
    "median_iterations_to_first_solution",
    "mean_wall_ms",
    "solutions_found",
)


def parse_seeds(text: str) -> list:
    """``a..b`` (inclusive), ``a,b,c`` or a single integer."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            seeds = list(range(int(lo), int(hi) + 1))
        else:
            seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise ConfigurationError(f"bad seed list {text!r}") from None
    if not seeds:
        raise ConfigurationError(f"seed list {text!r} is empty")
    return seeds


def _coerce(name: str, raw: str, target):
    for f in fields(target):
        if f.name == name:
            break
    else:
        raise ConfigurationError(f"unknown parameter {name!r} for {target.__name__}")
    default = getattr(target(), name)
    kind = type(default) if default is not None else float
    try:
        if kind is bool:
            if raw.lower() not in ("true", "false", "1", "0"):
                raise ValueError(raw)
            return raw.lower() in ("true", "1")
        return kind(raw)
    except ValueError:
        raise ConfigurationError(f"parameter {name}={raw!r} is not a valid {kind.__name__}") from None


def parse_params(text: Optional[str], target) -> dict:
    """Type-check ``key=val,...`` overrides against a params dataclass."""
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        key, sep, raw = item.partition("=")
        if not sep:
            raise ConfigurationError(f"parameter override {item!r} is not key=value")
        out[key.strip()] = _coerce(key.strip(), raw.strip(), target)
    return out


def resolve_instance(ref: str) -> ConstraintNetwork:
    """A file path, or the name of a bundled corpus instance."""
    if os.path.exists(ref):
        return load(ref)
    return load_bundled(ref)


@dataclass
class RunConfig:
    instance: str
    algorithm: str = "apm-cpgso"
    seeds: list = field(default_factory=lambda: [0])
    stop: StopCriterion = field(default_factory=StopCriterion)
    max_iters: int = 100
    pop_size: Optional[int] = None
    scrounger_prob: Optional[float] = None
    eta: Optional[float] = None
    params: dict = field(default_factory=dict)
    out_dir: Optional[str] = None
    jobs: int = 1

    def validate(self) -> "RunConfig":
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}; pick one of {', '.join(ALGORITHMS)}")
        if not self.seeds:
            raise ConfigurationError("no seeds given")
        if self.max_iters < 1:
            raise ConfigurationError("max_iters must be >= 1")
        if self.jobs < 1:
            raise ConfigurationError("jobs must be >= 1")
        self.solver_params(self.seeds[0])
        return self

    def solver_params(self, seed: int):
        if self.algorithm in ("apm-cpgso", "gso"):
            base = {"max_iters": self.max_iters, "rng_seed": seed}
            if self.pop_size is not None:
                base["pop_size"] = self.pop_size
            if self.scrounger_prob is not None:
                base["scrounger_prob"] = self.scrounger_prob
            if self.eta is not None:
                base["mutation_eta"] = self.eta
            try:
                return GsoParams(**{**base, **self.params}).validate()
            except TypeError as exc:
                raise ConfigurationError(str(exc)) from None
        if self.algorithm == "pso":
            if self.scrounger_prob is not None or self.eta is not None:
                raise ConfigurationError("--scrounger-prob and --eta do not apply to pso")
            base = {"max_iters": self.max_iters, "rng_seed": seed}
            if self.pop_size is not None:
                base["pop_size"] = self.pop_size
            try:
                return PsoParams(**{**base, **self.params}).validate()
            except TypeError as exc:
                raise ConfigurationError(str(exc)) from None
        return None


def params_class(algorithm: str):
    return PsoParams if algorithm == "pso" else GsoParams


@dataclass
class RunRecord:
    seed: int
    trace: ConvergenceTrace
    solutions: int
    stop_reason: str


def run_one(network: ConstraintNetwork, config: RunConfig, seed: int) -> RunRecord:
    algo = config.algorithm
    if algo == "backtrack":
        t0 = time.perf_counter()
        found = solve_backtracking(network)
        ms = int((time.perf_counter() - t0) * 1000)
        # no fitness landscape here: 0 when satisfiable, else 1 (a lower bound on the optimum)
        best = 0 if found.solutions else 1
        trace = ConvergenceTrace([TraceRow(0, best, float(best), len(found.solutions), ms)])
        return RunRecord(seed, trace, len(found.solutions), "exhausted")
    params = config.solver_params(seed)
    solver = {"apm-cpgso": solve, "gso": solve_standard_gso, "pso": solve_pso}[algo]
    result = solver(network, params, config.stop)
    return RunRecord(seed, result.trace, len(result.solutions), result.stop_reason.value)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def trace_path(out_dir, algorithm: str, instance: str, seed: int) -> Path:
    return Path(out_dir) / f"trace_{algorithm}_{instance}_s{seed}.csv"


def summary_path(out_dir, algorithm: str, instance: str) -> Path:
    return Path(out_dir) / f"summary_{algorithm}_{instance}.csv"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def summarize(algorithm: str, instance: str, traces: list) -> dict:
    """Aggregate one row of the summary table from per-seed traces."""
    finals = [t.rows[-1] for t in traces if t.rows]
    best = [r.best_fitness for r in finals]
    firsts = []
    for t in traces:
        hit = next((r.iteration for r in t.rows if r.solutions_found >= 1), None)
        if hit is not None:
            firsts.append(hit)
    return {
        "algorithm": algorithm,
        "instance": instance,
        "seeds_run": len(traces),
        "success_rate": len(firsts) / len(traces) if traces else 0.0,
        "max_best_fitness": max(best) if best else None,
        "mean_best_fitness": float(np.mean(best)) if best else None,
        "median_iterations_to_first_solution": float(statistics.median(firsts)) if firsts else None,
        "mean_wall_ms": float(np.mean([r.elapsed_ms for r in finals])) if finals else None,
        "solutions_found": max((r.solutions_found for r in finals), default=0),
    }


def summary_csv(rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_FIELDS)
    for row in rows:
        writer.writerow([_fmt(row[k]) for k in SUMMARY_FIELDS])
    return buf.getvalue()


def read_summary(path) -> list:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _job(args):
    network, config, seed = args
    return run_one(network, config, seed)


def execute(config: RunConfig, network: Optional[ConstraintNetwork] = None) -> list:
    """Run every seed of ``config``; returns the :class:`RunRecord` list in seed order."""
    config.validate()
    network = network if network is not None else resolve_instance(config.instance)
    jobs = [(network, config, s) for s in config.seeds]
    if config.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            return list(pool.map(_job, jobs))
    return [_job(j) for j in jobs]


def instance_label(config: RunConfig, network: ConstraintNetwork) -> str:
    return network.name or Path(config.instance).stem


def run(config: RunConfig) -> dict:
    """Run ``config`` and write one trace CSV per seed plus a summary CSV.

    Returns the summary row.
    """
    network = resolve_instance(config.instance)
    config.validate()
    out_dir = Path(config.out_dir or os.environ.get(OUT_DIR_ENV, "runs"))
    label = instance_label(config, network)
    records = execute(config, network)
    for rec in records:
        _atomic_write(trace_path(out_dir, config.algorithm, label, rec.seed), rec.trace.to_csv())
    row = summarize(config.algorithm, label, [r.trace for r in records])
    _atomic_write(summary_path(out_dir, config.algorithm, label), summary_csv([row]))
    return row


def best_curve(trace: ConvergenceTrace, length: int) -> np.ndarray:
    """Best-so-far fitness per iteration, carried forward past an early stop."""
    values = [r.best_fitness for r in trace.rows]
    return np.array(values + [values[-1]] * (length - len(values)), dtype=float)


def convergence_table(runs: dict) -> list:
    """Long-format rows (algorithm, iteration, median, q25, q75) over seeds."""
    length = max((len(t) for traces in runs.values() for t in traces), default=0)
    rows = []
    for algo, traces in runs.items():
        curves = [best_curve(t, length) for t in traces if t.rows]
        if not curves:
            continue
        stack = np.vstack(curves)
        q25, med, q75 = np.percentile(stack, [25, 50, 75], axis=0)
        for it in range(length):
            rows.append((algo, it, float(med[it]), float(q25[it]), float(q75[it])))
    return rows


def convergence_csv(rows: list) -> str:
    lines = ["algorithm,iteration,median_best_fitness,q25,q75"]
    lines.extend(f"{a},{it},{m:.6f},{lo:.6f},{hi:.6f}" for a, it, m, lo, hi in rows)
    return "\n".join(lines) + "\n"


def comparison_table(summaries: list) -> str:
    """Max / Means / Running time columns, one row per algorithm."""
    lines = ["algorithm,max,means,running_time_ms"]
    for s in summaries:
        lines.append(
            f"{s['algorithm']},{_fmt(s['max_best_fitness'])},{_fmt(s['mean_best_fitness'])},{_fmt(s['mean_wall_ms'])}"
        )
    return "\n".join(lines) + "\n"


def compare(configs: list, out_dir=None) -> dict:
    """Run several algorithms on one instance with shared seeds and stop mode.

    Writes per-seed traces, ``convergence_<instance>.csv`` and
    ``table_<instance>.csv``. Returns ``{algorithm: summary_row}``.
    """
    if not configs:
        raise ConfigurationError("compare needs at least one algorithm")
    first = configs[0]
    for c in configs[1:]:
        if c.instance != first.instance:
            raise ConfigurationError("all compared runs must target the same instance")
        if c.stop != first.stop:
            raise ConfigurationError("all compared runs must share the stop criterion")
        if c.seeds != first.seeds:
            raise ConfigurationError("all compared runs must share their seeds")
    network = resolve_instance(first.instance)
    for c in configs:
        c.validate()
    out = Path(out_dir or first.out_dir or os.environ.get(OUT_DIR_ENV, "runs"))
    label = instance_label(first, network)
    runs, summaries = {}, []
    for c in configs:
        records = execute(c, network)
        for rec in records:
            _atomic_write(trace_path(out, c.algorithm, label, rec.seed), rec.trace.to_csv())
        runs[c.algorithm] = [r.trace for r in records]
        summaries.append(summarize(c.algorithm, label, runs[c.algorithm]))
    _atomic_write(out / f"convergence_{label}.csv", convergence_csv(convergence_table(runs)))
    _atomic_write(out / f"table_{label}.csv", comparison_table(summaries))
    _atomic_write(out / f"summary_compare_{label}.csv", summary_csv(summaries))
    return {s["algorithm"]: s for s in summaries}


def with_algorithm(config: RunConfig, algorithm: str) -> RunConfig:
    return replace(config, algorithm=algorithm, params=dict(config.params))
