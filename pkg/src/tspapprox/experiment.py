"""Approximation-ratio experiments over seeded instance families."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .errors import InputError
from .generate import FAMILIES, generate, trial_seed
from .instance import GeneralInstance
from .oracle import DP_MAX_VERTICES, exact_tsp, problem_b_lower_bound
from .pipeline import solve_problem_a, solve_problem_b

TIMING_STAGES = ("mst", "matching", "euler", "shortcut")


@dataclass(frozen=True)
class ExperimentConfig:
    n_min: int
    n_max: int
    trials: int
    seed: int
    family: str = "euclidean-unit-square"
    oracle: bool = True
    timings: bool = False
    jobs: int = 1

    def __post_init__(self):
        if not 3 <= self.n_min <= self.n_max:
            raise InputError(f"need 3 <= n_min <= n_max, got {self.n_min}..{self.n_max}")
        if self.oracle and self.n_max > DP_MAX_VERTICES:
            raise InputError(f"oracle ratios need n_max <= {DP_MAX_VERTICES}")
        if self.trials < 1:
            raise InputError("trials must be positive")
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class TrialResult:
    n: int
    trial: int
    seed: int
    weight: float
    oracle_weight: Optional[float]
    timings_ms: dict

    @property
    def ratio(self) -> Optional[float]:
        return None if self.oracle_weight is None else self.weight / self.oracle_weight


def run_trial(family: str, n: int, trial: int, seed: int, oracle: bool) -> TrialResult:
    inst = generate(family, n, seed)
    if isinstance(inst, GeneralInstance):
        report = solve_problem_b(inst)
        opt = problem_b_lower_bound(inst) if oracle else None
    else:
        report = solve_problem_a(inst)
        opt = exact_tsp(inst).weight if oracle else None
    return TrialResult(n, trial, seed, report.weight, opt, report.timings_ms)


def _run_task(args):
    return run_trial(*args)


def run_experiment(cfg: ExperimentConfig) -> list[TrialResult]:
    """One result per (n, trial), ordered by n then trial index."""
    tasks = [
        (cfg.family, n, t, trial_seed(cfg.seed, n, t), cfg.oracle)
        for n in range(cfg.n_min, cfg.n_max + 1)
        for t in range(cfg.trials)
    ]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_run_task, tasks, chunksize=8))
    return [run_trial(*t) for t in tasks]


def _num(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def results_csv(results: list[TrialResult], timings: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["n", "trial", "seed", "weight", "oracle_weight", "ratio"]
    if timings:
        header += [f"t_{s}_ms" for s in TIMING_STAGES]
    writer.writerow(header)
    for r in results:
        row = [r.n, r.trial, r.seed, _num(r.weight), _num(r.oracle_weight), _num(r.ratio)]
        if timings:
            row += [_num(r.timings_ms.get(s)) for s in TIMING_STAGES]
        writer.writerow(row)
    return buf.getvalue()


def summarize(results: list[TrialResult]) -> dict:
    ratios = [r.ratio for r in results if r.ratio is not None]
    return {
        "count": len(results),
        "max_ratio": max(ratios) if ratios else None,
        "mean_ratio": sum(ratios) / len(ratios) if ratios else None,
    }
