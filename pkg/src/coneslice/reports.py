"""Verification reports, deterministic trial fan-out, and 17-digit JSON output."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = ["VerificationReport", "trial_rng", "run_trials", "summarize", "dumps", "format_float", "to_csv"]


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return f"{x:.17g}"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float printed to 17 significant digits.

    Key order is insertion order, so equal inputs give byte-identical text.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Per-trial generator keyed on (seed, index): independent of execution order."""
    return np.random.default_rng([int(seed), int(index)])


def run_trials(trial: Callable, trials: int, seed: int, workers: int = 1) -> list:
    """Evaluate ``trial(rng, index)`` for every index, results in index order."""
    def one(i):
        return trial(trial_rng(seed, i), i)

    if workers <= 1:
        return [one(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(trials)))


@dataclass
class VerificationReport:
    campaign: str
    trials: int
    max_residual: float
    mean_residual: float
    failures: int
    tolerance: float
    seed: int
    rejections: int = 0
    wall_time_seconds: float = 0.0
    params: dict = field(default_factory=dict)
    residuals: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "campaign": self.campaign,
            "trials": self.trials,
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "failures": self.failures,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "rejections": self.rejections,
        }
        if self.params:
            d["params"] = dict(self.params)
        if timing:
            d["wall_time_seconds"] = self.wall_time_seconds
        return d

    def to_json(self, timing: bool = False) -> str:
        return dumps(self.to_dict(timing)) + "\n"

    def to_csv(self) -> str:
        rows = [[i, "" if r is None else float(r)] for i, r in enumerate(self.residuals)]
        return to_csv(["trial", "residual"], rows)


def summarize(
    campaign: str,
    residuals: list,
    tolerance: float,
    seed: int,
    started: float | None = None,
    params: dict | None = None,
) -> VerificationReport:
    """Aggregate per-trial residuals; ``None`` entries count as rejections."""
    accepted = [float(r) for r in residuals if r is not None]
    return VerificationReport(
        campaign=campaign,
        trials=len(residuals),
        max_residual=max(accepted, default=0.0),
        mean_residual=math.fsum(accepted) / len(accepted) if accepted else 0.0,
        failures=sum(1 for r in accepted if not r <= tolerance),
        tolerance=tolerance,
        seed=seed,
        rejections=len(residuals) - len(accepted),
        wall_time_seconds=0.0 if started is None else time.perf_counter() - started,
        params=params or {},
        residuals=list(residuals),
    )
