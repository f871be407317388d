"""The deformation y -> exp(l(y)) y between slices X_f and X_k, k = exp(-l) f.

The induced metrics satisfy g^k(L_* U, L_* V) = exp(2 l) g^f(U, V); the
functions here compute both sides and run seeded campaigns over the identity.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .ambient import Signature, as_vector, inner
from .errors import ContractViolation, DomainExhaustedError, OutOfDomainError
from .homogeneous import HomogeneousFn, compose_k
from .reports import VerificationReport, run_trials, summarize
from .slices import PLANE_TOL, SliceChart, SlicePoint, check_tangent, slice_curve

__all__ = [
    "Deformation",
    "lambda_map",
    "lambda_pushforward",
    "weyl_residual",
    "transported_pushforward",
    "deformed_chart",
    "pushforward_rows",
    "deformation_campaign",
    "sample_chart_point",
    "WEYL_TOL",
]

WEYL_TOL = 1e-9
TRANSPORT_STEP = 1e-5
MAX_ATTEMPTS = 100


@dataclass(frozen=True)
class Deformation:
    f: HomogeneousFn
    l: HomogeneousFn
    k: HomogeneousFn = field(default=None)

    def __post_init__(self):
        if self.k is None:
            object.__setattr__(self, "k", compose_k(self.f, self.l))

    def scale(self, y) -> float:
        """exp(l(y))."""
        return math.exp(self.l(y))

    def raw_map(self, y) -> np.ndarray:
        return math.exp(float(self.l.func(y))) * np.asarray(y, dtype=float)


def _source_point(d: Deformation, p: SlicePoint) -> SlicePoint:
    if p.h is d.f:
        return p
    if abs(d.f(p.y) - 1.0) > PLANE_TOL:
        raise ContractViolation("point is not on the source slice f = 1")
    return SlicePoint(p.y, d.f)


def lambda_map(d: Deformation, p: SlicePoint) -> SlicePoint:
    p = _source_point(d, p)
    if not d.l.contains(p.y):
        raise OutOfDomainError(f"{d.l.name} undefined at {p.y}")
    return SlicePoint(d.scale(p.y) * p.y, d.k)


def lambda_pushforward(d: Deformation, p: SlicePoint, V) -> np.ndarray:
    """exp(l) (V + dl(V) y): the push-forward of a tangent vector of X_f."""
    p = _source_point(d, p)
    V = as_vector(V, Signature(p.n))
    check_tangent(p, V)
    dl = d.l.differential(p.y)
    return d.scale(p.y) * (V + float(dl @ V) * p.y)


def pushforward_rows(d: Deformation, y: np.ndarray, T: np.ndarray) -> np.ndarray:
    dl = d.l.differential(y)
    return d.scale(y) * (T + np.outer(T @ dl, y))


def weyl_residual(d: Deformation, p: SlicePoint, U, V) -> float:
    """eta(L_* U, L_* V) - exp(2 l) eta(U, V); identically zero in exact arithmetic."""
    p = _source_point(d, p)
    lu = lambda_pushforward(d, p, U)
    lv = lambda_pushforward(d, p, V)
    return inner(lu, lv) - d.scale(p.y) ** 2 * inner(U, V)


def transported_pushforward(d: Deformation, p: SlicePoint, V, step: float = TRANSPORT_STEP) -> np.ndarray:
    """Push-forward by central differences of the deformation along a slice curve."""
    p = _source_point(d, p)
    c = slice_curve(p, V)
    return (d.raw_map(c(step)) - d.raw_map(c(-step))) / (2.0 * step)


def deformed_chart(d: Deformation, chart: SliceChart) -> SliceChart:
    """Chart of X_k obtained by pushing a chart of X_f through the deformation."""
    if chart.h is not d.f:
        raise ContractViolation("chart must parametrize the source slice of the deformation")

    def contains(x):
        return chart.contains(x) and d.l.contains(chart.point_map(x))

    def point_map(x):
        return d.raw_map(chart.point_map(x))

    def tangent_map(x):
        return pushforward_rows(d, chart.point_map(x), np.asarray(chart.tangent_map(x), dtype=float))

    return SliceChart(chart.n, d.k, point_map, tangent_map, contains, chart.radius, name=f"W[{chart.name}]")


def sample_chart_point(chart: SliceChart, rng: np.random.Generator, accept=None) -> np.ndarray:
    """Uniform draw from the chart's sampling box, rejected into its domain."""
    for _ in range(MAX_ATTEMPTS):
        x = chart.sample(rng)
        if chart.contains(x) and (accept is None or accept(x)):
            return x
    raise DomainExhaustedError(f"{chart.name}: no admissible point in {MAX_ATTEMPTS} draws")


def _weyl_trial(d: Deformation, chart: SliceChart):
    def trial(rng, _index):
        x = sample_chart_point(chart, rng, lambda x: d.l.contains(chart.point_map(x)))
        p = SlicePoint(chart.point_map(x), d.f)
        T = np.asarray(chart.tangent_map(x), dtype=float)
        U = rng.standard_normal(chart.n) @ T
        V = rng.standard_normal(chart.n) @ T
        ref = d.scale(p.y) ** 2 * inner(U, V)
        return abs(weyl_residual(d, p, U, V)) / max(1.0, abs(ref))

    return trial


def deformation_campaign(
    d: Deformation,
    chart: SliceChart,
    trials: int,
    seed: int,
    tolerance: float = WEYL_TOL,
    workers: int = 1,
    params: dict | None = None,
) -> VerificationReport:
    """Seeded random (x, U, V) checks of the metric relation on a chart of X_f.

    Residuals are scaled by max(1, |exp(2l) eta(U, V)|).
    """
    if trials < 1:
        raise ContractViolation("trials must be >= 1")
    if chart.h is not d.f:
        raise ContractViolation("chart must parametrize the source slice of the deformation")
    started = time.perf_counter()
    residuals = run_trials(_weyl_trial(d, chart), trials, seed, workers)
    return summarize("weyl", residuals, tolerance, seed, started, params)
