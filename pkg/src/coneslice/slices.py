"""Slices X_h of the null cone by level sets h = 1 of degree-one functions.

Charts are the numerical handle on these coordinate-free manifolds: a chart
maps x in R^n to ambient points on X_h and exposes the coordinate tangent
vectors, from which induced metrics and curvature follow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ambient import Signature, as_vector, cone_constraint, inner, lower_index
from .errors import (
    ContractViolation,
    DegenerateMetricError,
    DegeneratePointError,
    OutOfDomainError,
    ProjectionUndefinedError,
)
from .homogeneous import POSITIVITY_FLOOR, HomogeneousFn, linear_form

__all__ = [
    "SlicePoint",
    "SliceChart",
    "MetricSample",
    "slice_residuals",
    "ray_project",
    "tangent_basis",
    "induced_metric",
    "metric_signature",
    "slice_curve",
    "ds_graph_chart",
    "minkowski_null_chart",
    "scalar_curvature",
    "curvature_from_metric",
    "CONE_TOL",
    "PLANE_TOL",
    "TANGENT_TOL",
]

CONE_TOL = 1e-9
PLANE_TOL = 1e-9
TANGENT_TOL = 1e-9
CURVATURE_REL_STEP = 1e-3
MAX_CONDITION = 1e10


def slice_residuals(y, h: HomogeneousFn) -> tuple[float, float]:
    """(C(y), h(y) - 1)."""
    y = as_vector(y)
    return cone_constraint(y), h(y) - 1.0


@dataclass(frozen=True)
class SlicePoint:
    y: np.ndarray
    h: HomogeneousFn = field(repr=False)

    def __post_init__(self):
        y = as_vector(self.y)
        y.setflags(write=False)
        object.__setattr__(self, "y", y)
        c, r = slice_residuals(y, self.h)
        scale = max(1.0, float(np.max(np.abs(y))) ** 2)
        if abs(c) > CONE_TOL * scale:
            raise ContractViolation(f"point is off the null cone: C = {c:.3e}")
        if abs(r) > PLANE_TOL:
            raise ContractViolation(f"point is off the level set {self.h.name} = 1: residual {r:.3e}")

    @property
    def n(self) -> int:
        return len(self.y) - 2


def ray_project(y, h: HomogeneousFn) -> SlicePoint:
    """Send a cone point along its ray to the level set h = 1."""
    y = as_vector(y)
    scale = max(1.0, float(np.max(np.abs(y))) ** 2)
    if abs(cone_constraint(y)) > CONE_TOL * scale:
        raise ContractViolation("ray projection needs a point on the null cone")
    if not h.contains(y):
        raise ProjectionUndefinedError(f"{h.name} undefined at {y}")
    hy = h(y)
    if hy <= POSITIVITY_FLOOR:
        raise ProjectionUndefinedError(f"{h.name}(y) = {hy:.3e} <= 0, the ray misses the slice")
    return SlicePoint(y / hy, h)


def tangent_basis(p: SlicePoint) -> np.ndarray:
    """Rows span {V : eta(y, V) = 0, dh_y(V) = 0}, Euclidean-orthonormal."""
    y = p.y
    constraints = np.vstack([lower_index(y), p.h.differential(y)])
    _, s, vt = np.linalg.svd(constraints)
    if s[0] == 0.0 or s[1] / s[0] < 1e-12:
        raise DegeneratePointError(f"cone and level-set constraints are dependent at {y}")
    return vt[2:].copy()


def _tangency_scale(y, V) -> float:
    return max(1.0, float(np.max(np.abs(y)))) * max(1.0, float(np.max(np.abs(V))))


def check_tangent(p: SlicePoint, V, tol: float = TANGENT_TOL) -> None:
    V = as_vector(V)
    scale = _tangency_scale(p.y, V)
    r_cone = inner(p.y, V)
    r_level = float(p.h.differential(p.y) @ V)
    if abs(r_cone) > tol * scale or abs(r_level) > tol * scale:
        raise ContractViolation(
            f"vector not tangent to the slice: eta(y,V) = {r_cone:.3e}, dh(V) = {r_level:.3e}"
        )


@dataclass(frozen=True)
class MetricSample:
    x: np.ndarray | None
    G: np.ndarray

    def to_dict(self) -> dict:
        return {
            "x": None if self.x is None else [float(v) for v in self.x],
            "G": [[float(v) for v in row] for row in self.G],
        }

    def to_json(self) -> str:
        from .reports import dumps

        return dumps(self.to_dict())

    def csv_header(self) -> list[str]:
        n = self.G.shape[0]
        xs = [f"x{i}" for i in range(n)]
        return xs + [f"G{i}{j}" for i in range(n) for j in range(i, n)]

    def csv_row(self) -> list[float]:
        n = self.G.shape[0]
        x = list(self.x) if self.x is not None else [math.nan] * n
        return [float(v) for v in x] + [float(self.G[i, j]) for i in range(n) for j in range(i, n)]


def metric_signature(G, rtol: float = 1e-12) -> tuple[int, int]:
    """(#positive, #negative) eigenvalues of a symmetric matrix."""
    ev = np.linalg.eigvalsh(np.asarray(G, dtype=float))
    cut = rtol * max(1.0, float(np.max(np.abs(ev))))
    return int(np.sum(ev > cut)), int(np.sum(ev < -cut))


def induced_metric(p: SlicePoint, basis, x=None) -> MetricSample:
    """Gram matrix eta(V_i, V_j) of tangent vectors (rows of ``basis``)."""
    B = np.asarray(basis, dtype=float)
    for V in B:
        check_tangent(p, V)
    G = B @ (Signature(p.n).diag[:, None] * B.T)
    G = 0.5 * (G + G.T)
    return MetricSample(None if x is None else np.asarray(x, dtype=float), G)


def slice_curve(p: SlicePoint, V) -> Callable[[float], np.ndarray]:
    """A curve c on X_h with c(0) = p and c'(0) = V, for tangent V.

    The straight line y + tV is pulled back onto the cone by rescaling its
    (0, n+1) timelike block to match the spacelike block, then ray projected
    onto h = 1.  Both corrections are first-order silent when V is tangent.
    """
    y = p.y
    V = np.asarray(V, dtype=float)
    n = p.n
    pos = np.zeros(n + 2, dtype=bool)
    pos[0] = pos[n + 1] = True
    h = p.h

    def c(t: float) -> np.ndarray:
        z = y + t * V
        ratio = np.linalg.norm(z[~pos]) / np.linalg.norm(z[pos])
        z = np.where(pos, ratio * z, z)
        return z / float(h.func(z))

    return c


@dataclass(frozen=True)
class SliceChart:
    """Local parametrization x -> y of a slice.

    ``tangent_map(x)`` returns an (n, n+2) array whose rows are dy/dx^i.
    ``radius`` is the half-width of the box that random sampling draws from.
    """

    n: int
    h: HomogeneousFn
    point_map: Callable
    tangent_map: Callable
    contains: Callable
    radius: float = 1.0
    name: str = "chart"

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ContractViolation(f"chart coordinates must have shape ({self.n},), got {x.shape}")
        if not (np.all(np.isfinite(x)) and self.contains(x)):
            raise OutOfDomainError(f"{self.name}: x outside chart domain: {x}")
        return x

    def point(self, x) -> SlicePoint:
        return SlicePoint(self.point_map(self._check(x)), self.h)

    def tangent(self, x, i: int) -> np.ndarray:
        return self.tangent_map(self._check(x))[i]

    def tangents(self, x) -> np.ndarray:
        return np.asarray(self.tangent_map(self._check(x)), dtype=float)

    def metric(self, x) -> MetricSample:
        x = self._check(x)
        return induced_metric(self.point(x), self.tangents(x), x)

    def gram(self, x) -> np.ndarray:
        """Metric matrix without tangency checks; the curvature stencil hot path."""
        T = np.asarray(self.tangent_map(self._check(x)), dtype=float)
        G = T @ (Signature(self.n).diag[:, None] * T.T)
        return 0.5 * (G + G.T)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-self.radius, self.radius, self.n)


def _minkowski_q(x):
    return x[0] * x[0] - np.dot(x[1:], x[1:])


def ds_graph_chart(n: int, H: float = 1.0, s: int = 1) -> SliceChart:
    """de Sitter slice H y^{n+1} = 1 as a graph over (y^0, ..., y^{n-1}).

    y^n = s sqrt(q(x) + H^-2) with q the Minkowski square of x.
    """
    if not H > 0:
        raise ContractViolation("H must be positive")
    if s not in (1, -1):
        raise ContractViolation("branch sign must be +1 or -1")
    Signature(n)
    eta_x = -np.ones(n)
    eta_x[0] = 1.0
    inv_h2 = 1.0 / (H * H)
    f = linear_form(np.eye(n + 2)[n + 1] * H, name=f"{H:g}*y^{n + 1}")

    def contains(x):
        return _minkowski_q(x) + inv_h2 > 0.0

    def point_map(x):
        root = math.sqrt(_minkowski_q(x) + inv_h2)
        return np.concatenate([x, [s * root, 1.0 / H]])

    def tangent_map(x):
        root = math.sqrt(_minkowski_q(x) + inv_h2)
        T = np.zeros((n, n + 2))
        T[:, :n] = np.eye(n)
        T[:, n] = s * eta_x * x / root
        return T

    return SliceChart(n, f, point_map, tangent_map, contains, radius=1.5 / H, name=f"dS(n={n},H={H:g})")


def minkowski_null_chart(n: int, H: float = 1.0) -> SliceChart:
    """Flat slice H (y^n + y^{n+1}) / 2 = 1, globally parametrized by x in R^n."""
    if not H > 0:
        raise ContractViolation("H must be positive")
    Signature(n)
    eta_x = -np.ones(n)
    eta_x[0] = 1.0
    w = np.zeros(n + 2)
    w[n] = w[n + 1] = H / 2.0
    f = linear_form(w, name=f"{H:g}*(y^{n}+y^{n + 1})/2")

    def point_map(x):
        q = _minkowski_q(x)
        return np.concatenate([x, [1.0 / H + H * q / 4.0, 1.0 / H - H * q / 4.0]])

    def tangent_map(x):
        dq = 2.0 * eta_x * x
        T = np.zeros((n, n + 2))
        T[:, :n] = np.eye(n)
        T[:, n] = H * dq / 4.0
        T[:, n + 1] = -H * dq / 4.0
        return T

    return SliceChart(n, f, point_map, tangent_map, lambda x: True, radius=1.5 / H, name=f"null(n={n},H={H:g})")


def curvature_from_metric(G, dG, ddG) -> float:
    """Ricci scalar from the metric and its first and second partial derivatives.

    dG[k, i, j] = d_k G_ij, ddG[k, l, i, j] = d_k d_l G_ij.  Conventions:
    R^r_{smv} = d_m Gamma^r_{vs} - d_v Gamma^r_{ms} + Gamma^r_{ml} Gamma^l_{vs}
    - Gamma^r_{vl} Gamma^l_{ms}, Ricci_{sv} = R^r_{srv}.  With the mostly-minus
    metric this makes de Sitter come out with R = -n(n-1)H^2.
    """
    if np.linalg.cond(G) > MAX_CONDITION:
        raise DegenerateMetricError("metric is singular to working precision")
    Ginv = np.linalg.inv(G)
    # Christoffel symbols of the first kind, c[m, j, k] = Gamma_{m jk}
    c = 0.5 * (np.einsum("jmk->mjk", dG) + np.einsum("kmj->mjk", dG) - dG)
    gamma = np.einsum("im,mjk->ijk", Ginv, c)
    dc = 0.5 * (
        np.einsum("ljmk->lmjk", ddG) + np.einsum("lkmj->lmjk", ddG) - ddG
    )
    dGinv = -np.einsum("ia,lab,bm->lim", Ginv, dG, Ginv)
    dgamma = np.einsum("lim,mjk->lijk", dGinv, c) + np.einsum("im,lmjk->lijk", Ginv, dc)
    riemann = (
        np.einsum("mrvs->rsmv", dgamma)
        - np.einsum("vrms->rsmv", dgamma)
        + np.einsum("rml,lvs->rsmv", gamma, gamma)
        - np.einsum("rvl,lms->rsmv", gamma, gamma)
    )
    ricci = np.einsum("rsrv->sv", riemann)
    return float(np.einsum("sv,sv->", Ginv, ricci))


def _curvature_at_step(gram: Callable, x: np.ndarray, h: float) -> float:
    n = x.shape[0]
    G0 = gram(x)
    E = np.eye(n) * h
    plus = [gram(x + E[k]) for k in range(n)]
    minus = [gram(x - E[k]) for k in range(n)]
    dG = np.array([(plus[k] - minus[k]) / (2.0 * h) for k in range(n)])
    ddG = np.empty((n, n, n, n))
    for k in range(n):
        ddG[k, k] = (plus[k] - 2.0 * G0 + minus[k]) / (h * h)
        for l in range(k + 1, n):
            mixed = (
                gram(x + E[k] + E[l])
                - gram(x + E[k] - E[l])
                - gram(x - E[k] + E[l])
                + gram(x - E[k] - E[l])
            ) / (4.0 * h * h)
            ddG[k, l] = ddG[l, k] = mixed
    return curvature_from_metric(G0, dG, ddG)


def scalar_curvature(chart: SliceChart, x, rel_step: float = CURVATURE_REL_STEP) -> float:
    """Ricci scalar of the induced metric by finite differences of the chart metric.

    Second-order central stencils at step h = rel_step * max(1, |x|_inf) and
    h/2, combined by one Richardson step.
    """
    x = chart._check(x)
    h = rel_step * max(1.0, float(np.max(np.abs(x))))
    # stencil margin: every +-h, +-h corner in every coordinate pair must be in the domain
    n = chart.n
    for k in range(n):
        for sk in (-1.0, 1.0):
            for l in range(n):
                for sl in (-1.0, 1.0):
                    z = x.copy()
                    z[k] += sk * h
                    z[l] += sl * h
                    if not chart.contains(z):
                        raise OutOfDomainError(f"{chart.name}: curvature stencil leaves the domain at {x}")
    coarse = _curvature_at_step(chart.gram, x, h)
    fine = _curvature_at_step(chart.gram, x, h / 2.0)
    return (4.0 * fine - coarse) / 3.0

