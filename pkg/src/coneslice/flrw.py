"""Standard slices, FLRW spaces as deformed de Sitter slices, osculating slices."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .ambient import Signature, inner, raise_index
from .embedding import Deformation, pushforward_rows, deformed_chart
from .errors import ContractViolation, OutOfDomainError
from .homogeneous import (
    HomogeneousFn,
    ScaleFactor,
    compose_k,
    extend_scale_factor,
    linear_form,
    parse_scale_factor,
)
from .slices import SliceChart, SlicePoint, ds_graph_chart

__all__ = [
    "SliceKind",
    "StandardSlice",
    "FlrwSpace",
    "OsculatingResult",
    "standard_slice",
    "build_flrw",
    "flrw_metric_residual",
    "osculating_slice",
    "NULL_BAND",
]

# |normSq| below this is classified as null
NULL_BAND = 1e-10


class SliceKind(str, Enum):
    DE_SITTER = "deSitter"
    ANTI_DE_SITTER = "antiDeSitter"
    MINKOWSKI_NULL = "minkowskiNull"


@dataclass(frozen=True)
class StandardSlice:
    kind: SliceKind
    n: int
    H: float
    f: HomogeneousFn

    @property
    def gradient_norm_sq(self) -> float:
        K = raise_index(self.f.differential(np.zeros(self.n + 2)))
        return inner(K, K)


def standard_slice(kind, n: int, H: float = 1.0) -> StandardSlice:
    """H y^{n+1} (de Sitter), H y^n (anti de Sitter) or H (y^n + y^{n+1}) / 2 (flat)."""
    kind = SliceKind(kind)
    if not H > 0:
        raise ContractViolation("H must be positive")
    Signature(n)
    w = np.zeros(n + 2)
    if kind is SliceKind.DE_SITTER:
        w[n + 1] = H
        name = f"{H:g}*y^{n + 1}"
    elif kind is SliceKind.ANTI_DE_SITTER:
        w[n] = H
        name = f"{H:g}*y^{n}"
    else:
        w[n] = w[n + 1] = H / 2.0
        name = f"{H:g}*(y^{n}+y^{n + 1})/2"
    return StandardSlice(kind, n, float(H), linear_form(w, name=name))


@dataclass(frozen=True)
class FlrwSpace:
    base: StandardSlice
    a: ScaleFactor
    l: HomogeneousFn
    k: HomogeneousFn
    deformation: Deformation
    chart: SliceChart
    w_chart: SliceChart

    @property
    def n(self) -> int:
        return self.base.n


def build_flrw(a, n: int, H: float = 1.0, branch: int = 1) -> FlrwSpace:
    """The space W = exp(l) Sigma with induced metric exp(2a) g_dS.

    ``a`` is a ScaleFactor or a spec string (``zero``, ``const:c``, ``power:p``).
    """
    if isinstance(a, str):
        a = parse_scale_factor(a, n, H)
    base = standard_slice(SliceKind.DE_SITTER, n, H)
    chart = ds_graph_chart(n, H, branch)
    # the chart already carries an equivalent linear form; share the object so
    # chart points validate against the deformation's source slice
    f = chart.h
    l = extend_scale_factor(a, f)
    k = compose_k(f, l)
    d = Deformation(f, l, k)
    return FlrwSpace(base, a, l, k, d, chart, deformed_chart(d, chart))


def flrw_metric_residual(space: FlrwSpace, x) -> float:
    """max |G_W - exp(2 a) G_dS| entrywise, both in the dS chart coordinates."""
    chart = space.chart
    p = chart.point(x)
    if not space.a.contains(p.y):
        raise OutOfDomainError(f"scale factor {space.a.name} undefined at {p.y}")
    G_ds = chart.metric(x).G
    T_w = pushforward_rows(space.deformation, p.y, chart.tangents(x))
    G_w = T_w @ (Signature(space.n).diag[:, None] * T_w.T)
    return float(np.max(np.abs(G_w - np.exp(2.0 * space.a(p.y)) * G_ds)))


@dataclass(frozen=True)
class OsculatingResult:
    K: np.ndarray
    normSq: float
    classification: str
    fLocal: HomogeneousFn

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "normSq": self.normSq,
            "K": [float(v) for v in self.K],
        }


def _classify(norm_sq: float) -> str:
    if abs(norm_sq) <= NULL_BAND:
        return "null"
    return SliceKind.DE_SITTER.value if norm_sq > 0 else SliceKind.ANTI_DE_SITTER.value


def osculating_slice(k: HomogeneousFn, y_o: SlicePoint) -> OsculatingResult:
    """Linear slice tangent to X_k at y_o, classified by the eta-norm of grad k.

    fLocal(y) = dk_{y_o}(y); by the Euler identity it equals 1 at y_o.
    """
    if k.degree != 1:
        raise ContractViolation("osculating slices need a degree-one function")
    p = y_o if y_o.h is k else SlicePoint(y_o.y, k)
    dk = k.differential(p.y)
    K = raise_index(dk)
    norm_sq = inner(K, K)
    return OsculatingResult(K, norm_sq, _classify(norm_sq), linear_form(dk, name=f"osc[{k.name}]"))
