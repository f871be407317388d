"""Homogeneous functions on the ambient space and their differentials.

A :class:`HomogeneousFn` wraps a raw evaluator ``func``.  The evaluator must be
pure and written with numpy operations so that it accepts both float arrays
and object arrays of :class:`~coneslice.dual.Dual`; that is what makes the
default forward-mode differential work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ambient import Signature, as_vector
from .dual import gradient
from .errors import (
    ContractViolation,
    DifferentiationError,
    InconclusiveError,
    OutOfDomainError,
)

__all__ = [
    "HomogeneousFn",
    "ScaleFactor",
    "linear_form",
    "constant",
    "fd_differential",
    "check_homogeneity",
    "euler_residual",
    "compose_k",
    "extend_scale_factor",
    "parse_scale_factor",
    "conformal_time",
    "FD_REL_STEP",
    "POSITIVITY_FLOOR",
]

MODES = ("analytic", "dual", "fd")
FD_REL_STEP = 6e-6
# k <= this is treated as outside the working domain
POSITIVITY_FLOOR = 1e-12


def _everywhere(y) -> bool:
    return True


@dataclass(frozen=True)
class HomogeneousFn:
    degree: float
    func: Callable
    grad: Callable | None = None
    mode: str = "dual"
    domain: Callable = _everywhere
    name: str = "h"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ContractViolation(f"unknown differential mode {self.mode!r}")
        if self.mode == "analytic" and self.grad is None:
            raise ContractViolation("analytic mode needs a gradient mapping")

    def contains(self, y) -> bool:
        y = np.asarray(y, dtype=float)
        return bool(np.all(np.isfinite(y))) and bool(self.domain(y))

    def __call__(self, y) -> float:
        y = as_vector(y)
        if not self.contains(y):
            raise OutOfDomainError(f"{self.name}: point outside domain: {y}")
        return float(self.func(y))

    def differential(self, y, mode: str | None = None) -> np.ndarray:
        """Covector w with w @ V the directional derivative along V."""
        y = as_vector(y)
        if not self.contains(y):
            raise OutOfDomainError(f"{self.name}: point outside domain: {y}")
        mode = mode or self.mode
        if mode == "analytic":
            if self.grad is None:
                raise ContractViolation(f"{self.name} has no analytic differential")
            w = np.asarray(self.grad(y), dtype=float)
        elif mode == "dual":
            w = gradient(self.func, y)[1]
        elif mode == "fd":
            w = fd_differential(self, y)
        else:
            raise ContractViolation(f"unknown differential mode {mode!r}")
        if not np.all(np.isfinite(w)):
            raise DifferentiationError(f"{self.name}: non-finite differential at {y}")
        return w

    def with_name(self, name: str) -> "HomogeneousFn":
        return HomogeneousFn(self.degree, self.func, self.grad, self.mode, self.domain, name)


def linear_form(covector, name: str = "linear") -> HomogeneousFn:
    """Degree-one function y -> w . y with its exact (constant) differential."""
    w = np.array(covector, dtype=float)
    w.setflags(write=False)
    return HomogeneousFn(
        degree=1,
        func=lambda y: y @ w,
        grad=lambda y: w.copy(),
        mode="analytic",
        name=name,
    )


def constant(c: float = 0.0, name: str | None = None) -> HomogeneousFn:
    c = float(c)
    return HomogeneousFn(
        degree=0,
        func=lambda y: c,
        grad=lambda y: np.zeros(len(y)),
        mode="analytic",
        name=name or f"const({c:g})",
    )


def fd_differential(f: HomogeneousFn, y, rel_step: float = FD_REL_STEP) -> np.ndarray:
    """Central finite-difference differential, step rel_step * max(1, |y|_inf)."""
    y = np.asarray(y, dtype=float)
    h = rel_step * max(1.0, float(np.max(np.abs(y))))
    w = np.empty_like(y)
    for i in range(y.shape[0]):
        e = np.zeros_like(y)
        e[i] = h
        w[i] = (float(f.func(y + e)) - float(f.func(y - e))) / (2.0 * h)
    return w


def check_homogeneity(
    f: HomogeneousFn,
    samples: int,
    seed: int,
    n: int | None = None,
    sampler: Callable | None = None,
) -> float:
    """Largest sampled |f(t y) - t^d f(y)| / max(1, |t^d f(y)|).

    ``y`` is drawn from ``sampler(rng)`` if given, else a unit Gaussian in
    dimension n+2, rejected into the domain.  ``t`` is log-uniform on [0.1, 10].
    """
    if samples < 1:
        raise ContractViolation("samples must be >= 1")
    if sampler is None:
        if n is None:
            raise ContractViolation("need either n or a sampler")
        dim = Signature(n).dim
        sampler = lambda rng: rng.standard_normal(dim)  # noqa: E731
    rng = np.random.default_rng(seed)
    worst = 0.0
    used = 0
    for _ in range(100 * samples):
        if used == samples:
            break
        y = np.asarray(sampler(rng), dtype=float)
        t = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
        if not (f.contains(y) and f.contains(t * y)):
            continue
        used += 1
        ref = t**f.degree * f(y)
        worst = max(worst, abs(f(t * y) - ref) / max(1.0, abs(ref)))
    if used == 0:
        raise InconclusiveError(f"{f.name}: no sample landed in the domain")
    return worst


def euler_residual(f: HomogeneousFn, y, mode: str | None = None) -> float:
    y = as_vector(y)
    return float(f.differential(y, mode) @ y - f.degree * f(y))


def _probe_nonempty(domain: Callable, dim: int, tries: int = 2000) -> bool:
    rng = np.random.default_rng(0)
    for _ in range(tries):
        y = rng.standard_normal(dim)
        if domain(y):
            return True
    return False


def compose_k(f: HomogeneousFn, l: HomogeneousFn, dim: int | None = None) -> HomogeneousFn:
    """k = exp(-l) f, with dk = exp(-l) (df - f dl).

    The domain is the intersection of both domains, further restricted to
    k > POSITIVITY_FLOOR.  If ``dim`` is given the intersection is probed by
    sampling and an empty one raises OutOfDomainError.
    """
    if f.degree != 1 or l.degree != 0:
        raise ContractViolation(f"compose_k needs degrees (1, 0), got ({f.degree}, {l.degree})")

    def func(y):
        return np.exp(-l.func(y)) * f.func(y)

    def grad(y):
        el = math.exp(-float(l.func(y)))
        return el * (f.differential(y) - float(f.func(y)) * l.differential(y))

    def domain(y):
        return f.domain(y) and l.domain(y) and float(func(y)) > POSITIVITY_FLOOR

    if dim is not None and not _probe_nonempty(domain, dim):
        raise OutOfDomainError(f"domains of {f.name} and {l.name} do not overlap where k > 0")
    return HomogeneousFn(1, func, grad, "analytic", domain, name=f"exp(-{l.name})*{f.name}")


@dataclass(frozen=True)
class ScaleFactor:
    """A twice-differentiable function on slice points of the de Sitter slice.

    ``func`` gets the ambient coordinates of a point on the slice (for the
    graph chart, the first n entries are the chart coordinates) and must be
    Dual-compatible.
    """

    func: Callable
    contains: Callable = _everywhere
    name: str = "a"
    spec: str = ""

    def __call__(self, p) -> float:
        return float(self.func(np.asarray(p, dtype=float)))


def extend_scale_factor(a: ScaleFactor, f: HomogeneousFn) -> HomogeneousFn:
    """Degree-zero extension l(y) = a(y / f(y)) off the slice f = 1."""
    if f.degree != 1:
        raise ContractViolation("scale factor extension needs a degree-one slice function")

    def func(y):
        return a.func(y / f.func(y))

    def domain(y):
        if not f.domain(y):
            return False
        fy = float(f.func(y))
        return fy > POSITIVITY_FLOOR and bool(a.contains(y / fy))

    return HomogeneousFn(0, func, None, "dual", domain, name=f"ext({a.name})")


def conformal_time(p, H: float):
    """Flat-slicing conformal time of a de Sitter slice point.

    It is the time coordinate of p after ray projection onto the null slice
    H (y^n + y^{n+1}) / 2 = 1, which reduces to 2 p^0 / (H (p^n + p^{n+1})).
    Works on ambient points off the slice too (it is degree zero).
    """
    n = len(p) - 2
    return 2.0 * p[0] / (H * (p[n] + p[n + 1]))


def parse_scale_factor(spec: str, n: int, H: float) -> ScaleFactor:
    """Parse ``zero``, ``const:c``, ``power:p`` or ``tilt:c`` into a ScaleFactor.

    ``power:p`` is a = p * ln|tau| with tau the flat-slicing conformal time.
    ``tilt:c`` is a = c * x^1, an anisotropic factor varying along the first
    spatial chart coordinate.
    """
    text = spec.strip()
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind == "zero" and not arg:
        return ScaleFactor(lambda p: 0.0, name="zero", spec=text)
    if kind in ("const", "power", "tilt"):
        try:
            value = float(arg)
        except ValueError:
            raise ContractViolation(f"bad numeric parameter in scale factor {spec!r}") from None
        if not math.isfinite(value):
            raise ContractViolation(f"non-finite parameter in scale factor {spec!r}")
        if kind == "const":
            return ScaleFactor(lambda p: value, name=f"const:{value:g}", spec=text)
        if kind == "tilt":
            return ScaleFactor(lambda p: value * p[1], name=f"tilt:{value:g}", spec=text)

        def power(p):
            return value * np.log(np.abs(conformal_time(p, H)))

        def contains(p):
            denom = H * (p[n] + p[n + 1])
            return denom > POSITIVITY_FLOOR and abs(p[0]) > POSITIVITY_FLOOR

        return ScaleFactor(power, contains, name=f"power:{value:g}", spec=text)
    raise ContractViolation(f"unknown scale factor {spec!r}; expected zero, const:c, power:p or tilt:c")
