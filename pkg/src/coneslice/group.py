"""SO(2,n): generators, exponential, and the projective action on cone slices.

A group element acts on X_k by alpha^k(y) = (A y) / k(A y).  Its tangent map
multiplies the induced metric by 1 / k(A y)^2, which is what
:func:`conformal_factor_residual` measures.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .ambient import Signature, as_vector, inner
from .errors import ConformalBoundaryError, ContractViolation
from .homogeneous import HomogeneousFn
from .reports import VerificationReport, dumps, run_trials, summarize
from .slices import SliceChart, SlicePoint, check_tangent, slice_curve

__all__ = [
    "AlgebraElement",
    "GroupElement",
    "algebra_basis",
    "commutator",
    "expm_pade13",
    "exponential",
    "random_algebra_element",
    "random_group_element",
    "act_on_slice",
    "tangent_action",
    "transported_tangent_action",
    "conformal_factor_residual",
    "group_campaign",
    "ALGEBRA_TOL",
    "GROUP_TOL",
    "MAX_GENERATOR_NORM",
]

ALGEBRA_TOL = 1e-12
GROUP_TOL = 1e-10
DET_TOL = 1e-8
MAX_GENERATOR_NORM = 50.0
BOUNDARY_FLOOR = 1e-12
CONFORMAL_TOL = 1e-9


def _eta_antisymmetry(M, sig):
    return M.T * sig.diag + sig.diag[:, None] * M


@dataclass(frozen=True)
class AlgebraElement:
    M: np.ndarray

    def __post_init__(self):
        M = np.array(self.M, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ContractViolation(f"generator must be square, got {M.shape}")
        if not np.all(np.isfinite(M)):
            raise ContractViolation("non-finite generator entry")
        sig = Signature(M.shape[0] - 2)
        if np.max(np.abs(_eta_antisymmetry(M, sig))) > ALGEBRA_TOL * max(1.0, np.max(np.abs(M))):
            raise ContractViolation("generator is not eta-antisymmetric")
        M.setflags(write=False)
        object.__setattr__(self, "M", M)

    @property
    def n(self) -> int:
        return self.M.shape[0] - 2

    def __add__(self, other):
        return AlgebraElement(self.M + other.M)

    def __mul__(self, c: float):
        return AlgebraElement(c * self.M)

    __rmul__ = __mul__

    def __neg__(self):
        return AlgebraElement(-self.M)


@dataclass(frozen=True)
class GroupElement:
    A: np.ndarray

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ContractViolation(f"group element must be square, got {A.shape}")
        sig = Signature(A.shape[0] - 2)
        eta = sig.matrix
        drift = np.max(np.abs(A.T @ eta @ A - eta))
        if drift > GROUP_TOL * max(1.0, np.max(np.abs(A)) ** 2):
            raise ContractViolation(f"matrix does not preserve eta (drift {drift:.3e})")
        if abs(np.linalg.det(A) - 1.0) > DET_TOL * max(1.0, np.max(np.abs(A)) ** A.shape[0]):
            raise ContractViolation("determinant is not +1")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)

    @property
    def n(self) -> int:
        return self.A.shape[0] - 2

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(np.eye(n + 2))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.A @ other.A)

    def inverse(self) -> "GroupElement":
        eta = Signature(self.n).matrix
        return GroupElement(eta @ self.A.T @ eta)

    def to_json(self) -> str:
        return dumps({"n": self.n, "A": [list(row) for row in self.A]})


def algebra_basis(n: int) -> list[AlgebraElement]:
    """Generators M_ab, a < b, with (M_ab)^c_d = eta_bd delta^c_a - eta_ad delta^c_b."""
    sig = Signature(n)
    eta = sig.diag
    basis = []
    for a in range(n + 2):
        for b in range(a + 1, n + 2):
            M = np.zeros((n + 2, n + 2))
            M[a, b] = eta[b]
            M[b, a] = -eta[a]
            basis.append(AlgebraElement(M))
    return basis


def commutator(X: AlgebraElement, Y: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(X.M @ Y.M - Y.M @ X.M)


_PADE13 = (
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
)
_THETA13 = 5.371920351148152


def expm_pade13(X: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring with the [13/13] Pade approximant."""
    X = np.asarray(X, dtype=float)
    b = _PADE13
    norm1 = np.linalg.norm(X, 1)
    if norm1 == 0:
        return np.eye(X.shape[0])
    s = int(math.ceil(math.log2(norm1 / _THETA13))) if norm1 > _THETA13 else 0
    A = X / 2.0**s
    ident = np.eye(X.shape[0])
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A2 @ A4
    U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident)
    V = A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident
    R = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        R = R @ R
    return R


def exponential(X: AlgebraElement) -> GroupElement:
    if np.linalg.norm(X.M) > MAX_GENERATOR_NORM:
        raise ContractViolation(f"generator norm exceeds {MAX_GENERATOR_NORM}; exponential would overflow")
    return GroupElement(expm_pade13(X.M))


def random_algebra_element(n: int, rng: np.random.Generator, rho: float = 0.5) -> AlgebraElement:
    """Gaussian combination of the basis, rescaled to Frobenius norm rho."""
    basis = algebra_basis(n)
    c = rng.standard_normal(len(basis))
    M = sum(ci * B.M for ci, B in zip(c, basis))
    norm = np.linalg.norm(M)
    return AlgebraElement(M * (rho / norm) if norm > 0 else M)


def random_group_element(n: int, rng: np.random.Generator, rho: float = 0.5) -> GroupElement:
    return exponential(random_algebra_element(n, rng, rho))


def _image(alpha: GroupElement, y, k: HomogeneousFn) -> tuple[np.ndarray, float]:
    z = alpha.A @ y
    if not k.contains(z):
        raise ConformalBoundaryError(f"{k.name} is undefined at the image point")
    kz = float(k.func(z))
    if kz <= BOUNDARY_FLOOR * float(np.max(np.abs(z))):
        raise ConformalBoundaryError(f"{k.name}(alpha y) = {kz:.3e}: image left the slice's chartable region")
    return z, kz


def _on_slice(p: SlicePoint, k: HomogeneousFn) -> SlicePoint:
    return p if p.h is k else SlicePoint(p.y, k)


def act_on_slice(alpha: GroupElement, p: SlicePoint, k: HomogeneousFn) -> SlicePoint:
    """(A y) / k(A y)."""
    p = _on_slice(p, k)
    z, kz = _image(alpha, p.y, k)
    return SlicePoint(z / kz, k)


def tangent_action(alpha: GroupElement, p: SlicePoint, V, k: HomogeneousFn) -> np.ndarray:
    """A V / k(A y) - dk_{A y}(A V) / k(A y)^2 * A y."""
    p = _on_slice(p, k)
    V = as_vector(V, Signature(p.n))
    check_tangent(p, V)
    z, kz = _image(alpha, p.y, k)
    AV = alpha.A @ V
    dk = k.differential(z)
    return AV / kz - float(dk @ AV) / kz**2 * z


def transported_tangent_action(alpha, p: SlicePoint, V, k: HomogeneousFn, step: float = 1e-5) -> np.ndarray:
    """Tangent action by central differences of the slice action along a curve."""
    p = _on_slice(p, k)
    c = slice_curve(p, V)

    def act(y):
        z = alpha.A @ y
        return z / float(k.func(z))

    return (act(c(step)) - act(c(-step))) / (2.0 * step)


def conformal_factor_residual(alpha, p: SlicePoint, V1, V2, k: HomogeneousFn) -> float:
    """eta(T V1, T V2) - eta(V1, V2) / k(A y)^2 for T the tangent action."""
    p = _on_slice(p, k)
    _, kz = _image(alpha, p.y, k)
    w1 = tangent_action(alpha, p, V1, k)
    w2 = tangent_action(alpha, p, V2, k)
    return inner(w1, w2) - inner(V1, V2) / kz**2


def group_campaign(
    chart: SliceChart,
    trials: int,
    seed: int,
    rho: float = 0.5,
    tolerance: float = CONFORMAL_TOL,
    workers: int = 1,
    params: dict | None = None,
) -> VerificationReport:
    """Seeded conformal-factor checks for random group elements on a chart of X_k.

    Trials whose image crosses the conformal boundary are counted as
    rejections rather than failures.  Residuals are scaled by
    max(1, |eta(V1, V2)| / k(A y)^2).
    """
    from .embedding import sample_chart_point

    if trials < 1:
        raise ContractViolation("trials must be >= 1")
    k = chart.h

    def trial(rng, _index):
        x = sample_chart_point(chart, rng)
        p = SlicePoint(chart.point_map(x), k)
        T = np.asarray(chart.tangent_map(x), dtype=float)
        V1 = rng.standard_normal(chart.n) @ T
        V2 = rng.standard_normal(chart.n) @ T
        alpha = random_group_element(chart.n, rng, rho)
        try:
            _, kz = _image(alpha, p.y, k)
            res = conformal_factor_residual(alpha, p, V1, V2, k)
        except ConformalBoundaryError:
            return None
        return abs(res) / max(1.0, abs(inner(V1, V2)) / kz**2)

    started = time.perf_counter()
    residuals = run_trials(trial, trials, seed, workers)
    return summarize("conformal", residuals, tolerance, seed, started, params)
