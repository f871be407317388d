"""Linear algebra of the flat (2,n) ambient space.

Coordinates are indexed 0..n+1; the metric is diag(+1, -1, ..., -1, +1), so the
two timelike directions are the first and the last index.  Points, tangent
vectors and covectors are plain float64 numpy arrays of length n+2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation

__all__ = [
    "Signature",
    "as_vector",
    "inner",
    "cone_constraint",
    "dilation_at",
    "raise_index",
    "lower_index",
]


@dataclass(frozen=True)
class Signature:
    n: int
    diag: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ContractViolation(f"submanifold dimension must be an integer >= 2, got {self.n}")
        d = -np.ones(self.n + 2)
        d[0] = d[-1] = 1.0
        d.setflags(write=False)
        object.__setattr__(self, "diag", d)

    @property
    def dim(self) -> int:
        """Ambient dimension n+2."""
        return self.n + 2

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.diag)

    @classmethod
    def for_vector(cls, v) -> "Signature":
        return cls(len(v) - 2)


def as_vector(coords, sig: Signature | None = None) -> np.ndarray:
    """Validate and convert to a finite float64 vector of length n+2."""
    v = np.asarray(coords, dtype=float)
    if v.ndim != 1:
        raise ContractViolation(f"expected a 1-d coordinate array, got shape {v.shape}")
    if sig is None:
        if v.shape[0] < 4:
            raise ContractViolation(f"ambient vectors need at least 4 components, got {v.shape[0]}")
    elif v.shape[0] != sig.dim:
        raise ContractViolation(f"expected {sig.dim} components, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ContractViolation("non-finite coordinate")
    return v


def _sig_for(u, sig):
    return sig if sig is not None else Signature.for_vector(u)


def inner(u, v, sig: Signature | None = None) -> float:
    """eta(u, v) = sum_a diag[a] u^a v^a."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ContractViolation(f"dimension mismatch: {u.shape} vs {v.shape}")
    sig = _sig_for(u, sig)
    if u.shape[-1] != sig.dim:
        raise ContractViolation(f"expected {sig.dim} components, got {u.shape[-1]}")
    return float(np.dot(sig.diag * u, v))


def cone_constraint(y, sig: Signature | None = None) -> float:
    """C(y) = eta(y, y); zero exactly on the null cone."""
    return inner(y, y, sig)


def dilation_at(y) -> np.ndarray:
    """The dilation field D = y^a d_a evaluated at y, i.e. y itself."""
    return np.array(y, dtype=float)


def raise_index(w, sig: Signature | None = None) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    sig = _sig_for(w, sig)
    if w.shape[-1] != sig.dim:
        raise ContractViolation(f"expected {sig.dim} components, got {w.shape[-1]}")
    return sig.diag * w


def lower_index(v, sig: Signature | None = None) -> np.ndarray:
    # diag is its own inverse
    return raise_index(v, sig)
