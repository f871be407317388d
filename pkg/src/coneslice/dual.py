"""Forward-mode automatic differentiation with vector-valued dual numbers.

A :class:`Dual` carries a value and the full gradient with respect to the
seeded inputs, so one evaluation of a scalar function yields its whole
differential.  Numpy ufuncs (``np.exp``, ``np.log`` ...) dispatch to Duals,
which means ordinary numpy-flavoured user functions differentiate unchanged
as long as they avoid in-place float coercion (``float(x)``, ``math.exp``).
"""

from __future__ import annotations

import numpy as np

from .errors import DifferentiationError

__all__ = ["Dual", "seed", "gradient"]


class Dual:
    __slots__ = ("val", "der")
    __array_priority__ = 1000

    def __init__(self, val, der):
        self.val = float(val)
        self.der = der

    def __repr__(self):
        return f"Dual({self.val!r}, {self.der!r})"

    # -- arithmetic ------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Dual):
            return other
        return Dual(other, np.zeros_like(self.der))

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.der + other.der)
        return Dual(self.val + other, self.der)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.der - other.der)
        return Dual(self.val - other, self.der)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.der)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val * other.val, self.der * other.val + other.der * self.val)
        return Dual(self.val * other, self.der * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            q = self.val / other.val
            return Dual(q, (self.der - q * other.der) / other.val)
        return Dual(self.val / other, self.der / other)

    def __rtruediv__(self, other):
        q = other / self.val
        return Dual(q, -q / self.val * self.der)

    def __pow__(self, p):
        if isinstance(p, Dual):
            return (self.log() * p).exp()
        if p == 0:
            return Dual(1.0, np.zeros_like(self.der))
        return Dual(self.val**p, p * self.val ** (p - 1) * self.der)

    def __rpow__(self, base):
        return (self * np.log(base)).exp()

    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.val < 0 else self

    # comparisons look at the value only; branches are resolved at the primal point
    def __lt__(self, other):
        return self.val < _val(other)

    def __le__(self, other):
        return self.val <= _val(other)

    def __gt__(self, other):
        return self.val > _val(other)

    def __ge__(self, other):
        return self.val >= _val(other)

    # -- elementary functions (numpy looks these up on object arrays) -----
    def exp(self):
        e = np.exp(self.val)
        return Dual(e, e * self.der)

    def log(self):
        return Dual(np.log(self.val), self.der / self.val)

    def sqrt(self):
        s = np.sqrt(self.val)
        return Dual(s, self.der / (2.0 * s))

    def sin(self):
        return Dual(np.sin(self.val), np.cos(self.val) * self.der)

    def cos(self):
        return Dual(np.cos(self.val), -np.sin(self.val) * self.der)

    def tan(self):
        t = np.tan(self.val)
        return Dual(t, (1.0 + t * t) * self.der)

    def sinh(self):
        return Dual(np.sinh(self.val), np.cosh(self.val) * self.der)

    def cosh(self):
        return Dual(np.cosh(self.val), np.sinh(self.val) * self.der)

    def tanh(self):
        t = np.tanh(self.val)
        return Dual(t, (1.0 - t * t) * self.der)

    def arctan(self):
        return Dual(np.arctan(self.val), self.der / (1.0 + self.val**2))

    def arctanh(self):
        return Dual(np.arctanh(self.val), self.der / (1.0 - self.val**2))

    def square(self):
        return self * self

    def absolute(self):
        return abs(self)

    def log1p(self):
        return Dual(np.log1p(self.val), self.der / (1.0 + self.val))

    def expm1(self):
        return Dual(np.expm1(self.val), np.exp(self.val) * self.der)

    _UNARY = {
        "exp", "log", "sqrt", "sin", "cos", "tan", "sinh", "cosh", "tanh",
        "arctan", "arctanh", "square", "absolute", "log1p", "expm1",
    }
    _BINARY = {
        "add": lambda a, b: a + b,
        "subtract": lambda a, b: a - b,
        "multiply": lambda a, b: a * b,
        "true_divide": lambda a, b: a / b,
        "divide": lambda a, b: a / b,
        "power": lambda a, b: a**b,
    }

    def __array_ufunc__(self, ufunc, method, *inputs, **kwargs):
        if method != "__call__" or kwargs.get("out") is not None:
            return NotImplemented
        if any(isinstance(x, np.ndarray) for x in inputs):
            # array op Dual: let numpy broadcast over an object array instead
            boxed = [_box(x) if isinstance(x, Dual) else x for x in inputs]
            return ufunc(*boxed, **kwargs)
        name = ufunc.__name__
        if len(inputs) == 1 and name in self._UNARY:
            return getattr(self, name)()
        if len(inputs) == 1 and name == "negative":
            return -self
        if len(inputs) == 2 and name in self._BINARY:
            a, b = (x if isinstance(x, Dual) else float(x) for x in inputs)
            return self._BINARY[name](a, b)
        return NotImplemented


def _box(d: Dual) -> np.ndarray:
    out = np.empty((), dtype=object)
    out[()] = d
    return out


def _val(x):
    return x.val if isinstance(x, Dual) else x


def seed(y) -> np.ndarray:
    """Object array of Duals whose gradients are the unit vectors at ``y``."""
    y = np.asarray(y, dtype=float)
    eye = np.eye(y.shape[0])
    out = np.empty(y.shape[0], dtype=object)
    for i, yi in enumerate(y):
        out[i] = Dual(yi, eye[i])
    return out


def gradient(fn, y) -> tuple[float, np.ndarray]:
    """Value and gradient of a scalar function at ``y`` in one forward pass."""
    y = np.asarray(y, dtype=float)
    out = fn(seed(y))
    if isinstance(out, np.ndarray) and out.shape == ():
        out = out.item()
    if isinstance(out, Dual):
        val, der = out.val, np.asarray(out.der, dtype=float)
    else:
        # the function ignored its input (a constant)
        val, der = float(out), np.zeros_like(y)
    if not (np.isfinite(val) and np.all(np.isfinite(der))):
        raise DifferentiationError(f"non-finite derivative at {y}")
    return val, der
