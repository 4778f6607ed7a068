"""Second-order forward-mode automatic differentiation.

A Jet2 carries a scalar value together with its exact gradient and Hessian
with respect to a fixed tuple of chart coordinates.  Arithmetic propagates
derivatives by the chain rule; every operation assembles the Hessian from
pieces that are symmetric term by term, so the symmetry invariant holds
exactly (not just to rounding).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Jet2",
    "int_pow",
    "general_pow",
    "sin",
    "cos",
    "tan",
    "exp",
    "ln",
    "sqrt",
    "absolute",
    "tanh",
    "FUNCTIONS",
]


@dataclass(frozen=True)
class Jet2:
    """Value, gradient and symmetric Hessian of a scalar at one point."""

    value: float
    grad: np.ndarray
    hess: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        grad = np.asarray(self.grad, dtype=float)
        hess = np.asarray(self.hess, dtype=float)
        d = grad.shape[0] if grad.ndim == 1 else -1
        if grad.ndim != 1 or hess.shape != (d, d):
            raise ValueError("jet gradient must be (d,), hessian (d, d)")
        if not np.array_equal(hess, hess.T):
            raise ValueError("jet hessian must be exactly symmetric")
        object.__setattr__(self, "grad", grad)
        object.__setattr__(self, "hess", hess)

    @property
    def dim(self) -> int:
        return self.grad.shape[0]

    @classmethod
    def seed(cls, index: int, value: float, dim: int) -> "Jet2":
        """Jet of the coordinate function x_index at a point where it equals value."""
        if not 0 <= index < dim:
            raise ValueError(f"seed index {index} outside 0..{dim - 1}")
        grad = np.zeros(dim)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((dim, dim)))

    @classmethod
    def constant(cls, value: float, dim: int) -> "Jet2":
        return cls(value, np.zeros(dim), np.zeros((dim, dim)))

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Jet2") -> None:
        if other.dim != self.dim:
            raise ValueError("jet dimension mismatch")

    def __add__(self, other):
        if isinstance(other, Jet2):
            self._check(other)
            return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)
        if isinstance(other, (int, float)):
            return Jet2(self.value + other, self.grad, self.hess)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __sub__(self, other):
        if isinstance(other, Jet2):
            self._check(other)
            return Jet2(self.value - other.value, self.grad - other.grad, self.hess - other.hess)
        if isinstance(other, (int, float)):
            return Jet2(self.value - other, self.grad, self.hess)
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Jet2):
            self._check(other)
            # The cross term must be symmetrized before joining the sum:
            # folding its two halves into the running total separately would
            # order the additions differently at (i, j) and (j, i).
            cross = np.outer(self.grad, other.grad)
            hess = (self.value * other.hess + other.value * self.hess) + (cross + cross.T)
            return Jet2(
                self.value * other.value,
                self.value * other.grad + other.value * self.grad,
                hess,
            )
        if isinstance(other, (int, float)):
            return Jet2(self.value * other, self.grad * other, self.hess * other)
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet2":
        v = self.value
        if v == 0.0:
            raise DomainError("division by zero")
        inv = 1.0 / v
        inv2 = inv * inv
        hess = -self.hess * inv2 + (2.0 * inv2 * inv) * np.outer(self.grad, self.grad)
        return Jet2(inv, -self.grad * inv2, hess)

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            self._check(other)
            return self * other.reciprocal()
        if isinstance(other, (int, float)):
            if other == 0:
                raise DomainError("division by zero")
            return self * (1.0 / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, float)):
            return self.reciprocal() * other
        return NotImplemented

    def __pow__(self, exponent):
        if isinstance(exponent, (int, float)) and float(exponent).is_integer():
            return int_pow(self, int(exponent))
        return general_pow(self, exponent)

    def __rpow__(self, base):
        return general_pow(base, self)


def int_pow(base, exponent: int):
    """base**exponent for integer exponent, expanded by repeated multiplication.

    Works on Jet2 and plain numbers alike.  Negative exponents invert at the
    end, so the derivative structure stays exact for jets.
    """
    exponent = int(exponent)
    if exponent == 0:
        return Jet2.constant(1.0, base.dim) if isinstance(base, Jet2) else 1.0
    k = abs(exponent)
    result = None
    square = base
    while k:
        if k & 1:
            result = square if result is None else result * square
        k >>= 1
        if k:
            square = square * square
    if exponent < 0:
        if isinstance(result, Jet2):
            return result.reciprocal()
        if result == 0:
            raise DomainError("zero base with negative exponent")
        return 1.0 / result
    return result


def general_pow(base, exponent):
    """base**exponent via exp(exponent * ln(base)); needs a positive base."""
    return exp(exponent * ln(base))


def _unary(name, value_fn, d1_fn, d2_fn, value_domain=None, jet_domain=None):
    def apply(x):
        if isinstance(x, Jet2):
            v = x.value
            if jet_domain is not None:
                jet_domain(v)
            if value_domain is not None:
                value_domain(v)
            a = d1_fn(v)
            b = d2_fn(v)
            hess = b * np.outer(x.grad, x.grad) + a * x.hess
            return Jet2(value_fn(v), a * x.grad, hess)
        v = float(x)
        if value_domain is not None:
            value_domain(v)
        return value_fn(v)

    apply.__name__ = name
    apply.__qualname__ = name
    return apply


def _positive(v: float) -> None:
    if v <= 0.0:
        raise DomainError(f"argument {v} is not positive")


def _nonzero(v: float) -> None:
    if v == 0.0:
        raise DomainError("abs is not differentiable at zero")


sin = _unary("sin", math.sin, math.cos, lambda v: -math.sin(v))
cos = _unary("cos", math.cos, lambda v: -math.sin(v), lambda v: -math.cos(v))
tan = _unary(
    "tan",
    math.tan,
    lambda v: 1.0 + math.tan(v) ** 2,
    lambda v: 2.0 * math.tan(v) * (1.0 + math.tan(v) ** 2),
)
exp = _unary("exp", math.exp, math.exp, math.exp)
ln = _unary("ln", math.log, lambda v: 1.0 / v, lambda v: -1.0 / (v * v), value_domain=_positive)
sqrt = _unary(
    "sqrt",
    math.sqrt,
    lambda v: 0.5 / math.sqrt(v),
    lambda v: -0.25 / (v * math.sqrt(v)),
    value_domain=_positive,
)
# abs is C^2 away from zero only; number evaluation tolerates zero, jets do not.
absolute = _unary("absolute", abs, lambda v: math.copysign(1.0, v), lambda v: 0.0, jet_domain=_nonzero)
tanh = _unary(
    "tanh",
    math.tanh,
    lambda v: 1.0 - math.tanh(v) ** 2,
    lambda v: -2.0 * math.tanh(v) * (1.0 - math.tanh(v) ** 2),
)

FUNCTIONS = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "exp": exp,
    "ln": ln,
    "sqrt": sqrt,
    "abs": absolute,
    "tanh": tanh,
}
