"""Exact truncated algebra of generalized power series on the t^(k*alpha) lattice.

An AlphaSeries holds coefficients c_0..c_N of sum_k c_k t^(k*alpha). On this
lattice the Jumarie derivative is a weighted left shift,

    D^alpha t^(k*alpha) = [Gamma(1+k*alpha)/Gamma(1+(k-1)*alpha)] t^((k-1)*alpha),

with the constant term annihilated, so eigenfunction and solver residual
checks can be carried out coefficient by coefficient instead of pointwise.
Monomials multiply as t^(j*alpha) * t^(k*alpha) = t^((j+k)*alpha), which makes
the product of two series a true Cauchy convolution of their coefficients.

Series with different alpha values never interoperate; mixed lattices
(t^alpha against t^beta with beta not a multiple of alpha) are unsupported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .exceptions import AlphaMismatchError, DomainError, OrderError
from .special import gamma_ratio


@dataclass(frozen=True)
class AlphaSeries:
    """Immutable truncated series sum_{k=0..N} coeffs[k] * t^(k*alpha)."""

    alpha: float
    coeffs: tuple

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"AlphaSeries requires 0 < alpha <= 1, got {self.alpha}")
        coeffs = tuple(complex(c) for c in self.coeffs)
        if not coeffs:
            raise OrderError("AlphaSeries needs at least the constant coefficient")
        for c in coeffs:
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise DomainError("AlphaSeries coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        """Truncation order N (the highest retained power is t^(N*alpha))."""
        return len(self.coeffs) - 1

    def _require_same_lattice(self, other: "AlphaSeries") -> None:
        # exact match: values on different lattices cannot be combined
        if self.alpha != other.alpha:
            raise AlphaMismatchError(
                f"series lattices differ: alpha={self.alpha} vs {other.alpha}")

    # ------------------------------------------------------------------
    # ring operations (results truncated to the smallest reliable order)

    def add(self, other: "AlphaSeries") -> "AlphaSeries":
        self._require_same_lattice(other)
        n = min(self.order, other.order)
        return AlphaSeries(self.alpha, tuple(
            self.coeffs[k] + other.coeffs[k] for k in range(n + 1)))

    def scale(self, c: complex) -> "AlphaSeries":
        c = complex(c)
        return AlphaSeries(self.alpha, tuple(ck * c for ck in self.coeffs))

    def mul(self, other: "AlphaSeries") -> "AlphaSeries":
        """True Cauchy product; coefficient k is sum_j c_j * d_(k-j)."""
        self._require_same_lattice(other)
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = 0.0 + 0.0j
            for j in range(k + 1):
                acc += self.coeffs[j] * other.coeffs[k - j]
            out.append(acc)
        return AlphaSeries(self.alpha, tuple(out))

    def truncated(self, order: int) -> "AlphaSeries":
        if order < 0 or order > self.order:
            raise OrderError(f"cannot truncate order-{self.order} series to {order}")
        return AlphaSeries(self.alpha, self.coeffs[:order + 1])

    # ------------------------------------------------------------------
    # calculus on the lattice

    def jumarie_deriv(self) -> "AlphaSeries":
        """Fractional derivative of order alpha; drops the top coefficient.

        c'_k = c_{k+1} * Gamma(1+(k+1)*alpha)/Gamma(1+k*alpha); the constant
        term of the input is annihilated.
        """
        if self.order < 1:
            raise OrderError("cannot differentiate an order-0 series")
        a = self.alpha
        return AlphaSeries(a, tuple(
            self.coeffs[k + 1] * gamma_ratio(1.0 + (k + 1) * a, 1.0 + k * a)
            for k in range(self.order)))

    def frac_integral(self) -> "AlphaSeries":
        """Fractional integral of order alpha; exact shift inverse of the
        derivative, with zero constant term."""
        a = self.alpha
        out = [0.0 + 0.0j]
        out.extend(self.coeffs[k] * gamma_ratio(1.0 + k * a, 1.0 + (k + 1) * a)
                   for k in range(self.order + 1))
        return AlphaSeries(a, tuple(out))

    def apply_operator(self, op_coeffs: Sequence[complex]) -> "AlphaSeries":
        """Apply sum_m p_m D^(m*alpha) with the sequential derivative.

        op_coeffs lists p_0..p_n. Each derivative drops one coefficient, so
        the result is reported at the usable order N - n; an input shorter
        than the operator raises OrderError.
        """
        ops = [complex(p) for p in op_coeffs]
        if not ops:
            raise OrderError("operator needs at least one coefficient")
        n = len(ops) - 1
        if self.order < n:
            raise OrderError(
                f"series order {self.order} below operator degree {n}")
        target = self.order - n
        acc = [ops[0] * c for c in self.coeffs[:target + 1]]
        d = self
        for m in range(1, n + 1):
            d = d.jumarie_deriv()
            for k in range(target + 1):
                acc[k] += ops[m] * d.coeffs[k]
        return AlphaSeries(self.alpha, tuple(acc))

    # ------------------------------------------------------------------

    def evaluate(self, t: float) -> complex:
        """sum_k c_k t^(k*alpha) with compensated summation, for t >= 0."""
        if t < 0.0:
            raise DomainError(f"evaluation requires t >= 0, got {t}")
        x = float(t) ** self.alpha
        total = 0.0 + 0.0j
        comp = 0.0 + 0.0j
        power = 1.0
        for c in self.coeffs:
            y = c * power - comp
            s = total + y
            comp = (s - total) - y
            total = s
            power *= x
        return total

    def max_abs_coeff(self) -> float:
        return max(abs(c) for c in self.coeffs)

    # operator sugar; add/scale/mul remain the primary spelling
    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.add(other.scale(-1.0))

    def __mul__(self, other):
        if isinstance(other, AlphaSeries):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scale(-1.0)


def series_from_ml(alpha: float, a: complex, n: int) -> AlphaSeries:
    """Coefficient series of E_alpha(a t^alpha) to order n: c_k = a^k/Gamma(1+k*alpha).

    Built by the same ratio recurrence the pointwise evaluator uses, so the
    two agree to rounding.
    """
    if n < 1:
        raise OrderError(f"series_from_ml requires order n >= 1, got {n}")
    a = complex(a)
    coeffs = [1.0 + 0.0j]
    for k in range(n):
        coeffs.append(coeffs[-1] * a *
                      gamma_ratio(1.0 + k * alpha, 1.0 + (k + 1) * alpha))
    return AlphaSeries(alpha, tuple(coeffs))


def zero_series(alpha: float, n: int) -> AlphaSeries:
    """The zero series of order n."""
    return AlphaSeries(alpha, (0.0 + 0.0j,) * (n + 1))


def monomial(alpha: float, degree: int, n: int, coeff: complex = 1.0) -> AlphaSeries:
    """coeff * t^(degree*alpha) as an order-n series."""
    if degree < 0 or degree > n:
        raise OrderError(f"monomial degree {degree} outside order {n}")
    coeffs = [0.0 + 0.0j] * (n + 1)
    coeffs[degree] = complex(coeff)
    return AlphaSeries(alpha, tuple(coeffs))
