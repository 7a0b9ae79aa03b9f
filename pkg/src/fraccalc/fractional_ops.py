"""Numerical Riemann-Liouville and Jumarie differintegrals on sampled functions.

Both schemes are product integrations: the weakly singular kernel is
integrated exactly against a piecewise-polynomial interpolant of the data,
so the kernel singularity at tau = t never meets a naive quadrature rule.

* rl_integral_num: kernel (t-tau)^(alpha-1) against the piecewise-linear
  interpolant (product trapezoid, order 2 on smooth data, exact on
  constants and linears).
* jumarie_deriv_num: kernel (t-xi)^(-alpha) against piecewise-constant
  slopes (the L1 scheme, order 2-alpha). For the differentiable functions
  in scope, the Jumarie derivative with 0 < alpha < 1 equals the
  Riemann-Liouville derivative of f - f(start), i.e. the Caputo derivative,
  which is what L1 discretizes.

Grids are uniform and evaluation points must be grid nodes; that keeps
every panel weight in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .exceptions import DomainError, GridError, SingularityError
from .special import gamma, incomplete_beta

_NODE_TOL = 1e-8  # |t - nearest node| / h admitted as "on the grid"


@dataclass(frozen=True)
class SampledFunction:
    """Samples of f on the uniform grid start + i*h, i = 0..n, h = (end-start)/n."""

    start: float
    end: float
    values: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not self.end > self.start:
            raise DomainError(f"need end > start, got [{self.start}, {self.end}]")
        if len(values) < 3:
            raise DomainError("need at least 2 intervals (3 samples)")
        if not all(math.isfinite(v) for v in values):
            raise DomainError("sample values must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, f: Callable[[np.ndarray], np.ndarray],
                      start: float, end: float, n: int) -> "SampledFunction":
        x = start + (end - start) * np.arange(n + 1) / n
        return cls(start, end, tuple(np.asarray(f(x), dtype=float)))

    @property
    def n(self) -> int:
        """Number of grid intervals."""
        return len(self.values) - 1

    @property
    def h(self) -> float:
        return (self.end - self.start) / self.n

    def node_index(self, t: float) -> int:
        """Index of the grid node equal to t; GridError if t is off-grid."""
        pos = (t - self.start) / self.h
        idx = round(pos)
        if idx < 0 or idx > self.n or abs(pos - idx) > _NODE_TOL * max(1.0, abs(pos)):
            raise GridError(f"t={t} is not a node of the grid "
                            f"[{self.start}, {self.end}] with n={self.n}")
        return idx


def rl_integral_num(f: SampledFunction, alpha: float, t: float) -> float:
    """Riemann-Liouville integral of order alpha at grid node t.

    (1/Gamma(alpha)) * integral_start^t (t-tau)^(alpha-1) f(tau) dtau with f
    replaced by its piecewise-linear interpolant. On the panel at distance
    u = t - tau in [(j-1)h, jh] the kernel moments

        P0_j = integral u^(alpha-1) du = ((jh)^alpha - ((j-1)h)^alpha)/alpha
        P1_j = integral u^alpha du     = ((jh)^(a+1) - ((j-1)h)^(a+1))/(a+1)

    are exact, which makes the rule exact for f constant or linear.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"rl_integral_num requires 0 < alpha <= 1, got {alpha}")
    m = f.node_index(t)
    if m == 0:
        return 0.0
    h = f.h
    v = np.asarray(f.values[:m + 1])
    u = h * np.arange(m + 1, dtype=float)
    p0 = np.diff(u ** alpha) / alpha                 # p0[j-1] is the panel-j moment
    p1 = np.diff(u ** (alpha + 1.0)) / (alpha + 1.0)
    # panel i = m - j carries samples f_i, f_{i+1}; f on it is
    # f_i + (f_{i+1} - f_i) * (j*h - u)/h in the u variable
    jdx = np.arange(m, 0, -1)                        # j for panels i = 0..m-1
    fi = v[:m]
    dfi = v[1:m + 1] - v[:m]
    total = np.sum(fi * p0[jdx - 1]
                   + dfi * (jdx * h * p0[jdx - 1] - p1[jdx - 1]) / h)
    return float(total) / gamma(alpha)


def jumarie_deriv_num(f: SampledFunction, alpha: float, t: float) -> float:
    """Jumarie derivative of order alpha at grid node t > start (L1 scheme).

    Evaluates (1/Gamma(1-alpha)) * integral_start^t (t-xi)^(-alpha) f'(xi) dxi
    with f' replaced by the piecewise-constant slopes of the samples and the
    kernel integrated exactly on each panel.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"jumarie_deriv_num requires 0 < alpha < 1, got {alpha}")
    m = f.node_index(t)
    if m == 0:
        raise DomainError("jumarie_deriv_num requires t > start")
    h = f.h
    v = np.asarray(f.values[:m + 1])
    u = h * np.arange(m + 1, dtype=float)
    w = np.diff(u ** (1.0 - alpha))                  # w[j-1] is the panel-j weight
    slopes = (v[1:] - v[:-1]) / h
    jdx = np.arange(m, 0, -1)
    total = np.sum(slopes * w[jdx - 1])
    return float(total) / gamma(2.0 - alpha)


def rl_deriv_num(f: SampledFunction, alpha: float, t: float) -> float:
    """Riemann-Liouville derivative at grid node t, strictly past the start.

    Equals the Jumarie derivative plus the start-value kernel term
    f(start) (t-start)^(-alpha) / Gamma(1-alpha), which is what the
    derivative of a constant contributes.
    """
    if abs(t - f.start) <= _NODE_TOL * f.h:
        raise SingularityError("rl_deriv_num is singular at t = start")
    base = jumarie_deriv_num(f, alpha, t)
    return base + f.values[0] * (t - f.start) ** (-alpha) / gamma(1.0 - alpha)


def shifted_power_frac_integral(a: float, gamma_exp: float, alpha: float,
                                t: float) -> float:
    """Closed form of the order-(1-alpha) integral of tau^gamma_exp from a nonzero
    start point a: t^(gamma+1-alpha) B_eta(1-alpha, gamma+1) / Gamma(1-alpha)
    with eta = (t-a)/t.

    The substitution tau = t(1-z) maps the integral onto the incomplete Beta
    integral; as a -> 0 (eta -> 1) this reduces to
    Gamma(gamma+1)/Gamma(gamma+2-alpha) * t^(gamma+1-alpha).
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"requires 0 < alpha < 1, got alpha={alpha}")
    if not gamma_exp > -1.0:
        raise DomainError(f"requires gamma > -1, got {gamma_exp}")
    if not 0.0 < a < t:
        raise DomainError(f"requires 0 < a < t, got a={a}, t={t}")
    eta = (t - a) / t
    return (t ** (gamma_exp + 1.0 - alpha)
            * incomplete_beta(eta, 1.0 - alpha, gamma_exp + 1.0)
            / gamma(1.0 - alpha))


@dataclass(frozen=True)
class ConvergenceStudy:
    """Errors of a scheme under step halving and the fitted order.

    order is None when the errors sit at rounding level (constant data), in
    which case no rate can be read off.
    """

    steps: tuple
    errors: tuple
    order: Optional[float]

    def __post_init__(self):
        steps = tuple(float(s) for s in self.steps)
        if any(b >= a for a, b in zip(steps, steps[1:])):
            raise DomainError("step sizes must be strictly decreasing")
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "errors", tuple(float(e) for e in self.errors))


def convergence_order(scheme: Callable[[SampledFunction, float, float], float],
                      f: Callable[[np.ndarray], np.ndarray],
                      alpha: float, t: float, analytic: float,
                      steps: Sequence[float],
                      start: float = 0.0) -> ConvergenceStudy:
    """Measure the convergence order of a differintegral scheme at t.

    steps lists at least three step sizes, each half the previous; f is
    resampled on [start, t] for each and the scheme evaluated at the final
    node. The fitted order is the mean of log2(e_i / e_{i+1}).
    """
    steps = [float(s) for s in steps]
    if len(steps) < 3:
        raise DomainError("need at least 3 step sizes")
    for a, b in zip(steps, steps[1:]):
        if abs(b / a - 0.5) > 1e-9:
            raise DomainError("each step size must halve the previous one")
    span = t - start
    errors = []
    for h in steps:
        n = round(span / h)
        if n < 2 or abs(n * h - span) > 1e-9 * span:
            raise GridError(f"step {h} does not tile [{start}, {t}]")
        sf = SampledFunction.from_callable(f, start, t, n)
        errors.append(abs(scheme(sf, alpha, t) - analytic))
    if max(errors) <= 1e-13 * max(1.0, abs(analytic)) or min(errors) == 0.0:
        fitted = None   # rounding floor, no usable rate
    else:
        rates = [math.log2(e0 / e1) for e0, e1 in zip(errors, errors[1:])]
        fitted = sum(rates) / len(rates)
    return ConvergenceStudy(tuple(steps), tuple(errors), fitted)
