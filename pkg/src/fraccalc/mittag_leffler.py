"""One-parameter Mittag-Leffler function and fractional trigonometric series.

E_alpha(z) = sum_{k>=0} z^k / Gamma(1 + k*alpha) is summed directly with
Kahan compensation. Successive terms come from the ratio recurrence
term_{k+1} = term_k * z * Gamma(1+k*alpha)/Gamma(1+(k+1)*alpha); the ratio
is an exact Gamma quotient while both arguments fit in a double and is
formed in log space afterwards (deep in the convergent tail, where its
extra rounding cannot matter).

cos_alpha and sin_alpha are the real and imaginary parts of E_alpha(i t^alpha),
summed by their own alternating series on the same stopping rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .exceptions import ConvergenceError, DomainError
from .special import gamma_ratio

#: Hard cap on the number of summed terms. The plain series covers the
#: argument ranges the solver produces; asymptotic or integral
#: representations for very large |z| are deliberately not provided.
TERM_BUDGET = 2000

#: |E_alpha(i M^alpha) - 1| must fall below this for M to count as a period.
PERIOD_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MLEvaluation:
    """Value of E_alpha(z) plus summation diagnostics.

    truncation_estimate is the magnitude of the first omitted term, so on
    success it is below tol * max(1, |value|).
    """

    value: complex
    terms_used: int
    truncation_estimate: float


def _kahan_sum(first_term: complex, next_term: Callable[[int, complex], complex],
               tol: float, label: str) -> MLEvaluation:
    """Sum term_0 + term_1 + ... with compensated accumulation.

    next_term(k, term_k) produces term_{k+1}. Stops when the pending term
    drops below tol * max(1, |partial sum|); that term is reported as the
    truncation estimate and is not added.
    """
    total = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    term = complex(first_term)
    k = 0
    while k < TERM_BUDGET:
        mag = abs(term)
        if not math.isfinite(mag):
            raise ConvergenceError(
                f"{label}: running term overflowed after {k} terms; "
                "argument outside the plain-series range",
                partial_sum=total, last_term=term, terms_used=k)
        if mag < tol * max(1.0, abs(total)):
            return MLEvaluation(total, k, mag)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        term = next_term(k, term)
        k += 1
    raise ConvergenceError(
        f"{label}: term budget of {TERM_BUDGET} exhausted before the "
        f"stopping rule fired (|last term| = {abs(term):.3e})",
        partial_sum=total, last_term=term, terms_used=k)


def ml(alpha: float, z: complex, tol: float = 1e-12) -> MLEvaluation:
    """Evaluate E_alpha(z) for 0 < alpha <= 2 by direct summation.

    Raises ConvergenceError when the term budget runs out, which happens
    for large |z| combined with small alpha.
    """
    if not 0.0 < alpha <= 2.0:
        raise DomainError(f"ml requires 0 < alpha <= 2, got {alpha}")
    if not tol > 0.0:
        raise DomainError(f"ml requires tol > 0, got {tol}")
    z = complex(z)

    def next_term(k: int, term: complex) -> complex:
        return term * z * gamma_ratio(1.0 + k * alpha, 1.0 + (k + 1) * alpha)

    return _kahan_sum(1.0 + 0.0j, next_term, tol, f"ml(alpha={alpha})")


def _check_trig_args(name: str, alpha: float, t: float, tol: float) -> None:
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"{name} requires 0 < alpha <= 1, got {alpha}")
    if t < 0.0:
        raise DomainError(f"{name} requires t >= 0, got {t}")
    if not tol > 0.0:
        raise DomainError(f"{name} requires tol > 0, got {tol}")


def cos_alpha(alpha: float, t: float, tol: float = 1e-12) -> float:
    """sum_{k>=0} (-1)^k t^(2k*alpha) / Gamma(1+2k*alpha), the real part
    of E_alpha(i t^alpha)."""
    _check_trig_args("cos_alpha", alpha, t, tol)
    x2 = float(t) ** (2.0 * alpha)

    def next_term(k: int, term: complex) -> complex:
        return -term * x2 * gamma_ratio(1.0 + 2 * k * alpha, 1.0 + 2 * (k + 1) * alpha)

    return _kahan_sum(1.0, next_term, tol, f"cos_alpha(alpha={alpha})").value.real


def sin_alpha(alpha: float, t: float, tol: float = 1e-12) -> float:
    """sum_{k>=0} (-1)^k t^((2k+1)*alpha) / Gamma(1+(2k+1)*alpha), the
    imaginary part of E_alpha(i t^alpha)."""
    _check_trig_args("sin_alpha", alpha, t, tol)
    x2 = float(t) ** (2.0 * alpha)
    first = float(t) ** alpha / math.gamma(1.0 + alpha)

    def next_term(k: int, term: complex) -> complex:
        return -term * x2 * gamma_ratio(1.0 + (2 * k + 1) * alpha,
                                        1.0 + (2 * k + 3) * alpha)

    return _kahan_sum(first, next_term, tol, f"sin_alpha(alpha={alpha})").value.real


def _distance_to_one(alpha: float, m: float) -> float:
    return abs(ml(alpha, 1j * m ** alpha, tol=1e-13).value - 1.0)


def _golden_minimize(f: Callable[[float], float], lo: float, hi: float,
                     rel_width: float = 1e-12) -> float:
    """Golden-section search for the minimizer of a unimodal f on [lo, hi]."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > rel_width * max(1.0, abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def ml_period(alpha: float, search_max: float,
              scan_points: int = 2048) -> Optional[float]:
    """Smallest M in (0, search_max] with E_alpha(i M^alpha) = 1, or None.

    |E_alpha(i M^alpha) - 1| is scanned on a uniform grid; each interior
    local minimum is refined by golden-section search and accepted when the
    refined distance falls below PERIOD_TOLERANCE. For alpha = 1 this
    recovers 2*pi; for alpha < 1 there is typically no such M and the scan
    comes back empty.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"ml_period requires 0 < alpha <= 1, got {alpha}")
    if not search_max > 0.0:
        raise DomainError(f"ml_period requires search_max > 0, got {search_max}")

    step = search_max / scan_points
    values = [_distance_to_one(alpha, (i + 1) * step) for i in range(scan_points)]
    for i in range(1, scan_points - 1):
        if values[i] < values[i - 1] and values[i] < values[i + 1]:
            lo = i * step          # grid point i-1 maps to M = i*step
            hi = (i + 2) * step
            m_star = _golden_minimize(lambda m: _distance_to_one(alpha, m), lo, hi)
            if _distance_to_one(alpha, m_star) < PERIOD_TOLERANCE:
                return m_star
    return None
