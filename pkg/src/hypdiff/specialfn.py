"""Special functions for generalized fractional relaxation and subordination.

Two functions are provided:

* ``mittag_leffler(beta, z)`` -- the one-parameter Mittag-Leffler function
  ``E_beta(z) = sum_k z^k / Gamma(beta*k + 1)`` for ``beta`` in (0, 1].
  Accuracy is guaranteed on the negative real axis (the relaxation regime),
  where the function is completely monotone.

* ``m_wright(beta, x)`` -- the M-Wright function
  ``M_beta(x) = sum_k (-x)^k / (k! Gamma(-beta*k + 1 - beta))`` for
  ``beta`` in (0, 1) and ``x >= 0``.  ``t^-beta * M_beta(s t^-beta)`` is the
  marginal density of the inverse stable subordinator of index ``beta``.

Evaluation strategy: a power series branch near the origin (with compensated
float summation, escalating to multiprecision when the alternating series
cancels catastrophically), an integral-representation branch at moderately
large arguments, and an asymptotic branch far out.  Branch pairs overlap and
their agreement is unit-tested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln, rgamma

__all__ = ["MLParams", "mittag_leffler", "m_wright"]

_LOG_TINY = math.log(1e-300)

# Dispatch thresholds for E_beta(z), z <= 0.
_ML_SERIES_CUT = 5.0  # series for |z| <= 5
_ML_ASYMP_CUT = 50.0  # asymptotic tail series for z <= -50

# Escalate to multiprecision when the float series would lose more digits
# than this.
_FLOAT_DIGITS = 15.0


@dataclass(frozen=True)
class MLParams:
    """Mittag-Leffler evaluation request: order, argument, and tolerance.

    Accuracy is guaranteed for ``z <= 0``, the only regime the solvers use.
    """

    beta: float
    z: float
    tol: float = 1e-12

    def __post_init__(self) -> None:
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"order beta={self.beta} outside (0, 1]")
        if not math.isfinite(self.z):
            raise ValueError("argument z must be finite")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")

    def evaluate(self) -> float:
        return mittag_leffler(self.beta, self.z, tol=self.tol)


def _ml_series_digits(beta: float, z: float) -> tuple[float, int]:
    """Estimate (decimal digits lost to cancellation, term count) for the
    power series of E_beta at z."""
    az = abs(z)
    if az == 0.0:
        return 0.0, 1
    lnaz = math.log(az)
    max_ln = 0.0
    k = 1
    n_terms = 1
    while k < 100_000:
        ln_t = k * lnaz - gammaln(beta * k + 1.0)
        if ln_t > max_ln:
            max_ln = ln_t
        n_terms = k
        if ln_t < _LOG_TINY / 2:
            break
        k += 1 + k // 8
    if z > 0:
        return 0.0, n_terms  # positive terms: no cancellation
    # crude lower bound for |E_beta(z)| on the negative axis
    ln_result = min(0.0, -math.log1p(az))
    lost = (max_ln - ln_result) / math.log(10.0)
    return max(lost, 0.0), n_terms


def _ml_series(beta: float, z: float, tol: float = 1e-13) -> float:
    """Power series for E_beta(z); switches to multiprecision summation when
    float cancellation would exceed the tolerance."""
    if z == 0.0:
        return 1.0
    lost, n_terms = _ml_series_digits(beta, z)
    if lost <= _FLOAT_DIGITS - 2:
        total = [1.0]
        k = 1
        while k <= n_terms + 4:
            ln_t = k * math.log(abs(z)) - gammaln(beta * k + 1.0)
            term = math.exp(ln_t)
            if z < 0 and k % 2 == 1:
                term = -term
            total.append(term)
            if term != 0.0 and abs(term) < tol * 1e-3 and k > 2:
                prev = math.exp((k - 1) * math.log(abs(z)) - gammaln(beta * (k - 1) + 1.0))
                if abs(term) < prev:  # past the hump, safe to stop
                    break
            k += 1
        return math.fsum(total)
    with mpmath.workdps(int(lost) + 25):
        s = mpmath.mpf(0)
        zm = mpmath.mpf(z)
        for k in range(n_terms + 10):
            s += zm**k / mpmath.gamma(beta * k + 1)
        return float(s)


def _ml_integral(beta: float, z: float) -> float:
    """Spectral-density representation of E_beta(z) for z < 0, 0 < beta < 1:

        E_beta(-x) = sin(pi b)/(pi b) * int_0^inf e^{-x u^{1/b}}
                     / (u^2 + 2 u cos(pi b) + 1) du
    """
    x = -z
    if not x > 0.0:
        raise ValueError("integral branch requires z < 0")
    c = math.cos(math.pi * beta)
    pref = math.sin(math.pi * beta) / (math.pi * beta)
    inv_beta = 1.0 / beta

    def f(u: float) -> float:
        return math.exp(-x * u**inv_beta) / (u * (u + 2.0 * c) + 1.0)

    opts = dict(epsabs=1e-15, epsrel=1e-12, limit=200)
    # split around u = 1 where the integrand peaks sharply as beta -> 1
    total = quad(f, 0.0, 2.0, points=[1.0], **opts)[0]
    total += quad(f, 2.0, np.inf, **opts)[0]
    return pref * total


def _ml_asymptotic(beta: float, z: float, max_terms: int = 40) -> float:
    """Algebraic tail expansion E_beta(-x) ~ sum_m (-1)^{m+1} x^-m / Gamma(1 - m beta),
    truncated at the smallest term."""
    x = -z
    total = 0.0
    prev = math.inf
    for m in range(1, max_terms + 1):
        coeff = rgamma(1.0 - m * beta)
        term = ((-1.0) ** (m + 1)) * coeff * x ** (-float(m))
        if abs(term) > prev:
            break
        total += term
        if abs(term) < 1e-18 * max(abs(total), 1e-30):
            break
        prev = abs(term) if term != 0.0 else prev
    return total


def _ml_scalar(beta: float, z: float, tol: float) -> float:
    if beta == 1.0:
        return math.exp(z)
    if z == 0.0:
        return 1.0
    if z > 0.0 or -z <= _ML_SERIES_CUT:
        return _ml_series(beta, z, tol=min(tol, 1e-12))
    if -z < _ML_ASYMP_CUT:
        return _ml_integral(beta, z)
    return _ml_asymptotic(beta, z)


def mittag_leffler(beta: float, z, tol: float = 1e-12):
    """Evaluate E_beta(z) for beta in (0, 1].

    Scalars return a float; array-likes are evaluated elementwise (the
    asymptotic branch is vectorized, the others loop).  Relative accuracy on
    z <= 0 is ~1e-10 or better.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"order beta={beta} outside (0, 1]")
    zs = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(zs)):
        raise ValueError("argument z must be finite")
    if zs.ndim == 0:
        return _ml_scalar(beta, float(zs), tol)
    out = np.empty_like(zs)
    if beta == 1.0:
        return np.exp(zs)
    far = zs <= -_ML_ASYMP_CUT
    if np.any(far):
        x = -zs[far]
        total = np.zeros_like(x)
        prev = np.full_like(x, np.inf)
        active = np.ones_like(x, dtype=bool)
        for m in range(1, 41):
            term = ((-1.0) ** (m + 1)) * rgamma(1.0 - m * beta) * x ** (-float(m))
            at = np.abs(term)
            active &= at <= prev
            total[active] += term[active]
            prev = np.where(at > 0, at, prev)
            if not np.any(active) or np.max(at[active], initial=0.0) < 1e-18:
                break
        out[far] = total
    for idx in np.ndindex(zs.shape):
        if not far[idx]:
            out[idx] = _ml_scalar(beta, float(zs[idx]), tol)
    return out


# ---------------------------------------------------------------------------
# M-Wright function
# ---------------------------------------------------------------------------


def _mw_asymp_log(beta: float, x: float) -> float:
    """log of the leading saddle-point estimate of M_beta(x), x > 0."""
    c = 1.0 / (1.0 - beta)
    b_const = (1.0 - beta) * beta ** (beta * c)
    a_pow = (2.0 * beta - 1.0) / (2.0 * (1.0 - beta))
    ln_a = a_pow * math.log(beta) - 0.5 * math.log(2.0 * math.pi * (1.0 - beta))
    return ln_a + a_pow * math.log(x) - b_const * x**c


def _mw_series_digits(beta: float, x: float) -> tuple[float, int]:
    """Cancellation estimate (digits, term count) for the M-Wright series."""
    if x == 0.0:
        return 0.0, 1
    lnx = math.log(x)
    max_ln = -math.inf
    k = 0
    n_terms = 1
    while k < 200_000:
        w = beta * (k + 1)
        # |term| = x^k / k! * |1/Gamma(1-w)| = x^k Gamma(w) |sin(pi w)| / (pi k!)
        ln_t = k * lnx - gammaln(k + 1.0) + gammaln(w) - math.log(math.pi)
        max_ln = max(max_ln, ln_t)
        n_terms = k + 1
        if ln_t < _LOG_TINY and k * lnx - gammaln(k + 1.0) < 0:
            break
        k += 1 + k // 8
    ln_result = _mw_asymp_log(beta, x) if x > 1e-8 else 0.0
    lost = (max_ln - min(ln_result, 0.0)) / math.log(10.0)
    return max(lost, 0.0), n_terms


def _mw_series(beta: float, x: float) -> float:
    """Alternating series for M_beta(x) with compensated float summation,
    escalating to multiprecision when cancellation demands it."""
    if x == 0.0:
        return float(rgamma(1.0 - beta))
    lost, n_terms = _mw_series_digits(beta, x)
    if lost <= _FLOAT_DIGITS - 2:
        terms = []
        p = 1.0  # x^k / k!
        k = 0
        while k <= n_terms + 8:
            r = float(rgamma(1.0 - beta * (k + 1)))
            term = p * r if k % 2 == 0 else -p * r
            terms.append(term)
            if k > 2 and p < 1e-18:
                break
            k += 1
            p *= x / k
        return math.fsum(terms)
    with mpmath.workdps(int(lost) + 25):
        s = mpmath.mpf(0)
        xm = mpmath.mpf(x)
        for k in range(n_terms + 12):
            t = (-xm) ** k * mpmath.rgamma(1 - beta * (k + 1)) / mpmath.factorial(k)
            s += t
        return float(s)


def _mw_contour(beta: float, x: float) -> float:
    """Bromwich-integral evaluation of M_beta(x) on the vertical line through
    the real saddle of exp(sigma - x sigma^beta); accurate at large x."""
    if x <= 0.0:
        raise ValueError("contour branch requires x > 0")
    sig = (beta * x) ** (1.0 / (1.0 - beta))
    phi0 = sig - x * sig**beta
    if phi0 < _LOG_TINY:
        return 0.0
    curv = x * beta * (1.0 - beta) * sig ** (beta - 2.0)
    width = 1.0 / math.sqrt(curv)

    def rel_integrand(y: np.ndarray) -> np.ndarray:
        s = sig + 1j * y
        return np.real(np.exp(s - x * s**beta - phi0) * s ** (beta - 1.0))

    # expand the truncation until the integrand has decayed
    t_max = 8.0 * width
    while True:
        s = sig + 1j * t_max
        if (s - x * s**beta).real - phi0 < -42.0 or t_max > 1e6 * width:
            break
        t_max *= 2.0

    val_prev = None
    n = max(200, int(t_max / (width / 6.0)))
    for _ in range(6):
        y = np.linspace(0.0, t_max, n + 1)
        f = rel_integrand(y)
        val = (np.sum(f) - 0.5 * (f[0] + f[-1])) * (t_max / n)
        if val_prev is not None and abs(val - val_prev) <= 1e-12 * max(abs(val), 1e-12):
            break
        val_prev = val
        n *= 2
    return math.exp(phi0) * val / math.pi


def m_wright(beta: float, x) -> float:
    """Evaluate M_beta(x) for beta in (0, 1), x >= 0.

    Scalars return a float; array input is evaluated elementwise.  The result
    is the nonnegative probability-density kernel: ``t^-beta M_beta(s t^-beta)``
    is the density in ``s`` of the inverse beta-stable subordinator at time ``t``.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError(f"order beta={beta} outside (0, 1)")
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0) or not np.all(np.isfinite(xs)):
        raise ValueError("argument x must be finite and >= 0")
    if xs.ndim == 0:
        return _mw_scalar(beta, float(xs))
    return np.array([_mw_scalar(beta, float(v)) for v in xs.ravel()]).reshape(xs.shape)


def _mw_scalar(beta: float, x: float) -> float:
    if x == 0.0:
        return float(rgamma(1.0 - beta))
    if _mw_asymp_log(beta, x) < _LOG_TINY + 10.0:
        return 0.0
    lost, _ = _mw_series_digits(beta, x)
    if lost <= 40.0:
        return _mw_series(beta, x)
    return _mw_contour(beta, x)
