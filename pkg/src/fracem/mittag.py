r"""Two-parameter Mittag-Leffler function.

.. math::

    E_{\alpha,\beta}(z) = \sum_{k=0}^{\infty} \frac{z^k}{\Gamma(\alpha k + \beta)}

Three evaluation paths are combined, each with its own error estimate; a
path is accepted only when that estimate is below the requested relative
tolerance (default ``1e-10``).

1. Power series in double precision. Rounding is estimated as a few ulps of
   ``sum |term_k|``, which grows like ``exp(|z|^{1/alpha})`` on the negative
   axis. Tried when ``|z|^{1/alpha} <= SERIES_RADIUS``.
2. Large-argument expansion

   .. math::

       E_{\alpha,\beta}(z) \sim \frac{1}{\alpha} \sum_{j} \zeta_j^{1-\beta} e^{\zeta_j}
           - \sum_{k \ge 1} \frac{z^{-k}}{\Gamma(\beta - \alpha k)},

   where :math:`\zeta_j = |z|^{1/\alpha} e^{i(\theta + 2\pi j)/\alpha}` runs
   over the roots with :math:`|\theta + 2\pi j| < \alpha\pi` (roots on the
   Stokes boundary count with weight 1/2). The algebraic sum is cut at its
   smallest term, which also serves as the error estimate. Tried when
   ``|z|^{1/alpha} >= ASYMPTOTIC_RADIUS``.
3. Power series in extended precision (mpmath), with the working precision
   raised until the cancellation estimate passes. This covers the band
   where neither double-precision path is accurate enough.

The radii only decide which paths are tried first. They were picked by
comparing the double-precision paths against the extended-precision series
on ``alpha, beta in [0.3, 2]`` and real ``z in [-50, 5]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.special import gammaln, gammasgn, rgamma

#: Double-precision series is attempted for ``|z|**(1/alpha)`` up to this value.
SERIES_RADIUS = 12.0
#: Asymptotic expansion is attempted for ``|z|**(1/alpha)`` from this value.
ASYMPTOTIC_RADIUS = 8.0
#: Default relative accuracy target.
DEFAULT_TOL = 1e-10

_EPS = np.finfo(np.float64).eps
_MAX_SERIES_TERMS = 1 << 15
_MAX_DPS = 2000


class ConvergenceError(ArithmeticError):
    """No evaluation path reached the requested accuracy."""


@dataclass(frozen=True)
class MLParams:
    alpha: float
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and 0.0 < self.alpha <= 3.0):
            raise ValueError(f"alpha must lie in (0, 3], got {self.alpha}")
        if not math.isfinite(self.beta):
            raise ValueError(f"beta must be finite, got {self.beta}")


def _rgamma_terms(a: np.ndarray, log_scale: np.ndarray) -> np.ndarray:
    # exp(log_scale) / Gamma(a), zero at the poles of Gamma
    with np.errstate(over="ignore", invalid="ignore"):
        mag = np.exp(log_scale - gammaln(a))
        out = gammasgn(a) * mag
    pole = (a <= 0) & (a == np.round(a))
    out[pole] = 0.0
    return out


def _series_double(alpha: float, beta: float, z: complex, tol: float) -> complex | None:
    if z == 0:
        return complex(rgamma(beta))

    logz = np.log(complex(z))
    total = 0j
    abs_total = 0.0
    chunk = 64
    start = 0
    while start < _MAX_SERIES_TERMS:
        k = np.arange(start, start + chunk, dtype=np.float64)
        mags = _rgamma_terms(alpha * k + beta, k * logz.real)
        if not np.all(np.isfinite(mags)):
            return None
        terms = mags * np.exp(1j * k * logz.imag)
        total += terms.sum()
        abs_total += np.abs(terms).sum()
        # past the peak and negligible
        tail = abs(mags[-1])
        if abs(mags[-1]) <= abs(mags[-2]) and tail <= _EPS * max(abs_total, 1e-300):
            break
        start += chunk
        chunk *= 2
    else:
        return None

    err = 8.0 * _EPS * abs_total
    if err <= tol * abs(total):
        return total
    return None


def _exponential_part(alpha: float, beta: float, z: complex) -> complex:
    theta = math.atan2(z.imag, z.real)
    radius = abs(z) ** (1.0 / alpha)
    bound = alpha * math.pi
    jmax = int(math.ceil((bound + abs(theta)) / (2.0 * math.pi))) + 1
    total = 0j
    for j in range(-jmax, jmax + 1):
        angle = theta + 2.0 * math.pi * j
        if abs(angle) > bound * (1.0 + 1e-12):
            continue
        weight = 0.5 if abs(abs(angle) - bound) <= 1e-12 * bound else 1.0
        zeta = radius * complex(math.cos(angle / alpha), math.sin(angle / alpha))
        # zeta**(1 - beta) on the sheet fixed by angle / alpha
        log_zeta = complex(math.log(radius), angle / alpha)
        total += weight * np.exp((1.0 - beta) * log_zeta + zeta)
    return total / alpha


def _asymptotic(alpha: float, beta: float, z: complex, tol: float) -> complex | None:
    if z == 0:
        return None
    with np.errstate(over="ignore"):
        expo = _exponential_part(alpha, beta, complex(z))
    if not np.isfinite(expo):
        return None

    logz = np.log(complex(z))
    algebraic = 0j
    chunk = 32
    start = 1
    prev_env = math.inf
    while start < _MAX_SERIES_TERMS:
        k = np.arange(start, start + chunk, dtype=np.float64)
        a = beta - alpha * k
        mags = _rgamma_terms(a, -k * logz.real)
        # 1/|Gamma(a)| <= Gamma(1 - a) / pi for a <= 0; the envelope is smooth
        # where the terms themselves vanish or dip near poles of Gamma
        with np.errstate(over="ignore"):
            env = np.exp(gammaln(1.0 - np.minimum(a, 0.0)) - k * logz.real) / math.pi
        if not (np.all(np.isfinite(mags)) and np.all(np.isfinite(env))):
            return None
        terms = -mags * np.exp(-1j * k * logz.imag)
        for term, size, ak in zip(terms, env, a):
            if ak > 0:
                # leading terms before the Gamma poles are always kept
                algebraic += term
                continue
            if size > prev_env:
                # divergence sets in: cut before the smallest term
                total = expo + algebraic
                return total if prev_env <= 0.1 * tol * abs(total) else None
            if size <= 0.01 * tol * abs(expo + algebraic + term):
                return expo + algebraic + term
            algebraic += term
            prev_env = size
        start += chunk
    return None


def _series_mp(alpha: float, beta: float, z: complex, tol: float) -> complex:
    # terms peak near alpha * k + beta ~ |z|**(1/alpha)
    k_peak = max(0.0, (abs(z) ** (1.0 / alpha) - beta) / alpha)
    dps = 30
    while dps <= _MAX_DPS:
        with mpmath.workdps(dps):
            zz = mpmath.mpc(z.real, z.imag)
            a = mpmath.mpf(alpha)
            b = mpmath.mpf(beta)
            eps = mpmath.mpf(10) ** (-dps)
            total = mpmath.mpc(0)
            biggest = mpmath.mpf(0)
            power = mpmath.mpc(1)
            for k in range(_MAX_SERIES_TERMS):
                term = power * mpmath.rgamma(a * k + b)
                total += term
                size = abs(term)
                biggest = max(biggest, size)
                if k > k_peak + 2 and size <= eps * abs(total):
                    break
                power *= zz
            else:
                raise ConvergenceError("series did not terminate")
            if 8 * eps * biggest <= tol * abs(total):
                return complex(total)
            if total == 0:
                needed = 2 * dps
            else:
                needed = int(mpmath.log10(biggest / (tol * abs(total)))) + 25
            dps = max(needed, dps + 10)
    raise ConvergenceError(
        f"extended-precision series exceeded {_MAX_DPS} digits "
        f"(alpha={alpha}, beta={beta}, z={z})"
    )


def _evaluate(alpha: float, beta: float, z: complex, method: str, tol: float) -> complex:
    radius = abs(z) ** (1.0 / alpha)
    if method == "series":
        value = _series_double(alpha, beta, z, tol) if radius <= SERIES_RADIUS else None
        return value if value is not None else _series_mp(alpha, beta, z, tol)
    if method == "asymptotic":
        value = _asymptotic(alpha, beta, z, tol)
        if value is None:
            raise ConvergenceError(
                f"asymptotic expansion inaccurate at alpha={alpha}, beta={beta}, z={z}"
            )
        return value
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")

    if radius <= SERIES_RADIUS:
        value = _series_double(alpha, beta, z, tol)
        if value is not None:
            return value
    if radius >= ASYMPTOTIC_RADIUS:
        value = _asymptotic(alpha, beta, z, tol)
        if value is not None:
            return value
    return _series_mp(alpha, beta, z, tol)


def mittag_leffler(
    z, alpha: float, beta: float = 1.0, *, method: str = "auto", tol: float = DEFAULT_TOL
):
    """Evaluate :math:`E_{\\alpha,\\beta}(z)`.

    *z* may be a scalar or an array. Real input gives real output. *method*
    is ``"auto"``, ``"series"`` (double or extended precision) or
    ``"asymptotic"``; the latter two exist mainly for cross-validation.
    Raises :class:`ConvergenceError` when the selected paths cannot meet
    *tol*.
    """
    p = MLParams(float(alpha), float(beta))
    arr = np.asarray(z)
    is_real = not np.iscomplexobj(arr)
    flat = arr.astype(np.complex128).ravel()
    out = np.empty(flat.shape, dtype=np.complex128)
    for i, zi in enumerate(flat):
        if not np.isfinite(zi):
            raise ValueError(f"z must be finite, got {zi}")
        out[i] = _evaluate(p.alpha, p.beta, complex(zi), method, tol)
    out = out.reshape(arr.shape)
    if is_real:
        out = out.real
    return out[()] if out.ndim == 0 else out


def ml_relaxation_kernel(alpha: float, c: float, t):
    r"""Impulse response :math:`t^{\alpha-1} E_{\alpha,\alpha}(-c t^\alpha)`.

    This solves :math:`D^\alpha u + c u = \delta(t)` with zero history; for
    ``alpha = 1`` it is :math:`e^{-ct}` and for ``alpha = 2`` it is
    :math:`\sin(\sqrt{c} t) / \sqrt{c}`.
    """
    if not 0.0 < alpha < 3.0:
        raise ValueError(f"alpha must lie in (0, 3), got {alpha}")
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    t = np.asarray(t, dtype=np.float64)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    return t ** (alpha - 1.0) * mittag_leffler(-c * t**alpha, alpha, alpha)
