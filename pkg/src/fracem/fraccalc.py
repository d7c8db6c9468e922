r"""Grünwald-Letnikov fractional operators on uniformly sampled signals.

All operators assume the zero-history convention: the signal vanishes before
its first sample, so the Liouville operators (lower limit :math:`-\infty`) and
the Riemann-Liouville operators (lower limit ``t0``) coincide on the window.

For an order :math:`q` the discrete operator is

.. math::

    (D^q_h f)_i = h^{-q} \sum_{k=0}^{i} w_k f_{i-k},
    \qquad w_k = (-1)^k \binom{q}{k},

with positive ``q`` a derivative and negative ``q`` an integral. Orders such
as :math:`2 - \alpha` or :math:`2 + \beta` are applied as a single operator of
that total order.

Truncation bound
----------------
:func:`apply_liouville_windowed` keeps only the ``window`` most recent
weights. The partial sums of the weights have the closed form

.. math::

    S_n = \sum_{k=0}^{n} w_k = \frac{\Gamma(n + 1 - q)}{\Gamma(1 - q)\,\Gamma(n + 1)},

valid for :math:`|q| < 1`. For a signal of length :math:`L` with
:math:`\sup|f| = M` the dropped tail of every output sample is bounded by

.. math::

    M h^{-q} \sum_{k=W}^{L-1} |w_k| =
    \begin{cases}
        M h^{-q} (S_{W-1} - S_{L-1}), & 0 < q < 1, \\
        M h^{-q} (S_{L-1} - S_{W-1}), & -1 < q < 0,
    \end{cases}

since the weights past ``w_0`` are all negative for derivatives and all
positive for integrals. Without a length the derivative bound uses
:math:`S_{L-1} \to 0` and the integral bound is infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

#: Largest admissible magnitude of an integro-differentiation order.
MAX_ORDER = 4.0


@dataclass(frozen=True)
class SampledSignal:
    """Uniformly sampled real time series starting at *t0*."""

    t0: float
    dt: float
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("values must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not math.isfinite(self.t0):
            raise ValueError("t0 must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.size)

    def with_values(self, values: np.ndarray) -> SampledSignal:
        """Return a signal on the same grid carrying *values*."""
        return SampledSignal(self.t0, self.dt, values)


@dataclass(frozen=True)
class GLWeights:
    order: float
    w: np.ndarray

    def __len__(self) -> int:
        return self.w.size


def check_order(order: float) -> float:
    order = float(order)
    if not math.isfinite(order):
        raise ValueError(f"order must be finite, got {order}")
    if abs(order) > MAX_ORDER:
        raise ValueError(f"|order| must not exceed {MAX_ORDER}, got {order}")
    return order


@lru_cache(maxsize=64)
def _weights(order: float, count: int) -> np.ndarray:
    w = np.empty(count + 1)
    w[0] = 1.0
    if count > 0:
        k = np.arange(1, count + 1, dtype=np.float64)
        w[1:] = np.cumprod(1.0 - (order + 1.0) / k)
    w.flags.writeable = False
    return w


def gl_weights(order: float, count: int) -> GLWeights:
    """Grünwald-Letnikov weights ``w[0..count]`` for *order*.

    Uses the recurrence ``w[k] = w[k-1] * (1 - (order + 1) / k)``. Results are
    cached and returned read-only.
    """
    order = check_order(order)
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    return GLWeights(order, _weights(order, int(count)))


def _convolve(values: np.ndarray, w: np.ndarray, method: str) -> np.ndarray:
    n = values.size
    if method == "direct":
        return np.convolve(values, w)[:n]
    if method == "fft":
        from scipy.signal import fftconvolve

        return fftconvolve(values, w)[:n]
    raise ValueError(f"unknown method {method!r}")


def apply_gl(
    signal: SampledSignal, order: float, *, method: str = "direct"
) -> SampledSignal:
    """Apply the Grünwald-Letnikov operator of *order* to *signal*.

    ``method="direct"`` is the O(N^2) reference sum; ``method="fft"`` batches
    the same convolution through FFTs and agrees up to rounding.
    """
    order = check_order(order)
    if order == 0.0:
        return signal
    w = gl_weights(order, len(signal) - 1).w
    out = _convolve(signal.values, w, method) * signal.dt ** (-order)
    return signal.with_values(out)


def _partial_weight_sum(order: float, n: int) -> float:
    # S_n = Gamma(n + 1 - q) / (Gamma(1 - q) Gamma(n + 1)), |q| < 1
    return math.exp(gammaln(n + 1.0 - order) - gammaln(1.0 - order) - gammaln(n + 1.0))


def _check_windowed_order(order: float) -> float:
    order = check_order(order)
    if not 0.0 < abs(order) < 1.0:
        raise ValueError(f"windowed operators need 0 < |order| < 1, got {order}")
    return order


def truncation_bound(
    order: float,
    window: int,
    dt: float,
    sup_norm: float,
    length: int | None = None,
) -> float:
    """Upper bound on the history dropped by a *window*-sample GL sum.

    *length* is the number of samples in the signal; without it the bound
    covers an unbounded history (finite for derivatives only). See the module
    docstring for the formula.
    """
    order = _check_windowed_order(order)
    if window < 1:
        raise ValueError(f"window must be positive, got {window}")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if sup_norm < 0:
        raise ValueError(f"sup_norm must be nonnegative, got {sup_norm}")
    if sup_norm == 0 or (length is not None and window >= length):
        return 0.0

    head = _partial_weight_sum(order, window - 1)
    if length is None:
        if order < 0:
            return math.inf
        tail = head
    else:
        total = _partial_weight_sum(order, length - 1)
        tail = abs(head - total)
    return sup_norm * dt ** (-order) * tail


def apply_liouville_windowed(
    signal: SampledSignal, order: float, window: int
) -> tuple[SampledSignal, float]:
    """GL operator restricted to the *window* most recent samples.

    Returns the truncated result together with the a-priori bound from
    :func:`truncation_bound` on its deviation from :func:`apply_gl`.
    """
    order = _check_windowed_order(order)
    if window < 1:
        raise ValueError(f"window must be positive, got {window}")
    if window > len(signal):
        raise ValueError(f"window {window} exceeds signal length {len(signal)}")

    w = gl_weights(order, window - 1).w
    out = np.convolve(signal.values, w)[: len(signal)] * signal.dt ** (-order)
    sup_norm = float(np.max(np.abs(signal.values)))
    bound = truncation_bound(order, window, signal.dt, sup_norm, length=len(signal))
    return signal.with_values(out), bound
