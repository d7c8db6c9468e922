"""Polarization density driven by an electric field sample.

The time-domain operators are the primary definitions:

* high-frequency regime: ``P = eps0 * chi_alpha * I^alpha E`` (fractional integral)
* low-frequency regime: ``P = eps0 * (chi0 * E - chi_beta * D^beta E)``

Both use the Grünwald-Letnikov operators from :mod:`fracem.fraccalc` with zero
history before the first sample, so ``P(t)`` depends only on ``E`` up to ``t``.

:func:`polarization_spectral` multiplies the spectrum of ``E`` by ``chi(omega)``
instead and is kept as an independent check of the time-domain operators. It
is only meaningful for zero-mean, band-limited pulses: the high-frequency
model diverges at DC and the DFT is periodic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.constants import epsilon_0

from .fraccalc import SampledSignal, apply_gl
from .susceptibility import HighFreqModel, LowFreqModel, SusceptibilityModel, susceptibility

#: Vacuum permittivity in F/m.
EPSILON_0 = epsilon_0
#: Default zero-padding factor of the spectral oracle.
PAD_FACTOR = 4
#: Fraction of the spectrum just below Nyquist checked for leakage.
_EDGE_FRACTION = 0.1
_EDGE_LEVEL = 1e-8


class AliasingWarning(UserWarning):
    """Spectral content near the Nyquist edge is not negligible."""


@dataclass(frozen=True)
class PolarizationResult:
    p: SampledSignal
    regime: str


def polarization_high(
    e: SampledSignal, m: HighFreqModel, *, eps0: float = EPSILON_0, method: str = "direct"
) -> PolarizationResult:
    p = apply_gl(e, -m.alpha, method=method).values * (eps0 * m.chi_alpha)
    return PolarizationResult(e.with_values(p), "high")


def polarization_low(
    e: SampledSignal, m: LowFreqModel, *, eps0: float = EPSILON_0, method: str = "direct"
) -> PolarizationResult:
    deriv = apply_gl(e, m.beta, method=method).values
    p = eps0 * (m.chi0 * e.values - m.chi_beta * deriv)
    return PolarizationResult(e.with_values(p), "low")


def polarization(
    e: SampledSignal, model: SusceptibilityModel, **kwargs
) -> PolarizationResult:
    if isinstance(model, HighFreqModel):
        return polarization_high(e, model, **kwargs)
    if isinstance(model, LowFreqModel):
        return polarization_low(e, model, **kwargs)
    raise TypeError(f"unsupported model {type(model).__name__}")


def polarization_spectral(
    e: SampledSignal,
    model: SusceptibilityModel,
    *,
    eps0: float = EPSILON_0,
    pad_factor: int = PAD_FACTOR,
    full: bool = False,
) -> PolarizationResult:
    """``P = eps0 * IDFT(chi(omega) * DFT(E))`` on a zero-padded grid.

    The input is padded to ``pad_factor * len(e)`` samples (at least 4x) to
    mimic the transform on the whole line. With ``full=True`` the whole
    padded period is returned instead of the first ``len(e)`` samples.
    Emits :class:`AliasingWarning` when the spectrum of ``e`` near Nyquist
    exceeds ``1e-8`` of its peak.
    """
    if pad_factor < 4:
        raise ValueError(f"pad_factor must be at least 4, got {pad_factor}")
    n = len(e)
    size = pad_factor * n
    spectrum = np.fft.rfft(e.values, size)
    mag = np.abs(spectrum)
    peak = mag.max()
    edge = mag[int((1.0 - _EDGE_FRACTION) * mag.size) :]
    if peak > 0 and edge.max() > _EDGE_LEVEL * peak:
        warnings.warn(
            f"band-edge content {edge.max() / peak:.2e} of peak; result may alias",
            AliasingWarning,
            stacklevel=2,
        )

    omega = 2.0 * np.pi * np.fft.rfftfreq(size, e.dt)
    p = eps0 * np.fft.irfft(susceptibility(model, omega) * spectrum, size)
    regime = "high" if isinstance(model, HighFreqModel) else "low"
    if full:
        return PolarizationResult(SampledSignal(e.t0, e.dt, p), regime)
    return PolarizationResult(e.with_values(p[:n]), regime)
