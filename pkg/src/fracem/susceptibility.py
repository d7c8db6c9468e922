r"""Universal-response susceptibility models.

Sign conventions used throughout the package:

* Fourier transform :math:`\hat f(\omega) = \int f(t) e^{-i\omega t}\,dt`, so a
  causal fractional derivative of order :math:`q` multiplies the spectrum by
  :math:`(i\omega)^q`.
* :math:`(i\omega)^q = |\omega|^q \exp(i q \pi\,\mathrm{sgn}(\omega)/2)`.
* :math:`\tilde\chi = \chi' - i\chi''`, with :math:`\chi''` the loss.
* :math:`\omega` is angular frequency in rad/s and the amplitudes carry
  whatever units make :math:`\tilde\chi` dimensionless.

With these conventions both models satisfy the reality condition
:math:`\chi'(-\omega) = \chi'(\omega)`, :math:`\chi''(-\omega) = -\chi''(\omega)`.

Far above the loss peak the high-frequency model
:math:`\chi_\alpha (i\omega)^{-\alpha}` gives the frequency-independent ratio
:math:`\chi''/\chi' = \cot(\pi n / 2)` with :math:`n = 1 - \alpha`. Far below it
the low-frequency model :math:`\tilde\chi(0) - \chi_\beta (i\omega)^\beta` gives
:math:`\chi'' / (\chi'(0) - \chi') = \tan(\pi m / 2)` with :math:`m = \beta`.
The loss peak itself is not modelled; callers pick the regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np


def _check_unit_interval(name: str, value: float) -> None:
    if not (math.isfinite(value) and 0.0 < value < 1.0):
        raise ValueError(f"{name} must lie in (0, 1), got {value}")


def _check_positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0.0):
        raise ValueError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class HighFreqModel:
    """``chi(omega) = chi_alpha * (i omega)**(-alpha)``, valid above the loss peak."""

    chi_alpha: float
    alpha: float

    def __post_init__(self) -> None:
        _check_positive("chi_alpha", self.chi_alpha)
        _check_unit_interval("alpha", self.alpha)


@dataclass(frozen=True)
class LowFreqModel:
    """``chi(omega) = chi0 - chi_beta * (i omega)**beta``, valid below the loss peak."""

    chi0: float
    chi_beta: float
    beta: float

    def __post_init__(self) -> None:
        _check_positive("chi0", self.chi0)
        _check_positive("chi_beta", self.chi_beta)
        _check_unit_interval("beta", self.beta)


SusceptibilityModel = Union[HighFreqModel, LowFreqModel]


@dataclass(frozen=True)
class ComplexSusceptibility:
    """Real part and loss of ``chi = re - 1j * im_loss`` (scalars or arrays)."""

    re: float | np.ndarray
    im_loss: float | np.ndarray

    @property
    def value(self) -> complex | np.ndarray:
        return self.re - 1j * self.im_loss


def fractional_power(omega, q: float) -> np.ndarray:
    """``(i omega)**q`` on the branch ``|omega|**q * exp(i q pi sgn(omega) / 2)``."""
    omega = np.asarray(omega, dtype=np.float64)
    return np.abs(omega) ** q * np.exp(0.5j * q * np.pi * np.sign(omega))


def _split(chi) -> ComplexSusceptibility:
    chi = np.asarray(chi)
    re, loss = chi.real, -chi.imag
    if chi.ndim == 0:
        return ComplexSusceptibility(float(re), float(loss))
    return ComplexSusceptibility(re, loss)


def chi_high(m: HighFreqModel, omega) -> ComplexSusceptibility:
    omega = np.asarray(omega, dtype=np.float64)
    if np.any(omega == 0):
        raise ValueError("the high-frequency model diverges at omega = 0")
    return _split(m.chi_alpha * fractional_power(omega, -m.alpha))


def chi_low(m: LowFreqModel, omega) -> ComplexSusceptibility:
    omega = np.asarray(omega, dtype=np.float64)
    return _split(m.chi0 - m.chi_beta * fractional_power(omega, m.beta))


def susceptibility(model: SusceptibilityModel, omega) -> np.ndarray:
    """Complex ``chi(omega)`` for either regime.

    The high-frequency model is set to zero at ``omega == 0``; spectral
    callers only feed it zero-mean signals.
    """
    omega = np.asarray(omega, dtype=np.float64)
    if isinstance(model, HighFreqModel):
        out = np.zeros(omega.shape, dtype=np.complex128)
        nz = omega != 0
        out[nz] = model.chi_alpha * fractional_power(omega[nz], -model.alpha)
        return out
    if isinstance(model, LowFreqModel):
        return model.chi0 - model.chi_beta * fractional_power(omega, model.beta)
    raise TypeError(f"unsupported model {type(model).__name__}")


def exponent_map(n: float, m: float) -> tuple[float, float]:
    """Measured response exponents ``(n, m)`` to model orders ``(alpha, beta)``."""
    _check_unit_interval("n", n)
    _check_unit_interval("m", m)
    return 1.0 - n, m


def inverse_exponent_map(alpha: float, beta: float) -> tuple[float, float]:
    _check_unit_interval("alpha", alpha)
    _check_unit_interval("beta", beta)
    return 1.0 - alpha, beta
