"""Fractional-order dielectric response and wave propagation in the time domain."""

from .fraccalc import (
    GLWeights,
    SampledSignal,
    apply_gl,
    apply_liouville_windowed,
    gl_weights,
    truncation_bound,
)
from .mittag import ConvergenceError, mittag_leffler, ml_relaxation_kernel
from .polarization import polarization, polarization_spectral
from .susceptibility import (
    ComplexSusceptibility,
    HighFreqModel,
    LowFreqModel,
    chi_high,
    chi_low,
    exponent_map,
    susceptibility,
)
from .wavesolver import (
    FieldState,
    Grid1D,
    InstabilityError,
    MediumParams,
    MMParams,
    SourceModel,
    SpatialProfile,
    map_mfe1,
    map_mfe2,
    solve_electric,
    solve_magnetic,
    solve_modal,
    step_mm,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexSusceptibility",
    "ConvergenceError",
    "FieldState",
    "GLWeights",
    "Grid1D",
    "HighFreqModel",
    "InstabilityError",
    "LowFreqModel",
    "MMParams",
    "MediumParams",
    "SampledSignal",
    "SourceModel",
    "SpatialProfile",
    "apply_gl",
    "apply_liouville_windowed",
    "chi_high",
    "chi_low",
    "exponent_map",
    "gl_weights",
    "map_mfe1",
    "map_mfe2",
    "mittag_leffler",
    "ml_relaxation_kernel",
    "polarization",
    "polarization_spectral",
    "solve_electric",
    "solve_magnetic",
    "solve_modal",
    "step_mm",
    "susceptibility",
    "truncation_bound",
]
