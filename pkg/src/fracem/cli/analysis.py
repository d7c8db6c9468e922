"""Post-processing: power-law tail fits, spectra and convergence studies."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..fraccalc import SampledSignal
from ..mittag import ml_relaxation_kernel
from ..wavesolver import (
    Grid1D,
    SourceModel,
    classical_reference,
    prepare_state,
    run_mm,
    solve_modal,
)
from .config import Scenario, build, validate

#: Minimum number of samples inside a tail-fit window.
MIN_TAIL_SAMPLES = 16


@dataclass(frozen=True)
class TailFit:
    """Least-squares line ``log|u| = exponent * log t + intercept``."""

    exponent: float
    intercept: float
    window: tuple[float, float]
    r_squared: float
    samples: int


def default_tail_window(series: SampledSignal) -> tuple[float, float]:
    """The decade of simulated time ending at 90 % of the run."""
    end = 0.9 * float(series.times[-1])
    return end / 10.0, end


def fit_tail(series: SampledSignal, window: tuple[float, float] | None = None) -> TailFit:
    t_start, t_end = default_tail_window(series) if window is None else window
    t = series.times
    if not 0 < t_start < t_end:
        raise ValueError(f"need 0 < t_start < t_end, got ({t_start}, {t_end})")
    if t_start < t[0] or t_end > t[-1]:
        raise ValueError(f"window ({t_start}, {t_end}) outside the series span")
    sel = (t >= t_start) & (t <= t_end)
    count = int(sel.sum())
    if count < MIN_TAIL_SAMPLES:
        raise ValueError(f"window holds {count} samples, need {MIN_TAIL_SAMPLES}")
    mag = np.abs(series.values[sel])
    if np.any(mag <= 0):
        raise ValueError("window contains zero samples; log|u| undefined")
    x = np.log(t[sel])
    y = np.log(mag)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return TailFit(float(slope), float(intercept), (t_start, t_end), max(r2, 0.0), count)


@dataclass(frozen=True)
class Spectrum:
    """One-sided DFT ``X(omega_k) = dt * sum_n u_n exp(-i omega_k t_n)``.

    ``omega`` is in rad/s; the full two-sided spectrum is recovered by
    conjugate symmetry.
    """

    omega: np.ndarray
    values: np.ndarray
    n: int
    dt: float

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def phase(self) -> np.ndarray:
        return np.angle(self.values)

    def energy(self) -> float:
        """``sum |X_k|^2 / (n dt)`` over all two-sided bins; equals ``dt sum |u_n|^2``."""
        weight = np.full(self.values.size, 2.0)
        weight[0] = 1.0
        if self.n % 2 == 0:
            weight[-1] = 1.0
        return float(np.sum(weight * np.abs(self.values) ** 2)) / (self.n * self.dt)


def spectrum(series: SampledSignal) -> Spectrum:
    if len(series) < 8:
        raise ValueError("spectrum needs at least 8 samples")
    n = len(series)
    omega = 2.0 * np.pi * np.fft.rfftfreq(n, series.dt)
    values = series.dt * np.fft.rfft(series.values) * np.exp(-1j * omega * series.t0)
    return Spectrum(omega, values, n, series.dt)


# -- convergence ----------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceRow:
    dt: float
    dx: float | None
    error: float
    order: float | None


@dataclass(frozen=True)
class ConvergenceTable:
    rows: list[ConvergenceRow]
    reference: str
    monotone: bool


def _refine(cfg: dict, level: int) -> dict:
    f = 2**level
    out = dict(cfg)
    out["dt"] = cfg["dt"] / f
    out["nt"] = (cfg["nt"] - 1) * f + 1
    if cfg["equation"] != "modal":
        grid = dict(cfg["grid"])
        grid["dx"] = cfg["grid"]["dx"] / f
        nx = cfg["grid"]["nx"]
        grid["nx"] = nx * f if grid["boundary"] == "periodic" else (nx - 1) * f + 1
        out["grid"] = grid
        out["probes"] = [i * f for i in cfg["probes"]]
    return out


def _solve(s: Scenario) -> np.ndarray:
    if s.equation == "modal":
        return solve_modal(
            s.mm, s.k, s.source, s.dt, s.nt,
            blowup_threshold=s.config["stability"]["blowup_threshold"],
        ).values
    state, p = prepare_state(
        s.equation, s.regime, s.medium, s.grid, s.source, s.dt, s.nt,
        history_window=s.config["history_window"],
        blowup_threshold=s.config["stability"]["blowup_threshold"],
    )
    return run_mm(state, p).current.copy()


def _reference_kind(s: Scenario) -> str:
    if s.source.amplitude == 0:
        return "zero"
    p = s.mm
    if s.equation == "modal":
        if p.lambda1 == 0 and s.source.kind == "impulse" and p.lambda2 * s.k**2 > 0:
            return "modal-green"
        return "finest"
    if (
        p.lambda1 == 0
        and p.lambda2 > 0
        and s.source.kind != "impulse"
        and s.source.profile.kind == "gaussian"
    ):
        return "classical"
    return "finest"


def _classical(s: Scenario) -> np.ndarray:
    grid: Grid1D = s.grid
    src: SourceModel = s.source
    c = math.sqrt(s.mm.lambda2)
    scale = s.mm.lambda2 * s.medium.mu * src.amplitude
    if s.equation == "electric":
        def temporal(tau):
            return -scale * src.temporal_derivative(tau)
        antiderivative = src.profile.antiderivative
    else:
        def temporal(tau):
            return scale * src.temporal(tau)
        antiderivative = src.profile.value
    if src.kind == "gaussian-pulse":
        support = (src.center - 12 * src.width, src.center + 12 * src.width)
    else:
        support = (src.center, src.center + src.width)
    period = grid.length if grid.boundary == "periodic" else None
    t = s.dt * (s.nt - 1)
    return classical_reference(
        grid.x - src.profile.center, t, c, temporal, antiderivative,
        t_support=support, period=period,
    )


def _modal_error(u: np.ndarray, ref: np.ndarray, t: np.ndarray, t_min: float) -> float:
    sel = t >= t_min
    return float(np.max(np.abs(u[sel] - ref[sel])) / np.max(np.abs(ref[sel])))


def convergence_study(cfg: dict, levels: int) -> ConvergenceTable:
    """Errors under simultaneous halving of ``dt`` (and ``dx``) over *levels* runs.

    The reference is, in order of preference: zero for a zero source, the
    modal Green's function for impulse-driven single-term modes, the
    classical traveling-wave solution when the fractional term vanishes,
    and otherwise the run one level finer than the last. Modal errors are
    sup norms over ``t >= 10 dt`` of the coarsest run, relative to the
    reference peak there; grid errors are discrete L2 norms of the final
    snapshot.
    """
    if levels < 2:
        raise ValueError("need at least two refinement levels")
    base = validate(cfg)
    kind = _reference_kind(build(base))
    t_min = 10.0 * base["dt"]
    scenarios = [build(validate(_refine(base, lvl))) for lvl in range(levels)]
    solutions = [_solve(s) for s in scenarios]
    finest = None
    if kind == "finest":
        fine_s = build(validate(_refine(base, levels)))
        finest = (fine_s, _solve(fine_s))

    rows: list[ConvergenceRow] = []
    for lvl, (s, u) in enumerate(zip(scenarios, solutions)):
        dx = None if s.grid is None else s.grid.dx
        if kind == "zero":
            err = float(np.max(np.abs(u))) if u.size else 0.0
        elif s.equation == "modal":
            t = s.dt * np.arange(s.nt)
            if kind == "modal-green":
                ref = np.zeros_like(t)
                start = s.source.center
                live = t > start
                ref[live] = s.source.amplitude * ml_relaxation_kernel(
                    s.mm.alpha, s.mm.lambda2 * s.k**2, t[live] - start
                )
            else:
                step = 2 ** (levels - lvl)
                ref = finest[1][::step]
            err = _modal_error(u, ref, t, t_min)
        else:
            if kind == "classical":
                ref = _classical(s)
            else:
                step = 2 ** (levels - lvl)
                ref = finest[1][::step]
            err = float(math.sqrt(s.grid.dx * np.sum((u - ref) ** 2)))
        order = None
        if rows and rows[-1].error > 0 and err > 0:
            order = math.log2(rows[-1].error / err)
        rows.append(ConvergenceRow(s.dt, dx, err, order))

    errors = [r.error for r in rows]
    monotone = all(e == 0 for e in errors) or all(b < a for a, b in zip(errors, errors[1:]))
    return ConvergenceTable(rows, kind, monotone)
