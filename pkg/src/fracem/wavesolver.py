r"""Time stepping of the fractional field equations on 1-D transverse grids.

Every field equation handled here is brought to the general form

.. math::

    D^\alpha u - \lambda_1 D^\beta u - \lambda_2 \partial_x^2 u = f,
    \qquad 1 \le \beta < \alpha < 3,

with zero history (``u = 0`` for ``t <= 0``). Both fractional derivatives are
Grünwald-Letnikov sums over the full stored history, collapsed into one
weight vector

.. math::

    W_j = h^{-\alpha} w^{(\alpha)}_j - \lambda_1 h^{-\beta} w^{(\beta)}_j,

and the update at level ``n`` is explicit:

.. math::

    W_0 u_n = f_{n-1} + \lambda_2 (\delta_x^2 u)_{n-1} - \sum_{j \ge 1} W_j u_{n-j}.

The Laplacian and the drive sit one level back, which makes the classical
case (``alpha = 2``, ``lambda1 = 0``) the standard leapfrog scheme, second
order in time and space. For fractional orders the scheme is first order in
time.

Geometry: the field component is transverse (``E_y`` or ``B_z``) and varies
along ``x`` only, so ``grad div E`` vanishes. The current density is
``j_y(t, x) = A g(t) phi(x)``; the electric equations are driven by
``-mu dj/dt`` and the magnetic ones by ``mu (curl j)_z = mu dj/dx``. After
normalizing to the form above, ``f = lambda2 * (physical drive)``.

An impulse is a rectangular deposit of unit integral over the first step,
``g_n = delta_{n, n0} / dt``.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import erf

from .fraccalc import SampledSignal, gl_weights

#: Default magnitude above which a run is declared unstable.
BLOWUP_THRESHOLD = 1e12


def _numeric(*values) -> bool:
    # range checks are skipped for symbolic parameters (coefficient algebra)
    return all(isinstance(v, numbers.Real) for v in values)


class InstabilityError(RuntimeError):
    """The field exceeded the blow-up threshold."""

    def __init__(self, step: int, magnitude: float) -> None:
        super().__init__(f"field magnitude {magnitude:.3e} at step {step}")
        self.step = step
        self.magnitude = magnitude


@dataclass(frozen=True)
class MMParams:
    alpha: float
    beta: float
    lambda1: float
    lambda2: float

    def __post_init__(self) -> None:
        if _numeric(self.alpha, self.beta) and not 1.0 <= self.beta < self.alpha < 3.0:
            raise ValueError(
                f"need 1 <= beta < alpha < 3, got alpha={self.alpha}, beta={self.beta}"
            )

    @classmethod
    def classical(cls, wave_speed_sq: float) -> MMParams:
        """Plain wave equation ``u_tt - c^2 u_xx = f``."""
        return cls(2.0, 1.0, 0.0, wave_speed_sq)


@dataclass(frozen=True)
class MediumParams:
    """Vacuum constants plus the constants of one or both response regimes.

    ``alpha`` and ``beta`` are the susceptibility exponents of the high and
    low regime (``0 < alpha, beta < 1``). Zero amplitudes are allowed here so
    that the classical limit can be expressed.
    """

    eps0: float = 1.0
    mu: float = 1.0
    chi_alpha: float | None = None
    alpha: float | None = None
    chi0: float | None = None
    chi_beta: float | None = None
    beta: float | None = None

    def __post_init__(self) -> None:
        given = [v for v in vars(self).values() if v is not None]
        if not _numeric(*given):
            return
        if not (self.eps0 > 0 and self.mu > 0):
            raise ValueError("eps0 and mu must be positive")
        if (self.chi_alpha is None) != (self.alpha is None):
            raise ValueError("chi_alpha and alpha must be given together")
        if self.chi_alpha is not None:
            if self.chi_alpha < 0:
                raise ValueError(f"chi_alpha must be nonnegative, got {self.chi_alpha}")
            if not 0 < self.alpha < 1:
                raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        low = (self.chi0, self.chi_beta, self.beta)
        if any(v is None for v in low) and any(v is not None for v in low):
            raise ValueError("chi0, chi_beta and beta must be given together")
        if self.chi_beta is not None:
            if self.chi0 < 0:
                raise ValueError(f"chi0 must be nonnegative, got {self.chi0}")
            if not self.chi_beta > 0:
                raise ValueError(f"chi_beta must be positive, got {self.chi_beta}")
            if not 0 < self.beta < 1:
                raise ValueError(f"beta must lie in (0, 1), got {self.beta}")

    @classmethod
    def high(cls, chi_alpha, alpha, eps0=1.0, mu=1.0) -> MediumParams:
        return cls(eps0=eps0, mu=mu, chi_alpha=chi_alpha, alpha=alpha)

    @classmethod
    def low(cls, chi0, chi_beta, beta, eps0=1.0, mu=1.0) -> MediumParams:
        return cls(eps0=eps0, mu=mu, chi0=chi0, chi_beta=chi_beta, beta=beta)

    @property
    def has_high(self) -> bool:
        return self.chi_alpha is not None

    @property
    def has_low(self) -> bool:
        return self.chi_beta is not None

    @property
    def v2(self):
        return 1 / (self.eps0 * self.mu)

    @property
    def v_beta2(self):
        self._require_low()
        return 1 / (self.eps0 * self.mu * (1 + self.chi0))

    @property
    def a_beta(self):
        self._require_low()
        return self.chi_beta / (1 + self.chi0)

    def _require_low(self) -> None:
        if not self.has_low:
            raise ValueError("regime mismatch: low-frequency constants are missing")

    def _require_high(self) -> None:
        if not self.has_high:
            raise ValueError("regime mismatch: high-frequency constants are missing")


def map_mfe1(m: MediumParams) -> MMParams:
    """High-frequency magnetic (and electric) equation in general form.

    ``alpha = 2``, ``beta = 2 - alpha_regime``, ``lambda1 = -chi_alpha``,
    ``lambda2 = v**2``.
    """
    m._require_high()
    return MMParams(2, 2 - m.alpha, -m.chi_alpha, m.v2)


def map_mfe2(m: MediumParams) -> MMParams:
    """Low-frequency magnetic (and electric) equation in general form.

    ``alpha = 2 + beta_regime``, ``beta = 2``, ``lambda1 = (1 + chi0) / chi_beta``,
    ``lambda2 = -1 / (eps0 mu chi_beta)``.
    """
    m._require_low()
    return MMParams(2 + m.beta, 2, 1 / m.a_beta, -m.v_beta2 / m.a_beta)


def map_regime(regime: str, m: MediumParams) -> MMParams:
    if regime == "high":
        return map_mfe1(m)
    if regime == "low":
        return map_mfe2(m)
    raise ValueError(f"regime must be 'high' or 'low', got {regime!r}")


# -- equation bookkeeping -------------------------------------------------


@dataclass(frozen=True)
class FieldEquation:
    """Linear field equation ``sum_q c_q D^q u + lap * u_xx = source * drive``.

    ``time_terms`` maps derivative orders to coefficients; ``drive`` names the
    physical forcing (``"curl_j"`` or ``"dj_dt"``).
    """

    time_terms: dict
    laplacian: object
    source: object
    drive: str

    def scaled(self, factor) -> FieldEquation:
        return FieldEquation(
            {q: c * factor for q, c in self.time_terms.items()},
            self.laplacian * factor,
            self.source * factor,
            self.drive,
        )


def mfe1_equation(m: MediumParams) -> FieldEquation:
    m._require_high()
    return FieldEquation({2: 1 / m.v2, 2 - m.alpha: m.chi_alpha / m.v2}, -1, m.mu, "curl_j")


def mfe2_equation(m: MediumParams) -> FieldEquation:
    m._require_low()
    return FieldEquation(
        {2: 1 / m.v_beta2, 2 + m.beta: -m.a_beta / m.v_beta2}, -1, m.mu, "curl_j"
    )


def efe1_equation(m: MediumParams) -> FieldEquation:
    m._require_high()
    return FieldEquation({2: 1 / m.v2, 2 - m.alpha: m.chi_alpha / m.v2}, -1, -m.mu, "dj_dt")


def efe2_equation(m: MediumParams) -> FieldEquation:
    m._require_low()
    return FieldEquation(
        {2: 1 / m.v_beta2, 2 + m.beta: -m.a_beta / m.v_beta2}, -1, -m.mu, "dj_dt"
    )


def mm_equation(p: MMParams, source_scale, drive: str = "curl_j") -> FieldEquation:
    """General form with ``f = lambda2 * source_scale * drive``."""
    return FieldEquation(
        {p.alpha: 1, p.beta: -p.lambda1}, -p.lambda2, p.lambda2 * source_scale, drive
    )


# -- grids and sources ----------------------------------------------------


@dataclass(frozen=True)
class Grid1D:
    nx: int
    dx: float
    boundary: str = "periodic"

    def __post_init__(self) -> None:
        if self.nx < 3:
            raise ValueError(f"nx must be at least 3, got {self.nx}")
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")
        if self.boundary not in ("periodic", "fixed-zero"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @property
    def x(self) -> np.ndarray:
        return self.dx * np.arange(self.nx)

    @property
    def length(self) -> float:
        return self.nx * self.dx if self.boundary == "periodic" else (self.nx - 1) * self.dx

    def laplacian(self, u: np.ndarray) -> np.ndarray:
        if self.boundary == "periodic":
            return (np.roll(u, 1) - 2.0 * u + np.roll(u, -1)) / self.dx**2
        out = np.zeros_like(u)
        out[1:-1] = (u[:-2] - 2.0 * u[1:-1] + u[2:]) / self.dx**2
        return out


@dataclass(frozen=True)
class SpatialProfile:
    """``gaussian`` (center, width) or ``point`` (deposit at the nearest node)."""

    kind: str = "gaussian"
    center: float = 0.0
    width: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("gaussian", "point"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.kind == "gaussian" and not self.width > 0:
            raise ValueError("gaussian profile width must be positive")

    def sample(self, grid: Grid1D, derivative: bool = False) -> np.ndarray:
        x = grid.x
        if self.kind == "gaussian":
            y = x - self.center
            g = np.exp(-0.5 * (y / self.width) ** 2)
            return -y / self.width**2 * g if derivative else g
        i0 = int(round(self.center / grid.dx))
        if not 0 <= i0 < grid.nx:
            raise ValueError("point source lies outside the grid")
        out = np.zeros(grid.nx)
        if not derivative:
            out[i0] = 1.0 / grid.dx
        else:
            out[(i0 - 1) % grid.nx] += 1.0 / (2.0 * grid.dx**2)
            out[(i0 + 1) % grid.nx] -= 1.0 / (2.0 * grid.dx**2)
        return out

    def antiderivative(self, y: np.ndarray) -> np.ndarray:
        """Integral of the gaussian profile from -inf to ``center + y``."""
        if self.kind != "gaussian":
            raise ValueError("antiderivative is only defined for gaussian profiles")
        w = self.width
        return w * math.sqrt(math.pi / 2.0) * (1.0 + erf(y / (w * math.sqrt(2.0))))

    def value(self, y: np.ndarray) -> np.ndarray:
        """Gaussian profile at offset ``y`` from its center."""
        return np.exp(-0.5 * (np.asarray(y) / self.width) ** 2)


@dataclass(frozen=True)
class SourceModel:
    """Current density ``j_y(t, x) = amplitude * g(t) * phi(x)``.

    ``gaussian-pulse``: ``g = exp(-(t - center)^2 / (2 width^2))``.
    ``windowed-sinusoid``: ``g = sin(frequency (t - center)) sin^2(pi (t - center) / width)``
    on ``[center, center + width]``, zero elsewhere.
    ``impulse``: unit-integral deposit over the step containing ``center``.
    """

    kind: str = "gaussian-pulse"
    amplitude: float = 1.0
    center: float = 0.0
    width: float = 1.0
    frequency: float = 0.0
    profile: SpatialProfile = field(default_factory=SpatialProfile)

    def __post_init__(self) -> None:
        if self.kind not in ("gaussian-pulse", "windowed-sinusoid", "impulse"):
            raise ValueError(f"unknown source kind {self.kind!r}")
        if self.kind != "impulse" and not self.width > 0:
            raise ValueError("source width must be positive")
        if self.center < 0:
            raise ValueError("source must not act before t = 0")

    def temporal(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "gaussian-pulse":
            return np.exp(-0.5 * ((t - self.center) / self.width) ** 2)
        if self.kind == "windowed-sinusoid":
            s = t - self.center
            inside = (s >= 0) & (s <= self.width)
            g = np.sin(self.frequency * s) * np.sin(np.pi * s / self.width) ** 2
            return np.where(inside, g, 0.0)
        raise ValueError("impulse sources have no pointwise temporal profile")

    def temporal_derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "gaussian-pulse":
            y = (t - self.center) / self.width
            return -y / self.width * np.exp(-0.5 * y**2)
        if self.kind == "windowed-sinusoid":
            s = t - self.center
            inside = (s >= 0) & (s <= self.width)
            k = np.pi / self.width
            w = self.frequency
            g = w * np.cos(w * s) * np.sin(k * s) ** 2 + np.sin(w * s) * k * np.sin(2 * k * s)
            return np.where(inside, g, 0.0)
        raise ValueError("impulse sources have no pointwise temporal profile")

    def sample_temporal(self, dt: float, nt: int, derivative: bool = False) -> np.ndarray:
        """``g`` (or ``g'``) at ``t_n = n dt``, with impulses as step deposits."""
        if self.kind != "impulse":
            t = dt * np.arange(nt)
            return self.temporal_derivative(t) if derivative else self.temporal(t)
        out = np.zeros(nt)
        n0 = int(round(self.center / dt))
        if derivative:
            # derivative of the rectangular deposit: a two-step doublet
            if n0 < nt:
                out[n0] = 1.0 / dt**2
            if n0 + 1 < nt:
                out[n0 + 1] = -1.0 / dt**2
        elif n0 < nt:
            out[n0] = 1.0 / dt
        return out


def drive_array(
    src: SourceModel, grid: Grid1D, dt: float, nt: int, kind: str, mu: float
) -> np.ndarray:
    """Physical drive on the space-time grid, shape ``(nt, nx)``.

    ``kind="curl_j"`` gives ``mu * dj/dx``; ``kind="dj_dt"`` gives ``-mu * dj/dt``.
    """
    if kind == "curl_j":
        g = src.sample_temporal(dt, nt)
        phi = src.profile.sample(grid, derivative=True)
        scale = mu * src.amplitude
    elif kind == "dj_dt":
        g = src.sample_temporal(dt, nt, derivative=True)
        phi = src.profile.sample(grid)
        scale = -mu * src.amplitude
    else:
        raise ValueError(f"unknown drive kind {kind!r}")
    return scale * np.outer(g, phi)


# -- stepping -------------------------------------------------------------


def leading_dt_bound(p: MMParams) -> float:
    """Largest step keeping ``W_0 = dt**-alpha - lambda1 * dt**-beta`` positive."""
    if p.lambda1 <= 0:
        return math.inf
    return p.lambda1 ** (-1.0 / (p.alpha - p.beta))


def _combined_weights(p: MMParams, dt: float, count: int) -> np.ndarray:
    w = dt ** (-p.alpha) * gl_weights(p.alpha, count).w
    if p.lambda1 != 0:
        w = w - p.lambda1 * dt ** (-p.beta) * gl_weights(p.beta, count).w
    if not w[0] > 0:
        raise ValueError(
            f"dt={dt} leaves a non-positive leading coefficient; "
            f"need dt < {leading_dt_bound(p):.6g}"
        )
    return w


@dataclass
class FieldState:
    """Stored history of one transverse field component.

    ``history[n]`` is the field at ``t = n * dt``; ``history[0]`` is zero.
    ``drive[n]`` is the normalized forcing ``f`` at ``t = n * dt``. A state is
    owned by a single run and advanced in place.
    """

    grid: Grid1D
    dt: float
    drive: np.ndarray
    source: SourceModel | None = None
    history_window: int | None = None
    blowup_threshold: float = BLOWUP_THRESHOLD
    history: np.ndarray = field(init=False)
    n: int = field(init=False, default=1)

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        self.drive = np.asarray(self.drive, dtype=np.float64)
        if self.drive.ndim != 2 or self.drive.shape[1] != self.grid.nx:
            raise ValueError("drive must have shape (nt, nx)")
        if self.history_window is not None and self.history_window < 1:
            raise ValueError("history_window must be positive")
        self.history = np.zeros((self.drive.shape[0], self.grid.nx))
        self._weights: dict[MMParams, np.ndarray] = {}

    @property
    def capacity(self) -> int:
        return self.history.shape[0]

    @property
    def current(self) -> np.ndarray:
        return self.history[self.n - 1]

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n)

    def series(self, index: int) -> SampledSignal:
        return SampledSignal(0.0, self.dt, self.history[: self.n, index])

    def weights(self, p: MMParams) -> np.ndarray:
        """Combined weights ``W_j`` for *p*, stored reversed and contiguous."""
        w_rev = self._weights.get(p)
        if w_rev is None:
            w_rev = np.ascontiguousarray(_combined_weights(p, self.dt, self.capacity)[::-1])
            self._weights[p] = w_rev
        return w_rev


def _history_sum(w_rev: np.ndarray, history: np.ndarray, n: int, window: int | None):
    # sum_{j=1..n} w[j] * history[n - j] with w_rev = w[::-1], optionally only
    # over the newest `window` levels
    lo = 0 if window is None else max(0, n - window)
    top = w_rev.size - 1
    return w_rev[top - (n - lo) : top] @ history[lo:n]


def step_mm(state: FieldState, p: MMParams, dt: float | None = None) -> FieldState:
    """Advance *state* by one level of the general fractional equation.

    *dt*, if given, must match the step the state was built with.
    """
    if dt is not None and dt != state.dt:
        raise ValueError(f"dt={dt} does not match the state step {state.dt}")
    n = state.n
    if n >= state.capacity:
        raise ValueError("state has no room for another level")
    w_rev = state.weights(p)
    prev = state.history[n - 1]
    rhs = state.drive[n - 1] + p.lambda2 * state.grid.laplacian(prev)
    rhs = rhs - _history_sum(w_rev, state.history, n, state.history_window)
    new = rhs / w_rev[-1]
    if state.grid.boundary == "fixed-zero":
        new[0] = new[-1] = 0.0
    peak = float(np.max(np.abs(new)))
    if not math.isfinite(peak) or peak > state.blowup_threshold:
        raise InstabilityError(n, peak)
    state.history[n] = new
    state.n = n + 1
    return state


def run_mm(state: FieldState, p: MMParams, nt: int | None = None) -> FieldState:
    """Step until *state* holds *nt* levels (default: its capacity)."""
    nt = state.capacity if nt is None else nt
    while state.n < nt:
        step_mm(state, p)
    return state


def history_tail_weight(state: FieldState, p: MMParams) -> float:
    """``sum |W_j|`` over history levels dropped by the window (0 without one)."""
    if state.history_window is None:
        return 0.0
    w = state.weights(p)[::-1]
    return float(np.sum(np.abs(w[state.history_window + 1 :])))


def solve_modal(
    p: MMParams,
    k: float,
    src: SourceModel,
    dt: float,
    nt: int,
    *,
    blowup_threshold: float = BLOWUP_THRESHOLD,
) -> SampledSignal:
    """Single spatial Fourier mode: ``D^a u - l1 D^b u + l2 k^2 u = f(t)``.

    ``f`` is ``amplitude * g(t)`` of *src*; its spatial profile is ignored.
    """
    f = src.amplitude * src.sample_temporal(dt, nt)
    w_rev = np.ascontiguousarray(_combined_weights(p, dt, nt)[::-1])
    top = w_rev.size - 1
    local = -p.lambda2 * k * k
    u = np.zeros(nt)
    for n in range(1, nt):
        rhs = f[n - 1] + local * u[n - 1] - w_rev[top - n : top] @ u[:n]
        u[n] = rhs / w_rev[top]
        if not abs(u[n]) <= blowup_threshold:
            raise InstabilityError(n, abs(u[n]))
    return SampledSignal(0.0, dt, u)


def prepare_state(
    equation: str,
    regime: str,
    m: MediumParams,
    grid: Grid1D,
    src: SourceModel,
    dt: float,
    nt: int,
    *,
    history_window: int | None = None,
    blowup_threshold: float = BLOWUP_THRESHOLD,
) -> tuple[FieldState, MMParams]:
    """Zero state and mapped parameters for an ``"electric"`` or ``"magnetic"`` run."""
    drive_kind = {"electric": "dj_dt", "magnetic": "curl_j"}.get(equation)
    if drive_kind is None:
        raise ValueError(f"equation must be 'electric' or 'magnetic', got {equation!r}")
    p = map_regime(regime, m)
    drive = p.lambda2 * drive_array(src, grid, dt, nt, drive_kind, m.mu)
    state = FieldState(
        grid,
        dt,
        drive,
        source=src,
        history_window=history_window,
        blowup_threshold=blowup_threshold,
    )
    return state, p


def solve_electric(
    regime: str,
    m: MediumParams,
    grid: Grid1D,
    src: SourceModel,
    dt: float,
    nt: int,
    *,
    history_window: int | None = None,
    blowup_threshold: float = BLOWUP_THRESHOLD,
) -> FieldState:
    """Evolve ``E_y`` under the high (orders 2, 2 - alpha) or low (2, 2 + beta) equation."""
    state, p = prepare_state(
        "electric",
        regime,
        m,
        grid,
        src,
        dt,
        nt,
        history_window=history_window,
        blowup_threshold=blowup_threshold,
    )
    return run_mm(state, p)


def solve_magnetic(
    regime: str,
    m: MediumParams,
    grid: Grid1D,
    src: SourceModel,
    dt: float,
    nt: int,
    *,
    history_window: int | None = None,
    blowup_threshold: float = BLOWUP_THRESHOLD,
) -> FieldState:
    """Evolve ``B_z`` through the general form with the mapped parameters."""
    state, p = prepare_state(
        "magnetic",
        regime,
        m,
        grid,
        src,
        dt,
        nt,
        history_window=history_window,
        blowup_threshold=blowup_threshold,
    )
    return run_mm(state, p)


# -- references -----------------------------------------------------------


def classical_reference(
    x: np.ndarray,
    t: float,
    wave_speed: float,
    temporal: Callable[[float], float],
    antiderivative: Callable[[np.ndarray], np.ndarray],
    *,
    t_support: tuple[float, float] = (0.0, math.inf),
    period: float | None = None,
    images: int = 2,
) -> np.ndarray:
    r"""Duhamel solution of ``u_tt - c^2 u_xx = s(t) phi(x)`` with zero history.

    .. math::

        u(x, t) = \frac{1}{2c} \int_0^t s(\tau)
            [\Phi(x + c(t - \tau)) - \Phi(x - c(t - \tau))]\,d\tau,

    where ``antiderivative`` is :math:`\Phi` (with the profile center already
    subtracted from its argument by the caller). With *period* the periodic
    images within ``images`` periods are summed.
    """
    x = np.asarray(x, dtype=np.float64)
    lo = max(0.0, t_support[0])
    hi = min(t, t_support[1])
    if hi <= lo:
        return np.zeros_like(x)
    shifts = [0.0] if period is None else [m * period for m in range(-images, images + 1)]

    def integrand(tau: float) -> np.ndarray:
        reach = wave_speed * (t - tau)
        acc = np.zeros_like(x)
        for s in shifts:
            acc += antiderivative(x + s + reach) - antiderivative(x + s - reach)
        return temporal(tau) * acc

    value, _ = quad_vec(integrand, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=400)
    return value / (2.0 * wave_speed)
