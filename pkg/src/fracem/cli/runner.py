"""Scenario execution and output files.

A run directory holds ``timeseries.csv`` (header ``t,probe_<i>...``),
``snapshot.csv`` (``x,u`` at the last completed level, grid runs only) and
``metadata.json``. Floats are written with 17 significant digits and the
metadata has sorted keys and no timestamps, so identical configs give
byte-identical files.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import __version__
from ..fraccalc import SampledSignal
from ..wavesolver import (
    InstabilityError,
    history_tail_weight,
    leading_dt_bound,
    prepare_state,
    run_mm,
    solve_modal,
)
from .config import Scenario, build, set_field, validate

#: Environment variable naming the root directory for run outputs.
OUTPUT_ROOT_ENV = "FRACEM_OUTPUT_ROOT"

TIMESERIES = "timeseries.csv"
SNAPSHOT = "snapshot.csv"
METADATA = "metadata.json"


def output_root(override: str | Path | None = None) -> Path:
    if override is not None:
        return Path(override)
    return Path(os.environ.get(OUTPUT_ROOT_ENV, "."))


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    rows = np.column_stack(columns)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_series(path: str | Path, col: str) -> SampledSignal:
    """Column *col* of a time-series CSV as a uniformly sampled signal.

    *col* is a header name or a probe index (``"40"`` selects ``probe_40``).
    """
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    name = col if col in header else f"probe_{col}"
    if name not in header or header[0] != "t":
        raise ValueError(f"column {col!r} not in {header}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    t = data[:, 0]
    if t.size < 2:
        raise ValueError("need at least two samples")
    steps = np.diff(t)
    dt = (t[-1] - t[0]) / (t.size - 1)
    if np.max(np.abs(steps - dt)) > 1e-9 * max(abs(dt), 1e-300) * t.size:
        raise ValueError("time column is not uniformly spaced")
    return SampledSignal(float(t[0]), float(dt), data[:, header.index(name)])


def derived_constants(s: Scenario) -> dict:
    """Every constant the solver derives from the config."""
    p = s.mm
    out = {
        "mm_alpha": p.alpha,
        "mm_beta": p.beta,
        "lambda1": p.lambda1,
        "lambda2": p.lambda2,
        "dt_leading_bound": leading_dt_bound(p),
        "max_courant": s.config["stability"]["max_courant"],
        "blowup_threshold": s.config["stability"]["blowup_threshold"],
        "courant": s.courant,
        "t_final": s.dt * (s.nt - 1),
    }
    if s.medium is not None:
        m = s.medium
        out["v"] = math.sqrt(m.v2)
        if m.has_low:
            out["v_beta"] = math.sqrt(m.v_beta2)
            out["a_beta"] = m.a_beta
    if s.equation == "modal":
        out["modal_rate"] = p.lambda2 * s.k**2
    return {k: (None if isinstance(v, float) and math.isinf(v) else v) for k, v in out.items()}


@dataclass(frozen=True)
class RunResult:
    directory: Path
    metadata: dict

    @property
    def unstable(self) -> bool:
        return self.metadata["status"] == "unstable"


def _simulate(s: Scenario) -> tuple[np.ndarray, np.ndarray, np.ndarray | None, dict]:
    """Returns times, probe columns, final snapshot (or None) and run info."""
    info: dict = {"status": "ok", "failed_step": None}
    if s.equation == "modal":
        try:
            sig = solve_modal(
                s.mm, s.k, s.source, s.dt, s.nt,
                blowup_threshold=s.config["stability"]["blowup_threshold"],
            )
            u = sig.values
        except InstabilityError as exc:
            info.update(status="unstable", failed_step=exc.step, magnitude=exc.magnitude)
            u = np.zeros(0)
        info["levels"] = int(u.size)
        return s.dt * np.arange(u.size), u[:, None], None, info

    state, p = prepare_state(
        s.equation, s.regime, s.medium, s.grid, s.source, s.dt, s.nt,
        history_window=s.config["history_window"],
        blowup_threshold=s.config["stability"]["blowup_threshold"],
    )
    try:
        run_mm(state, p)
    except InstabilityError as exc:
        info.update(status="unstable", failed_step=exc.step, magnitude=exc.magnitude)
    info["levels"] = state.n
    hist = state.history[: state.n]
    if s.config["history_window"] is not None:
        tail = history_tail_weight(state, p)
        info["history_tail_weight"] = tail
        info["history_truncation_bound"] = tail * float(np.max(np.abs(hist)))
    return state.times, hist[:, s.probes], hist[-1], info


def run_scenario(cfg: dict, directory: str | Path) -> RunResult:
    """Validate, solve and write outputs into *directory*."""
    cfg = validate(cfg)
    s = build(cfg)
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)

    t, probes, snap, info = _simulate(s)
    if s.equation == "modal":
        header = ["t", "probe_0"]
    else:
        header = ["t"] + [f"probe_{i}" for i in s.probes]
    write_csv(out / TIMESERIES, header, [t] + [probes[:, j] for j in range(probes.shape[1])])
    outputs = {"timeseries": TIMESERIES}
    if snap is not None:
        write_csv(out / SNAPSHOT, ["x", "u"], [s.grid.x, snap])
        outputs["snapshot"] = SNAPSHOT

    metadata = {
        "version": __version__,
        "config": cfg,
        "derived": derived_constants(s),
        "outputs": outputs,
        **info,
    }
    text = json.dumps(metadata, indent=2, sort_keys=True, allow_nan=False)
    (out / METADATA).write_text(text + "\n", encoding="utf-8")
    return RunResult(out, metadata)


def _parse_values(text: str) -> list:
    values = []
    for item in text.split(","):
        item = item.strip()
        try:
            values.append(json.loads(item))
        except json.JSONDecodeError:
            values.append(item)
    return values


def parse_vary(spec: str) -> tuple[str, list]:
    """``"medium.alpha=0.2,0.5"`` to ``("medium.alpha", [0.2, 0.5])``."""
    field, sep, values = spec.partition("=")
    if not sep or not field or not values:
        raise ValueError(f"--vary expects field=v1,v2,..., got {spec!r}")
    return field.strip(), _parse_values(values)


def sweep_configs(cfg: dict, varies: list[tuple[str, list]]) -> list[tuple[str, dict]]:
    """Cartesian product of the varied fields, each with its own directory name."""
    fields = [f for f, _ in varies]
    out = []
    for combo in itertools.product(*(vals for _, vals in varies)):
        c = cfg
        for f, v in zip(fields, combo):
            c = set_field(c, f, v)
        name = "__".join(f"{f}={v}" for f, v in zip(fields, combo))
        out.append((name.replace("/", "_"), c))
    return out


def _run_one(args: tuple[dict, str]) -> RunResult:
    cfg, directory = args
    return run_scenario(cfg, directory)


def sweep(
    cfg: dict, varies: list[tuple[str, list]], root: str | Path, jobs: int = 1
) -> list[RunResult]:
    """Run every combination into ``root/<field>=<value>...``; all configs are
    validated before any run starts."""
    runs = sweep_configs(cfg, varies)
    for _, c in runs:
        validate(c)
    tasks = [(c, str(Path(root) / name)) for name, c in runs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, tasks))
    return [_run_one(t) for t in tasks]
