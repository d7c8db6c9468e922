"""Scenario runner and analysis front end."""

from .analysis import TailFit, convergence_study, fit_tail, spectrum
from .config import ConfigError, load, validate
from .runner import run_scenario, sweep

__all__ = [
    "ConfigError",
    "TailFit",
    "convergence_study",
    "fit_tail",
    "load",
    "run_scenario",
    "spectrum",
    "sweep",
    "validate",
]
