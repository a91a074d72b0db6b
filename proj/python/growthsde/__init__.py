"""Growth-curve SDEs: simulation, estimation, EM under sparse sampling and AIC selection."""

from ._core import __version__, em, estimate, one_record, pc, run_study, select, simulate

__all__ = [
    "__version__",
    "em",
    "estimate",
    "one_record",
    "pc",
    "run_study",
    "select",
    "simulate",
]
