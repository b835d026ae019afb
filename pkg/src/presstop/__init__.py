"""Topology optimisation of structures loaded by design-dependent fluid pressure.

Pressure is modelled by Darcy flow with a drainage term on a regular Q4 mesh;
the resulting consistent nodal forces drive a SIMP compliance problem that is
solved with the method of moving asymptotes.
"""
from .driver import OptResult, RunConfig, initialize, optimize, run
from .errors import OptimizerError, SolverError
from .problems import PROBLEM_NAMES, ProblemSpec, make_custom_problem, make_problem

__all__ = [
    "OptResult", "OptimizerError", "PROBLEM_NAMES", "ProblemSpec", "RunConfig", "SolverError",
    "initialize", "make_custom_problem", "make_problem", "optimize", "run",
]
__version__ = "0.1.0"
