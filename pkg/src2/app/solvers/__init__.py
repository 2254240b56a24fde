"""Solvers package - FTRL over the probability simplex."""
from .potentials import CoordinatePotential, PotentialKind, invert_potential
from .simplex_solver import FtrlProblem, SimplexSolver, solve_ftrl, stationarity_residual

__all__ = [
    "CoordinatePotential",
    "FtrlProblem",
    "PotentialKind",
    "SimplexSolver",
    "invert_potential",
    "solve_ftrl",
    "stationarity_residual",
]
