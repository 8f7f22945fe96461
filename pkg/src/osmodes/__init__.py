"""Viscous instability modes of boundary-layer shear flows."""

from .dispersion import (DispersionResult, blasius_dispersion_check, dispersion_value,
                         find_critical_A, growth_scaling, initial_guess, solve_eigenvalue,
                         trace_branch)
from .estimator import OrrSommerfeldEigenSolver
from .langer import CriticalLayerFrame, MasterGrid
from .modes import Mode, ModeBuilder
from .profile import ShearProfile

__all__ = ["CriticalLayerFrame", "DispersionResult", "MasterGrid", "Mode", "ModeBuilder",
           "OrrSommerfeldEigenSolver", "ShearProfile", "blasius_dispersion_check",
           "dispersion_value", "find_critical_A", "growth_scaling", "initial_guess",
           "solve_eigenvalue", "trace_branch"]
