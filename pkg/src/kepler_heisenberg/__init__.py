"""Closed orbits of the Kepler-Heisenberg problem: integration, shooting, Monte Carlo
refinement, parameter scans and symmetry-type detection."""

from .dynamics import (ConservedSet, PhaseState, SingularityError, conserved, dilate, grad_hamiltonian,
                       hamiltonian, kinetic, potential, vector_field)
from .integrator import IntegratorConfig, Trajectory, integrate
from .optimizer import OptimizerConfig, OrbitResult, optimize, perturb
from .reduced import PX_BOUND, ReducedIC, embed, random_ic
from .shooting import ObjectiveValue, ShootingConfig, assess, objective
from .symmetry import SymmetryType, detect_type, farey_sequence, verify_symmetry

__version__ = "0.1.0"
