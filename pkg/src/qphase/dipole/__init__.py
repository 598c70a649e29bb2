"""Particle-dipole model: exact evolution, BO potentials and phase uncertainty."""
from .engine import (GedankenSummary, PhaseTrajectory, PublicPotentialReport, TwoLevelTrajectory,
                     bo_force, evolve_dipole, force_phase, gedanken_run, ground_vector,
                     heisenberg_sigma3, perturbation_energy_check, private_potential_difference,
                     public_potential_test, relative_phase_trajectory, tail_phase,
                     weak_probe_energy)
from .model import DipoleModel, SecondDipole
from .two_dipole import TwoDipoleReport, balance_function, two_dipole_experiment
from .uncertainty import (StationaryPhaseCheck, UncertaintySeries, inner_integrals,
                          stationary_phase_check, uncertainty_integrals)

__all__ = [
    "DipoleModel", "SecondDipole", "TwoLevelTrajectory", "PhaseTrajectory", "GedankenSummary",
    "PublicPotentialReport", "TwoDipoleReport", "UncertaintySeries", "StationaryPhaseCheck",
    "evolve_dipole", "bo_force", "private_potential_difference", "public_potential_test",
    "weak_probe_energy", "perturbation_energy_check", "relative_phase_trajectory",
    "heisenberg_sigma3", "gedanken_run", "tail_phase", "force_phase", "ground_vector",
    "uncertainty_integrals", "inner_integrals", "stationary_phase_check",
    "two_dipole_experiment", "balance_function",
]
