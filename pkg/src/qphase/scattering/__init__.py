"""Conditional delta-barrier scattering engine."""
from .analysis import (alpha_ladder, barrier_variant_phase, displacement_expectation,  # noqa: F401
                       momentum_transfer_and_path_integral, phase_gradient_check,
                       phase_uncertainty_series, private_potential_numeric,
                       public_potential_probe)
from .engine import (ConditionalWavefunction, ScatteringReport,  # noqa: F401
                     build_branch_potentials, incident_packet, run_scattering)
from .model import ScatteringModel  # noqa: F401
