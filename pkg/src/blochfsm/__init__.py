"""Coherence-vector simulation of driven atoms with a finite-state-machine layer."""
from .config import LogicThresholds, SimulationConfig, SweepSpec, parse_config, serialize_config
from .dynamics import (
    Trajectory,
    adjoint_matrix,
    coherence_to_density,
    density_to_coherence,
    hamiltonian_coeffs,
    integrate,
    rk4_step,
    to_reduced_time,
)
from .generators import GeneratorBasis, StructureConstants, make_basis, projector, structure_constants
from .logic import ParityMachine, classify_machine, lsm_step, readout, run_parity, short_time_step
from .pulses import Constant, Detuning, DynamicallyDecoupled, Gaussian, Zero, pulse_area
from .sylvester import closed_form_two_level, superevolution, sylvester_expm

__version__ = "0.1.0"


__all__ = [
    "LogicThresholds",
    "SimulationConfig",
    "SweepSpec",
    "parse_config",
    "serialize_config",
    "Trajectory",
    "adjoint_matrix",
    "coherence_to_density",
    "density_to_coherence",
    "hamiltonian_coeffs",
    "integrate",
    "rk4_step",
    "to_reduced_time",
    "GeneratorBasis",
    "StructureConstants",
    "make_basis",
    "projector",
    "structure_constants",
    "ParityMachine",
    "classify_machine",
    "lsm_step",
    "readout",
    "run_parity",
    "short_time_step",
    "Constant",
    "Detuning",
    "DynamicallyDecoupled",
    "Gaussian",
    "Zero",
    "pulse_area",
    "closed_form_two_level",
    "superevolution",
    "sylvester_expm",
]
