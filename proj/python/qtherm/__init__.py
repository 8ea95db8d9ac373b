"""Canonical-state thermodynamics of small quantum systems."""

from ._qtherm import (
    ValidationError,
    beta_for_energy,
    box_entropy_at_energy,
    box_levels,
    box_tail_weight,
    canonical_state,
    criteria_report,
    entropy_at_energy,
    entropy_gap,
    eigh,
    occupation_residual,
    fd_well,
    flow_direction,
    ideal_gas_entropy,
    momentum_operator,
    run_cli,
    spin_fundamental,
    spin_system,
    trajectory_entropies,
    unitary_evolution,
    von_neumann_entropy,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
