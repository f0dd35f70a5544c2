"""Symmetric equilibria of heterogeneous coordination and anti-coordination games."""
from .equilibria import (
    Certificate,
    ConditionFailed,
    EquilibriumRecord,
    check_equilibrium_conditions,
    enumerate_all,
    nondiscriminating_equilibria,
    three_partition_equilibrium,
    two_partition_equilibrium,
)
from .model import (
    GameSpec,
    SpecError,
    discrimination_level,
    make_spec,
    ordered_partitions,
    validate_spec,
)
from .payoff import (
    encounter_probability,
    expected_payoff_direct,
    expected_payoff_factored,
    incentive,
    incentive_vector,
    stage_payoff,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ConditionFailed",
    "EquilibriumRecord",
    "GameSpec",
    "SpecError",
    "check_equilibrium_conditions",
    "discrimination_level",
    "encounter_probability",
    "enumerate_all",
    "expected_payoff_direct",
    "expected_payoff_factored",
    "incentive",
    "incentive_vector",
    "make_spec",
    "nondiscriminating_equilibria",
    "ordered_partitions",
    "stage_payoff",
    "three_partition_equilibrium",
    "two_partition_equilibrium",
    "validate_spec",
]
