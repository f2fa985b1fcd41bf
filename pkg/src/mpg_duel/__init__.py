"""Solvers for alternating and non-alternating mean payoff games on finite graphs."""

from mpg_duel.errors import DomainError, InstanceError, MPGError, ResourceLimitError
from mpg_duel.graph_core import (
    DirectedGraph,
    Edge,
    GameInstance,
    ProductComponent,
    StartSpec,
    Walk,
    padding_constant,
    parse_instance,
    period,
    product_component,
    strongly_connected_components,
)
from mpg_duel.finite_solver import (
    FiniteValueResult,
    SolverConfig,
    bob_best_response,
    brute_values,
    value_alt_finite,
    value_nonalt_finite,
)
from mpg_duel.asymptotic_solver import (
    BlockSchedule,
    BoundsConfig,
    TraceRecord,
    ValueBounds,
    alice_equilibrium_stream,
    block_schedule,
    bob_equilibrium_response,
    max_mean_cycle,
    simulate,
    subadditive_constant,
    value_alt_infinite,
    value_nonalt_bounds,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSchedule",
    "BoundsConfig",
    "DirectedGraph",
    "DomainError",
    "Edge",
    "FiniteValueResult",
    "GameInstance",
    "InstanceError",
    "MPGError",
    "ProductComponent",
    "ResourceLimitError",
    "SolverConfig",
    "StartSpec",
    "TraceRecord",
    "ValueBounds",
    "Walk",
    "alice_equilibrium_stream",
    "block_schedule",
    "bob_best_response",
    "bob_equilibrium_response",
    "brute_values",
    "max_mean_cycle",
    "padding_constant",
    "parse_instance",
    "period",
    "product_component",
    "simulate",
    "strongly_connected_components",
    "subadditive_constant",
    "value_alt_finite",
    "value_alt_infinite",
    "value_nonalt_bounds",
    "value_nonalt_finite",
]
