"""Spectral observability and control lab."""

from ._obslab import (
    PhysicalParams,
    SpectralDomain,
    SpectralState,
    evolve,
    execute,
    pointwise_failure_demo_multi,
    remez_sweep,
    sine_bound_sweep,
    synthesize_null_control,
    weyl_ratio,
)

__all__ = [
    "PhysicalParams",
    "SpectralDomain",
    "SpectralState",
    "evolve",
    "execute",
    "pointwise_failure_demo_multi",
    "remez_sweep",
    "sine_bound_sweep",
    "synthesize_null_control",
    "weyl_ratio",
]
