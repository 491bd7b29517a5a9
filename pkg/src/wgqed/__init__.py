"""Collective spontaneous emission of two-level emitters coupled to a one-dimensional waveguide."""

from .core import SystemConfig, density_from_tag, state_from_tag, validate_density
from .generator import build_generator, generator_in_bell, pairwise_rates

__all__ = [
    "SystemConfig",
    "build_generator",
    "density_from_tag",
    "generator_in_bell",
    "pairwise_rates",
    "state_from_tag",
    "validate_density",
]

__version__ = "0.1.0"
