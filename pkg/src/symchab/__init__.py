"""Tropical and Newton-polytope bounds for rational points on symmetric powers of curves."""

__version__ = "0.1.0"
