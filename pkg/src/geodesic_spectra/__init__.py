"""Approximation constants, resonant collections and dimension experiments in hyperbolic space."""

__version__ = "0.1.0"
