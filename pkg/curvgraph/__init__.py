"""Discrete curvature, harmonic functions and ends of weighted graphs."""

__version__ = "0.1.0"
