"""Desk-scale checks for the complex free fermion, its U(1) current, and
inner-function scattering operators."""

__version__ = "0.1.0"
