"""Endomorphism rings of ordinary Jacobians of genus-2 curves over prime fields."""

__version__ = "0.1.0"
