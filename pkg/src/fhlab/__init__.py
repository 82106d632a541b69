"""Toeplitz and Toeplitz+Hankel determinants with Fisher-Hartwig symbols."""

__version__ = "0.1.0"
