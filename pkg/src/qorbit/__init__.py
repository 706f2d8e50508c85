"""Exact R-matrix workbench for the quantum groups of series B, C and D."""

__version__ = "0.1.0"
