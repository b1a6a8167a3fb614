"""Exact and numeric calculus for weak pseudo-bosonic ladder operators."""

__version__ = "0.1.0"
