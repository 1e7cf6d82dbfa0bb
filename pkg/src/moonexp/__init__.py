"""Exact q-series and supersingular-locus computations around the prime
exponents of the monster's order."""

__version__ = "0.1.0"
