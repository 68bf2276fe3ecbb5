"""Exact construction and certification of bent Gromov--Piatetski-Shapiro groups."""

__version__ = "0.1.0"
