"""Rank-2 Chevalley group calculus, finite-field flag varieties and the
simple-reflection action on B-sheets."""

__version__ = "0.1.0"
