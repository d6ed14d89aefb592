"""Exact combinatorics of abstract GKM graphs and GKM skeletons."""

__version__ = "0.1.0"
