"""Exact Hochschild and cyclic homology of algebra extensions over the rationals."""

__version__ = "0.1.0"
