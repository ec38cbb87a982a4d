"""Exact computations in degree-2 colored Jacobi diagram spaces."""

__version__ = "0.1.0"
