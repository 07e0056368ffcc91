"""Exact computations for interval exchange transformations under linear restrictions."""

__version__ = "0.1.0"
