"""Numerical laboratory for the canonical G2 structure on unit tangent sphere bundles."""

__version__ = "0.1.0"
