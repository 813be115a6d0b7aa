"""Exact invariants of real spherical pairs: spherical roots, boundary
degenerations, fans, open-orbit combinatorics, elliptic criteria and
finite-dimensional spectral checks."""

__version__ = "0.1.0"
