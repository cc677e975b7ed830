"""Realizability of (sign pattern, order of moduli) couples for real-rooted
univariate polynomials with non-vanishing coefficients.

The package enumerates the combinatorial objects, searches for exact
rational witnesses of realizability, generates machine-checkable
non-realizability certificates, and ships the full degree-6 reference
classification together with counting reports.
"""

__version__ = "0.1.0"
