"""Isotypic projectors on tensor powers, divergence families, and rate oracles."""

__version__ = "0.1.0"
