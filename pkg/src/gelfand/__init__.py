"""Exact verifier for commutative homogeneous spaces of semidirect-product type."""

__version__ = "0.1.0"
