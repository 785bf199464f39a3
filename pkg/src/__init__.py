"""
linfdiff
Exact differentiation of simplicial Lie algebras and formal ∞-groups into L∞ algebras
"""

__version__ = "1.0.0"
