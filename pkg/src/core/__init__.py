"""
Core functionality for linfdiff: linear algebra, simplicial objects, coalgebras and differentiation
"""
