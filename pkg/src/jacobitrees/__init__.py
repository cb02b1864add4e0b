"""Exact integer computations for decorated-tree Lie groups and Jacobi-tree
quotients: planar binary trees, their AS/IHX/quadratic relation lattices,
free-Lie expansions, Magnus expansions, and Smith/Hermite normal forms."""

__version__ = "0.1.0"
