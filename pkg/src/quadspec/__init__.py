"""Finite-dimensional unitary representations of quadratic symmetry algebras
for monopole-type superintegrable systems."""

__version__ = "0.1.0"
