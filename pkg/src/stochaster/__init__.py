"""Stochastic solutions of the (dynamical) Yang-Baxter and tetrahedron
equations: weight evaluation, identity verification, lattice sampling."""

__version__ = "0.1.0"
