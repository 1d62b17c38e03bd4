"""Deformations of Dirac structures at desk scale: L-infinity algebras,
Courant algebroids over a point, polynomial Lie algebroids and the
cohomological stability test for fixed points."""

__version__ = "0.1.0"
