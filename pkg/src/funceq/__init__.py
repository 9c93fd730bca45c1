"""Exact solver for inhomogeneous linear functional equations over finitely generated fields."""
