"""Inscribable zonotopes and hyperplane arrangements over exact ordered fields."""

__version__ = "0.1.0"
