"""Presentations of tame potentially Barsotti-Tate deformation rings for GL2."""

__version__ = "0.1.0"
