"""Exact computations in polar Brauer and polar Temperley-Lieb categories."""

__version__ = "0.1.0"
