"""High-precision evaluation and verification of polynomial continued fractions."""

__version__ = "0.1.0"
