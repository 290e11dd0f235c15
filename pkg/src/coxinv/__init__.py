"""Mod-2 cohomological invariants of classical Weyl groups, computed symbolically."""

__version__ = "0.1.0"
