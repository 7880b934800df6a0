"""Desk-scale experiments on partition regularity of homogeneous quadratics."""

__version__ = "0.1.0"
