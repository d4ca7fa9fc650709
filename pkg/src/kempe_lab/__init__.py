"""Kempe chains, unchanged bichromatic cycles and base-modules of planar triangulations."""

__version__ = "0.1.0"
