"""Polynomial-delay enumeration kernels for vertex cover and independent set."""

__version__ = "0.1.0"
