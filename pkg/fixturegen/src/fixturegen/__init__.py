"""Benchmark integral fixture generator with an internal Gaussian backend."""

__version__ = "0.1.0"
