"""Combinatorics engine for variable words, instantiation trees,
largeness notions and certificate-producing bounded searches."""

__version__ = "0.1.0"
