"""Certified combinatorics for a square complex built from a sizeable graph,
its cyclic Morse cover, relator words and finite-quotient searches."""

__version__ = "0.1.0"
