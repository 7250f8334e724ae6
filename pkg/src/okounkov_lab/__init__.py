"""Exact toric models of graded linear series, Okounkov bodies and multiplier ideals."""

__version__ = "0.1.0"
