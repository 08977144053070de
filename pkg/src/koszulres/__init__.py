"""Exact multigraded resultants via Cayley determinants of Koszul complex slices."""

__version__ = "0.1.0"
