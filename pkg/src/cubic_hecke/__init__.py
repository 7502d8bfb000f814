"""Numerical companion for central values of cubic Hecke L-functions over Q(w)."""

__version__ = "0.1.0"
