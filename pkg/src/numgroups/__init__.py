"""Deciding and certifying the numerical-group property of matrix groups over number fields."""

__version__ = "0.1.0"
