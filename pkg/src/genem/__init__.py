"""Expressive robot behavior generation from language instructions."""

__version__ = "0.1.0"
