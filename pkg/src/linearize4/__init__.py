"""Linearization of fourth-order ODEs by point transformations."""

__version__ = "0.1.0"
