"""Curves, meridians and pants graphs on the genus-2 handlebody."""

__version__ = "0.1.0"
