"""Workbench for the 3-primary Adams-Novikov E2 page."""

__version__ = "0.1.0"
