"""Workbench for intuitionistic linear temporal logic."""

__version__ = "0.1.0"
