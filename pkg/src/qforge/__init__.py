"""Racks, quandles, group quasimorphisms and bounded quandle cohomology."""

__version__ = "0.1.0"
