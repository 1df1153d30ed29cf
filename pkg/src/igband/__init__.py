"""Maximal subgroups of free idempotent generated semigroups over finite bands."""

__version__ = "0.1.0"
