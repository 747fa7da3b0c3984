"""Acyclic matchings in Abelian groups and linear matchings in field extensions."""

__version__ = "0.1.0"
