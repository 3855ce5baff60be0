"""Symbolic register automata over pluggable Boolean algebras."""

__version__ = "0.1.0"
