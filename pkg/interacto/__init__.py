"""Interacto: user interactions turned into undoable UI commands."""

__version__ = "0.1.0"
