"""Ideal zeta functions of class-2 nilpotent Lie rings via generalized Igusa functions."""

__version__ = "0.1.0"
