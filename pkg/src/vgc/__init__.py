"""Exact verification engine for finite S4 and A5 actions on rational surfaces."""

__version__ = "0.1.0"
