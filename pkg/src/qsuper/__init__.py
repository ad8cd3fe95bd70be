"""Exact and numeric tools for Drinfeld-Jimbo quantum superalgebras."""

__version__ = "0.1.0"
