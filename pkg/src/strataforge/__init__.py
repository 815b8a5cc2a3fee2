"""Exact orbit enumeration on flag varieties of Mumford-Tate domains."""

__version__ = "0.1.0"
