"""Exact-arithmetic construction and audit of digit expansions that are
simply normal to exactly a prescribed set of bases."""

__version__ = "0.1.0"
