"""Exact algebra, flat connections and leaf/family intersection loci."""

__version__ = "0.1.0"
