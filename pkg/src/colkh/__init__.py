"""Exact colored Khovanov cohomology of framed, colored link diagrams."""

__version__ = "0.1.0"
