"""Exact and Monte-Carlo tooling for heavy-tailed critical random multigraphs."""

__version__ = "0.1.0"
