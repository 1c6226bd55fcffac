"""Queries over a Web of Linked Data under full-Web and reachability-based semantics"""

__version__ = "0.1.0"
