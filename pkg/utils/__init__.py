# utils/__init__.py
"""Shared helpers: logging, JSON storage and counter-based random streams."""
