# models/__init__.py
"""Ensemble presets and the pydantic schemas behind run configuration."""
