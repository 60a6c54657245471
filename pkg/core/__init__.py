# core/__init__.py
"""Numerical core of mesocov: ensembles, spectra, predictions and the Monte Carlo engine."""
