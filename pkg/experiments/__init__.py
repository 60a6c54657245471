#experiments/__init__.py
"""Monte Carlo observables; importing the package registers every kind."""
from .base_observable import BaseObservable, ObservableRegistry, registry
from . import green_observables, linstat_observables, eigenvalue_observables
