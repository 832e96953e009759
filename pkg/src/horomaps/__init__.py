"""Horocycle-map harmonic analysis on SL(2, R) model spaces."""
from .errors import *  # noqa: F401,F403
from .sl2core import classify, commutator, horocycle_matrix  # noqa: F401
from .models import ModelSpace, SpectralFunction, TranslateSum, GridFunction, model_for  # noqa: F401

__version__ = "0.1.0"
