"""Exact cluster-algebra engine: Laurent arithmetic, seed mutation, exchange
graphs, and brute-force checks of compatibility and unistructurality."""

from .atlas import EnumerationLimits, ExchangeAtlas, enumerate_atlas, expand_in_base
from .laurent import LaurentFraction, LaurentPoly, den_vector, div_exact
from .quiver import BMatrix, classify, mutate_matrix, preset
from .seed import Seed, initial_seed, mutate_seed

__version__ = "0.1.0"

__all__ = [
    "BMatrix",
    "EnumerationLimits",
    "ExchangeAtlas",
    "LaurentFraction",
    "LaurentPoly",
    "Seed",
    "classify",
    "den_vector",
    "div_exact",
    "enumerate_atlas",
    "expand_in_base",
    "initial_seed",
    "mutate_matrix",
    "mutate_seed",
    "preset",
]
