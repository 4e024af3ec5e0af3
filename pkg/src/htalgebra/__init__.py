"""Exact calculus of the shift Hopf algebra, its sequence dual and localization,
distributions, conformal and vertex algebras, and the Toda lattice."""

from .errors import (BoundExceededError, ConfigError, DivergenceError, HtAlgebraError, MalformedInputError,
                     NonIntegralPoleError, NotRationalError, ParseError, UndefinedProductError,
                     UnsupportedError)
from .hopf import HatHtElement, HtElement, TensorHt
from .localization import HatKElement, KElement, RationalForm, k_normalize
from .sequences import CzpolElement

__all__ = [
    "BoundExceededError", "ConfigError", "CzpolElement", "DivergenceError", "HatHtElement", "HatKElement",
    "HtAlgebraError", "HtElement", "KElement", "MalformedInputError", "NonIntegralPoleError",
    "NotRationalError", "ParseError", "RationalForm", "TensorHt", "UndefinedProductError",
    "UnsupportedError", "k_normalize",
]
