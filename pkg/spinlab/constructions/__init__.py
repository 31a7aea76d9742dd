"""
Constructions built on the exact algebra: strong approximation certificates,
generalized Steinberg symbols and congruence subgroup widths.
"""

from .approx import SpinPair, approx_pair, approx_spin_pair, approx_unit, foya_search
from .congruence import FiniteGroupSpec, gcl_width_bfs, isometry_mod, parse_element
from .steinberg import ThetaElement, gen_symbol, steinberg_symbol, symbol_property_suite

__all__ = [
    "SpinPair",
    "approx_pair",
    "approx_spin_pair",
    "approx_unit",
    "foya_search",
    "FiniteGroupSpec",
    "gcl_width_bfs",
    "isometry_mod",
    "parse_element",
    "ThetaElement",
    "gen_symbol",
    "steinberg_symbol",
    "symbol_property_suite",
]
