"""
Exact arithmetic: rationals and ideals, the Clifford algebra, Spin and tori.
"""

from .arith import OIdeal, hilbert_symbol, legendre, sqrt_mod, val
from .clifford import Multivector, QuadForm, gp, reverse, twisted_action
from .spin import (
    SOMatrix,
    SpinElement,
    coroot,
    is_spin,
    plane_rotation,
    reflection_decompose,
    spinor_norm,
    witt_map,
)
from .tori import TorusElem, Trivialization, rho_apply, trivialize, weak_approx_torus

__all__ = [
    "OIdeal",
    "hilbert_symbol",
    "legendre",
    "sqrt_mod",
    "val",
    "Multivector",
    "QuadForm",
    "gp",
    "reverse",
    "twisted_action",
    "SOMatrix",
    "SpinElement",
    "coroot",
    "is_spin",
    "plane_rotation",
    "reflection_decompose",
    "spinor_norm",
    "witt_map",
    "TorusElem",
    "Trivialization",
    "rho_apply",
    "trivialize",
    "weak_approx_torus",
]
