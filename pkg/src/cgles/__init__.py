"""Entropy-conservative / entropy-stable finite differences for
anisotropic-pressure plasma flow in one and two space dimensions."""

from . import state
from .state import (
    RHO, MX, MY, MZ, PPAR, ENE, BX, BY, BZ,
    UX, UY, UZ, PPERP, NVAR, X, Y,
    cons_to_prim, prim_to_cons, entropy_vars, entropy_density,
    prim_from_entropy_vars, wave_speeds, admissibility,
)

__version__ = "0.1.0"
