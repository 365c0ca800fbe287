"""Physical and entropy-conservative two-point fluxes.

The conservative part of the system carries fluxes very close to the ideal
MHD ones, with the perpendicular pressure playing the role of the gas
pressure and the parallel pressure transported as a passive-looking slot
(its real coupling lives in the non-conservative terms).

Only x-direction kernels are written out; the y-direction is the exact
slot permutation x<->y (momentum 1<->2, field 6<->7), which the tests
verify against independently written y formulas.
"""

import numpy as np

from . import state as st
from .errors import NonPositiveInput
from .state import BX, BY, BZ, ENE, MX, MY, MZ, PPAR, PPERP, RHO, UX, UY, UZ

#: slot permutation that maps an x-direction kernel to the y-direction
PERM_XY = np.array([RHO, MY, MX, MZ, PPAR, ENE, BY, BX, BZ])

#: relative half-width of the series window for the logarithmic mean
LOGMEAN_SWITCH = 1e-4


def perm_xy(field):
    """Swap the x/y roles of a 9-slot field array (involution)."""
    return field[PERM_XY]


def log_mean(a_l, a_r):
    """Logarithmic mean (a_r - a_l)/(ln a_r - ln a_l) of positive values.

    Near a_l = a_r the direct quotient degenerates to 0/0; inside a
    relative window of 1e-4 it switches to the standard four-term series
    in zeta = a_l/a_r, which is exact to machine precision there.
    """
    a_l = np.asarray(a_l, dtype=float)
    a_r = np.asarray(a_r, dtype=float)
    if not (np.all(a_l > 0.0) and np.all(a_r > 0.0)):
        raise NonPositiveInput("log_mean needs strictly positive arguments")
    zeta = a_l / a_r
    f = (zeta - 1.0) / (zeta + 1.0)
    u = f * f
    series = 1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u * (1.0 / 7.0)))
    near = np.abs(zeta - 1.0) < LOGMEAN_SWITCH
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log(zeta) / (2.0 * f)
    fac = np.where(near, series, direct)
    return (a_l + a_r) / (2.0 * fac)


def physical_flux(w, axis):
    """Exact flux of the conservative part in direction ``axis``."""
    if axis == st.Y:
        return perm_xy(physical_flux(perm_xy(w), st.X))
    rho, ux, uy, uz = w[RHO], w[UX], w[UY], w[UZ]
    bx, by, bz = w[BX], w[BY], w[BZ]
    b2 = bx * bx + by * by + bz * bz
    udotb = ux * bx + uy * by + uz * bz
    ene = st.prim_to_cons(w, check=False)[ENE]
    f = np.empty_like(w)
    f[RHO] = rho * ux
    f[MX] = rho * ux * ux + w[PPERP] - (bx * bx - 0.5 * b2)
    f[MY] = rho * ux * uy - bx * by
    f[MZ] = rho * ux * uz - bx * bz
    f[PPAR] = w[PPAR] * ux
    f[ENE] = ux * (ene + w[PPERP] + 0.5 * b2) - bx * udotb
    f[BX] = np.zeros_like(rho)
    f[BY] = ux * by - uy * bx
    f[BZ] = ux * bz - uz * bx
    return f


def _pair_means(w_l, w_r):
    """Shared two-point ingredients of the entropy-conservative flux."""
    bpp_l = w_l[RHO] / w_l[PPERP]
    bpp_r = w_r[RHO] / w_r[PPERP]
    bpl_l = w_l[RHO] / w_l[PPAR]
    bpl_r = w_r[RHO] / w_r[PPAR]
    return bpp_l, bpp_r, bpl_l, bpl_r


def ec_flux(w_l, w_r, axis):
    """Entropy-conservative two-point flux between admissible states.

    Every ingredient is either an arithmetic mean, a mean of a pointwise
    product (the overbar composites), or a logarithmic mean of a positive
    quantity; the combination satisfies the jump condition
    [V].F = [potential flux] - [phi] * mean(B_n) to round-off.
    """
    if axis == st.Y:
        return perm_xy(ec_flux(perm_xy(w_l), perm_xy(w_r), st.X))
    bpp_l, bpp_r, bpl_l, bpl_r = _pair_means(w_l, w_r)

    rho_ln = log_mean(w_l[RHO], w_r[RHO])
    bpl_ln = log_mean(bpl_l, bpl_r)
    bpp_ln = log_mean(bpp_l, bpp_r)

    rho_a = 0.5 * (w_l[RHO] + w_r[RHO])
    ux_a = 0.5 * (w_l[UX] + w_r[UX])
    uy_a = 0.5 * (w_l[UY] + w_r[UY])
    uz_a = 0.5 * (w_l[UZ] + w_r[UZ])
    bx_a = 0.5 * (w_l[BX] + w_r[BX])
    by_a = 0.5 * (w_l[BY] + w_r[BY])
    bz_a = 0.5 * (w_l[BZ] + w_r[BZ])
    bpp_a = 0.5 * (bpp_l + bpp_r)

    u2_a = 0.5 * ((w_l[UX] ** 2 + w_l[UY] ** 2 + w_l[UZ] ** 2)
                  + (w_r[UX] ** 2 + w_r[UY] ** 2 + w_r[UZ] ** 2))
    b2_a = 0.5 * ((w_l[BX] ** 2 + w_l[BY] ** 2 + w_l[BZ] ** 2)
                  + (w_r[BX] ** 2 + w_r[BY] ** 2 + w_r[BZ] ** 2))
    bppux_a = 0.5 * (bpp_l * w_l[UX] + bpp_r * w_r[UX])
    bppuy_a = 0.5 * (bpp_l * w_l[UY] + bpp_r * w_r[UY])
    bppuz_a = 0.5 * (bpp_l * w_l[UZ] + bpp_r * w_r[UZ])

    f = np.empty_like(w_l)
    f[RHO] = rho_ln * ux_a
    f[MX] = rho_a / bpp_a + ux_a * f[RHO] + 0.5 * b2_a - bx_a * bx_a
    f[MY] = uy_a * f[RHO] - bx_a * by_a
    f[MZ] = uz_a * f[RHO] - bx_a * bz_a
    f[PPAR] = f[RHO] / bpl_ln
    f[BX] = np.zeros_like(rho_a)
    f[BY] = (bppux_a * by_a - bppuy_a * bx_a) / bpp_a
    f[BZ] = (bppux_a * bz_a - bppuz_a * bx_a) / bpp_a
    f[ENE] = (0.5 * (2.0 / bpp_ln - u2_a) * f[RHO]
              + ux_a * f[MX] + uy_a * f[MY] + uz_a * f[MZ]
              + 0.5 * f[PPAR]
              + bx_a * f[BX] + by_a * f[BY] + bz_a * f[BZ]
              - 0.5 * ux_a * b2_a
              + (ux_a * bx_a + uy_a * by_a + uz_a * bz_a) * bx_a)
    return f


def ec_flux_fourth(w_mm, w_m, w_p, w_pp, axis):
    """Fourth-order linear combination of two-point fluxes.

    The four states are the cells (i-1, i, i+1, i+2) around the interface
    i+1/2: 4/3 of the near pair minus 1/6 of each of the two wide pairs.
    """
    near = ec_flux(w_m, w_p, axis)
    wide = ec_flux(w_mm, w_p, axis) + ec_flux(w_m, w_pp, axis)
    return (4.0 / 3.0) * near - (1.0 / 6.0) * wide


def ec_entropy_flux(w_l, w_r, axis, flux=None, v_l=None, v_r=None):
    """Numerical entropy flux matched to the entropy-conservative flux.

    Q = mean(V).F + mean(phi) * mean(B_n) - mean(potential flux); with
    both cells equal it collapses to the exact entropy flux.
    """
    if flux is None:
        flux = ec_flux(w_l, w_r, axis)
    if v_l is None:
        v_l = st.entropy_vars(w_l)
    if v_r is None:
        v_r = st.entropy_vars(w_r)
    v_a = 0.5 * (v_l + v_r)
    phi_a = 0.5 * (st.godunov_phi_value(v_l) + st.godunov_phi_value(v_r))
    pot_a = 0.5 * (st.entropy_potential_flux(w_l, axis)
                   + st.entropy_potential_flux(w_r, axis))
    bn = (BX, BY)[axis]
    bn_a = 0.5 * (w_l[bn] + w_r[bn])
    return np.sum(v_a * flux, axis=0) + phi_a * bn_a - pot_a
