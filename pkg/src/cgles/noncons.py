"""Non-conservative coupling terms and central-difference stencils.

The anisotropy enters the momentum/energy/parallel-pressure equations
through a matrix product C_d(U) * dU/dx_d that cannot be written in
divergence form.  The rows are evaluated directly as dot products (the
matrix has four identically-zero rows and rank-deficient structure, so
materializing 9x9 blocks per cell would be wasted work).

The defining property, exercised heavily in the tests, is that the rows
combine so that V . (C_d g) = 0 for every state and every vector g: the
coupling moves energy between slots without creating entropy.
"""

import numpy as np

from . import state as st
from .errors import DegenerateField, InsufficientGhostWidth
from .fluxes import perm_xy
from .state import BX, BY, BZ, ENE, MX, MY, MZ, PPAR, PPERP, RHO, UX, UY, UZ


def noncons_apply(w, g, axis):
    """Return C_axis(w) . g without forming the matrix.

    ``w`` and ``g`` are (9, ...) arrays; needs a usable field direction,
    so |B|^2 must clear the floor.
    """
    if axis == st.Y:
        return perm_xy(noncons_apply(perm_xy(w), perm_xy(g), st.X))

    b2 = w[BX] ** 2 + w[BY] ** 2 + w[BZ] ** 2
    if not np.all(b2 >= st.EPS_B2):
        raise DegenerateField("|B|^2 below floor in non-conservative term")
    babs = np.sqrt(b2)
    bx = w[BX] / babs
    by = w[BY] / babs
    bz = w[BZ] / babs

    rho = w[RHO]
    ux, uy, uz = w[UX], w[UY], w[UZ]
    u2 = ux * ux + uy * uy + uz * uz
    bu = bx * ux + by * uy + bz * uz
    dp = w[PPAR] - w[PPERP]
    gx = dp * (1.0 - bx * bx)
    gy = dp * (1.0 - by * by)
    gz = dp * (1.0 - bz * bz)

    out = np.zeros_like(g)

    # momentum rows share the pattern  q * (transport block) + field block
    def momentum_row(q, fbx, fby, fbz):
        return (q * (-0.5 * u2 * g[RHO] + ux * g[MX] + uy * g[MY]
                     + uz * g[MZ] + 1.5 * g[PPAR] - g[ENE])
                + (q * w[BX] + fbx) * g[BX]
                + (q * w[BY] + fby) * g[BY]
                + (q * w[BZ] + fbz) * g[BZ])

    out[MX] = momentum_row(
        bx * bx,
        2.0 * gx * bx / babs,
        -2.0 * dp * by * bx * bx / babs,
        -2.0 * dp * bz * bx * bx / babs,
    )
    out[MY] = momentum_row(
        bx * by,
        (gx * by - dp * by * bx * bx) / babs,
        (gy * bx - dp * bx * by * by) / babs,
        -2.0 * dp * bx * by * bz / babs,
    )
    out[MZ] = momentum_row(
        bx * bz,
        (gx * bz - dp * bz * bx * bx) / babs,
        -2.0 * dp * bx * by * bz / babs,
        (gz * bx - dp * bx * bz * bz) / babs,
    )

    coef = 2.0 * w[PPAR] * bx / rho
    out[PPAR] = coef * (-bu * g[RHO] + bx * g[MX] + by * g[MY] + bz * g[MZ])

    ups1 = -bx * bu * 0.5 * u2 - dp * bx * bu / rho
    ups2 = bx * bu * ux + dp * bx * bx / rho
    ups3 = bx * bu * uy + dp * bx * by / rho
    ups4 = bx * bu * uz + dp * bx * bz / rho
    shear = bu + bx * ux
    th1 = (shear * gx - dp * bx * bx * (by * uy + bz * uz)) / babs
    th2 = (gy * bx * uy - dp * bx * by * bz * uz - shear * dp * bx * by) / babs
    th3 = (gz * bx * uz - dp * bx * by * bz * uy - shear * dp * bx * bz) / babs
    out[ENE] = (ups1 * g[RHO] + ups2 * g[MX] + ups3 * g[MY] + ups4 * g[MZ]
                + 1.5 * bx * bu * g[PPAR] - bx * bu * g[ENE]
                + (bx * bu * w[BX] + th1) * g[BX]
                + (bx * bu * w[BY] + th2) * g[BY]
                + (bx * bu * w[BZ] + th3) * g[BZ])
    return out


def noncons_matrix(w, axis):
    """Materialized C_axis(w) for a single state (test/diagnostic helper)."""
    w = np.asarray(w, dtype=float)
    cols = []
    for j in range(st.NVAR):
        e = np.zeros(st.NVAR)
        e[j] = 1.0
        cols.append(noncons_apply(w, e, axis))
    return np.stack(cols, axis=1)


def godunov_term(v, divb):
    """Field-divergence coupling phi'(V) scaled by a divergence estimate."""
    return st.godunov_phi_gradient(v) * divb


def central_diff(samples, dx, order, axis=-1):
    """Central difference along ``axis`` of a ghost-padded array.

    Returns the derivative where the stencil fits, shrinking the axis by
    2 (order 2) or 4 (order 4) entries.
    """
    a = np.asarray(samples)
    half = order // 2
    if order not in (2, 4):
        raise ValueError(f"unsupported order {order}")
    if a.shape[axis] < 2 * half + 1:
        raise InsufficientGhostWidth(
            f"axis length {a.shape[axis]} too short for order {order}")

    def cut(lo, hi):
        idx = [slice(None)] * a.ndim
        idx[axis] = slice(lo, hi)
        return a[tuple(idx)]

    if order == 2:
        return (cut(2, None) - cut(0, -2)) / (2.0 * dx)
    return (-cut(4, None) + 8.0 * cut(3, -1)
            - 8.0 * cut(1, -3) + cut(0, -4)) / (12.0 * dx)
