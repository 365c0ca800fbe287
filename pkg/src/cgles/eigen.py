"""Entropy-scaled eigenvector frames for the interface diffusion operator.

The diffusion acts on the conservative sub-system (the non-conservative
coupling is handled separately), whose primitive-variable eigenvectors are
the familiar fast/slow/Alfven/entropy set with the perpendicular pressure
playing the gas-pressure role: a^2 = 2 p_perp / rho.

Matrix conventions: state fields come in as ``(9, ...)``; every matrix
function returns ``(..., 9, 9)`` with the matrix on the trailing axes, so
batched ``np.matmul`` applies directly.  Columns of the eigenvector
matrices are ordered by wave speed:

    [u-c_f, u-c_s, u-v_ax, u, u, u, u+v_ax, u+c_s, u+c_f]

(the three middle columns are the entropy, field-divergence and parallel
pressure modes).  The scaled frame R = (dU/dW) R_W T satisfies
R Rᵀ = dU/dV, which is what makes the Rusanov-type interface diffusion
provably entropy-dissipative.
"""

from dataclasses import dataclass

import numpy as np

from . import state as st
from .errors import SqrtBranch
from .fluxes import PERM_XY, perm_xy
from .state import BX, BY, BZ, ENE, MX, MY, MZ, PPAR, PPERP, RHO, UX, UY, UZ

#: relative thresholds for the two eigenvector degeneracies
EPS_TANGENT = 1e-12
EPS_UMBILIC = 1e-12


@dataclass
class EigenDecomp:
    """Scaled eigenvector frame and diffusion magnitude at one interface."""
    r_tilde: np.ndarray   # (..., 9, 9)
    lambda_max: np.ndarray
    axis: int


def du_dw(w):
    """Jacobian of the conserved vector with respect to the primitives."""
    shape = w.shape[1:]
    m = np.zeros(shape + (9, 9))
    for i in (RHO, PPAR, BX, BY, BZ):
        m[..., i, i] = 1.0
    for mom, vel in ((MX, UX), (MY, UY), (MZ, UZ)):
        m[..., mom, RHO] = w[vel]
        m[..., mom, vel] = w[RHO]
        m[..., ENE, vel] = w[RHO] * w[vel]
    m[..., ENE, RHO] = 0.5 * (w[UX] ** 2 + w[UY] ** 2 + w[UZ] ** 2)
    m[..., ENE, PPAR] = 0.5
    m[..., ENE, PPERP] = 1.0
    m[..., ENE, BX] = w[BX]
    m[..., ENE, BY] = w[BY]
    m[..., ENE, BZ] = w[BZ]
    return m


def _tangential_basis(w):
    """(beta_y, beta_z): unit tangential field direction, regularized.

    When the tangential field underflows relative to |B| the basis is
    pinned to magnitude 1/sqrt(2) with the signs of the components, which
    keeps the construction equivariant under coordinate reflections.
    """
    bt2 = w[BY] ** 2 + w[BZ] ** 2
    b2 = w[BX] ** 2 + bt2
    tiny = bt2 < EPS_TANGENT * b2
    denom = np.sqrt(np.where(tiny, 1.0, bt2))
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    beta_y = np.where(tiny, np.copysign(inv_sqrt2, w[BY]), w[BY] / denom)
    beta_z = np.where(tiny, np.copysign(inv_sqrt2, w[BZ]), w[BZ] / denom)
    return beta_y, beta_z


def _alpha_trig(a2, cf2, cs2):
    """(alpha_f, alpha_s) wave-strength partition, umbilic-regularized."""
    spread = cf2 - cs2
    umbilic = np.abs(spread) < EPS_UMBILIC * cf2
    safe = np.where(umbilic, 1.0, spread)
    af2 = np.clip((a2 - cs2) / safe, 0.0, 1.0)
    as2 = np.clip((cf2 - a2) / safe, 0.0, 1.0)
    alpha_f = np.where(umbilic, 1.0, np.sqrt(af2))
    alpha_s = np.where(umbilic, 0.0, np.sqrt(as2))
    return alpha_f, alpha_s


def eigensystem_primitive(w, axis):
    """Right eigenvectors of the conservative part in primitive variables."""
    if axis == st.Y:
        rw = eigensystem_primitive(perm_xy(w), st.X)
        return rw[..., PERM_XY, :]

    rho = w[RHO]
    p_par = w[PPAR]
    a, v_ax, cf, cs = st.conservative_speeds(w, st.X)
    a2, cf2, cs2 = a * a, cf * cf, cs * cs
    alpha_f, alpha_s = _alpha_trig(a2, cf2, cs2)
    beta_y, beta_z = _tangential_basis(w)
    sgn = np.where(w[BX] >= 0.0, 1.0, -1.0)
    sqrt_rho = np.sqrt(rho)

    m = np.zeros(rho.shape + (9, 9))

    def magnetosonic(col, al_own, al_other, c_own, c_other, pm, tang, field):
        # pm: sign of the wave speed; tang/field: signs of the coupled
        # tangential velocity and field perturbations relative to beta.
        m[..., RHO, col] = al_own * rho
        m[..., UX, col] = pm * al_own * c_own
        m[..., UY, col] = tang * al_other * beta_y * c_other * sgn
        m[..., UZ, col] = tang * al_other * beta_z * c_other * sgn
        m[..., PPAR, col] = al_own * p_par
        m[..., PPERP, col] = a2 * al_own * rho
        m[..., BY, col] = field * a * al_other * beta_y * sqrt_rho
        m[..., BZ, col] = field * a * al_other * beta_z * sqrt_rho

    # fast pair: tangential perturbations ride on the slow strengths, with
    # the tangential velocity opposing the wave direction
    magnetosonic(0, alpha_f, alpha_s, cf, cs, pm=-1.0, tang=+1.0, field=+1.0)
    magnetosonic(8, alpha_f, alpha_s, cf, cs, pm=+1.0, tang=-1.0, field=+1.0)
    # slow pair: roles swap, tangential velocity aligns, field flips
    magnetosonic(1, alpha_s, alpha_f, cs, cf, pm=-1.0, tang=-1.0, field=-1.0)
    magnetosonic(7, alpha_s, alpha_f, cs, cf, pm=+1.0, tang=+1.0, field=-1.0)

    for col, pm in ((2, -1.0), (6, 1.0)):
        m[..., UY, col] = pm * beta_z
        m[..., UZ, col] = -pm * beta_y
        m[..., BY, col] = -beta_z * sqrt_rho * sgn
        m[..., BZ, col] = beta_y * sqrt_rho * sgn

    m[..., RHO, 3] = 1.0   # entropy mode
    m[..., BX, 4] = 1.0    # field-divergence mode
    m[..., PPAR, 5] = 1.0  # parallel-pressure mode
    return m


def _sqrt_2x2(a, b, d):
    """Closed-form square root of a symmetric 2x2 block [[a, b], [b, d]]."""
    det = a * d - b * b
    if not np.all(det >= 0.0):
        raise SqrtBranch("negative determinant in scaling block")
    s = np.sqrt(det)
    t2 = a + d + 2.0 * s
    if not np.all(t2 > 0.0):
        raise SqrtBranch("vanishing trace in scaling block square root")
    t = np.sqrt(t2)
    return (a + s) / t, b / t, (d + s) / t


def scaling_squared(w, axis):
    """The diagonal-plus-coupled-block matrix Y whose square root scales R_W."""
    if axis == st.Y:
        # Y couples wave strengths, not state slots; same entries per axis
        return scaling_squared(perm_xy(w), st.X)
    rho = w[RHO]
    p_par = w[PPAR]
    p_perp = w[PPERP]
    y = np.zeros(rho.shape + (9, 9))
    for col in (0, 1, 7, 8):
        y[..., col, col] = 1.0 / (8.0 * rho)
    for col in (2, 6):
        y[..., col, col] = p_perp / (4.0 * rho * rho)
    y[..., 4, 4] = p_perp / (2.0 * rho)
    y[..., 3, 3] = rho / 4.0
    y[..., 3, 5] = y[..., 5, 3] = p_par / 4.0
    y[..., 5, 5] = 5.0 * p_par * p_par / (4.0 * rho)
    return y


def scaling_matrix(w, axis):
    """T = sqrt(Y): Barth scaling of the primitive eigenvector columns."""
    if axis == st.Y:
        return scaling_matrix(perm_xy(w), st.X)
    rho = w[RHO]
    p_par = w[PPAR]
    p_perp = w[PPERP]
    t = np.zeros(rho.shape + (9, 9))
    for col in (0, 1, 7, 8):
        t[..., col, col] = 1.0 / (2.0 * np.sqrt(2.0 * rho))
    for col in (2, 6):
        t[..., col, col] = np.sqrt(p_perp) / (2.0 * rho)
    t[..., 4, 4] = np.sqrt(p_perp / (2.0 * rho))
    t44, t46, t66 = _sqrt_2x2(rho / 4.0, p_par / 4.0,
                              5.0 * p_par * p_par / (4.0 * rho))
    t[..., 3, 3] = t44
    t[..., 3, 5] = t[..., 5, 3] = t46
    t[..., 5, 5] = t66
    return t


def entropy_scaled_matrix(w, axis):
    """R = (dU/dW) R_W T evaluated at one state."""
    return du_dw(w) @ eigensystem_primitive(w, axis) @ scaling_matrix(w, axis)


def conservative_lambda_max(w, axis):
    """max |lambda| over the conservative-part spectrum: |u_n| + c_fast."""
    return st.cons_max_signal(w, axis)


def entropy_scaled_eigenvectors(w_l, w_r, axis):
    """Interface frame: all factors at the primitive arithmetic average."""
    w_a = 0.5 * (w_l + w_r)
    return EigenDecomp(
        r_tilde=entropy_scaled_matrix(w_a, axis),
        lambda_max=conservative_lambda_max(w_a, axis),
        axis=axis,
    )


def diffusion_matrix(decomp, debug=False):
    """Rusanov-type D = R Lambda Rᵀ with the scalar Lambda = lambda_max I."""
    r = decomp.r_tilde
    lam = np.asarray(decomp.lambda_max)
    d = lam[..., None, None] * (r @ np.swapaxes(r, -1, -2))
    if debug:
        lam_mat = lam[..., None, None] * np.eye(9)
        alt = r @ lam_mat @ np.swapaxes(r, -1, -2)
        if not np.allclose(d, alt, rtol=1e-12, atol=1e-12):
            raise AssertionError("diffusion matrix forms disagree")
    return d
