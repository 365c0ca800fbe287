"""Semi-discrete right-hand side: entropy-stable finite differences.

Per cell the update reads

    dU/dt = -[flux differences]/Δ - φ'(V)(∂Bx/∂x + ∂By/∂y)
            - C_x ∂U/∂x - C_y ∂U/∂y   (+ relaxation source, handled outside)

with interface fluxes  F̂ = F̃(2p) - ½ λ R̃ ⟦Ŵ⟧  built from the
entropy-conservative flux plus scaled-eigenvector diffusion on the jump of
reconstructed scaled entropy variables.  The non-conservative derivatives
use second- or fourth-order central differences matching the flux order.

Array layout: conserved and primitive fields are ``(9, nx+2g)`` in 1D and
``(9, nx+2g, ny+2g)`` in 2D with ``g`` ghost layers on every side.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import state as st
from .eigen import conservative_lambda_max, entropy_scaled_matrix
from .errors import DimensionMismatch, InadmissibleState
from .fluxes import ec_entropy_flux, ec_flux, ec_flux_fourth
from .noncons import central_diff, godunov_term, noncons_apply
from .reconstruct import reconstruct_pair, window_size
from .state import BX, BY, PPAR, PPERP, RHO

#: ghost-layer width by spatial order
GHOST_FOR = {1: 2, 2: 2, 3: 4, 4: 4}

BC_KINDS = ("periodic", "outflow")


@dataclass
class Grid:
    """Uniform cell-centered grid; ``ny = 0`` selects 1D."""
    nx: int
    dx: float
    ny: int = 0
    dy: float = 0.0
    ghost: int = 2
    bc: str = "periodic"

    def __post_init__(self):
        if self.nx <= 0 or self.dx <= 0.0:
            raise DimensionMismatch("grid needs nx > 0 and dx > 0")
        if self.ny > 0 and self.dy <= 0.0:
            raise DimensionMismatch("2D grid needs dy > 0")
        if self.bc not in BC_KINDS:
            raise DimensionMismatch(f"unknown boundary kind {self.bc!r}")

    @property
    def two_d(self):
        return self.ny > 0

    @property
    def shape(self):
        g = self.ghost
        if self.two_d:
            return (9, self.nx + 2 * g, self.ny + 2 * g)
        return (9, self.nx + 2 * g)

    @property
    def interior(self):
        g = self.ghost
        if self.two_d:
            return (slice(None), slice(g, -g), slice(g, -g))
        return (slice(None), slice(g, -g))

    @property
    def measure(self):
        return self.dx * self.dy if self.two_d else self.dx


@dataclass
class SchemeConfig:
    """Numerical options for one scheme variant."""
    name: str
    k: int
    flux_order: int
    reconstruction: str
    integrator: str
    cfl: float = 0.4
    source_enabled: bool = False
    tau: float = 1e-5
    diffusion: bool = True
    eps_B: float = st.EPS_B2

    def __post_init__(self):
        if self.k not in (1, 2, 3, 4):
            raise DimensionMismatch(f"spatial order k={self.k} unsupported")
        want = 2 if self.k <= 2 else 4
        if self.flux_order != want:
            raise DimensionMismatch(
                f"order {self.k} pairs with flux order {want}, "
                f"got {self.flux_order}")

    @property
    def ghost(self):
        return GHOST_FOR[self.k]

    @property
    def central_order(self):
        return self.flux_order


SCHEMES = {
    "O2ES-EXP": SchemeConfig("O2ES-EXP", k=2, flux_order=2,
                             reconstruction="minmod", integrator="ssprk2"),
    "O3ES-EXP": SchemeConfig("O3ES-EXP", k=3, flux_order=4,
                             reconstruction="eno3", integrator="ssprk3"),
    "O4ES-EXP": SchemeConfig("O4ES-EXP", k=4, flux_order=4,
                             reconstruction="eno4", integrator="ssprk4"),
    # The IMEX variants all use the two-stage additive integrator; the
    # higher-order spatial pairings keep it (recorded in run metadata),
    # with alternative tableaus loadable through timeint.load_ark_tableau.
    "O2ES-IMEX": SchemeConfig("O2ES-IMEX", k=2, flux_order=2,
                              reconstruction="minmod", integrator="ark2",
                              source_enabled=True),
    "O3ES-IMEX": SchemeConfig("O3ES-IMEX", k=3, flux_order=4,
                              reconstruction="eno3", integrator="ark2",
                              source_enabled=True),
    "O4ES-IMEX": SchemeConfig("O4ES-IMEX", k=4, flux_order=4,
                              reconstruction="eno4", integrator="ark2",
                              source_enabled=True),
    "EC-only": SchemeConfig("EC-only", k=4, flux_order=4,
                            reconstruction="none", integrator="ssprk4",
                            diffusion=False),
}


def get_scheme(name, **overrides):
    cfg = SCHEMES[name]
    return replace(cfg, **overrides) if overrides else cfg


def apply_boundary(u, grid):
    """Fill ghost layers in place (and return the field)."""
    g = grid.ghost
    if grid.bc == "periodic":
        u[:, :g] = u[:, -2 * g:-g]
        u[:, -g:] = u[:, g:2 * g]
    else:
        u[:, :g] = u[:, g:g + 1]
        u[:, -g:] = u[:, -g - 1:-g]
    if grid.two_d:
        if grid.bc == "periodic":
            u[:, :, :g] = u[:, :, -2 * g:-g]
            u[:, :, -g:] = u[:, :, g:2 * g]
        else:
            u[:, :, :g] = u[:, :, g:g + 1]
            u[:, :, -g:] = u[:, :, -g - 1:-g]
    return u


def compute_dt(u, grid, cfl):
    """CFL step from the full-system signal speeds on interior cells."""
    if cfl == 0.0:
        return 0.0
    w = st.cons_to_prim(u[grid.interior])
    rate = st.max_signal_speed(w, st.X) / grid.dx
    if grid.two_d:
        rate = rate + st.max_signal_speed(w, st.Y) / grid.dy
    return cfl / float(np.max(rate))


def source_term(w, tau):
    """Pressure-isotropizing relaxation, nonzero only in the p_par slot."""
    s = np.zeros_like(w)
    s[PPAR] = (w[PPERP] - w[PPAR]) / tau
    return s


@dataclass
class RhsDiagnostics:
    """Per-interface entropy accounting gathered during assembly."""
    q_x: np.ndarray = None          # numerical entropy flux, x interfaces
    q_y: np.ndarray = None
    prod_x: np.ndarray = None       # ½ λ ⟦W⟧·⟦Ŵ⟧ ≥ 0 per x interface
    prod_y: np.ndarray = None

    def total_production(self, grid):
        """Domain entropy production rate (≤ 0), interface-summed."""
        total = 0.0
        if self.prod_x is not None:
            scale = grid.dy if grid.two_d else 1.0
            trimmed = self.prod_x.copy()
            trimmed[0] *= 0.5
            trimmed[-1] *= 0.5
            total -= float(np.sum(trimmed)) * scale
        if self.prod_y is not None:
            trimmed = self.prod_y.copy()
            trimmed[..., 0] *= 0.5
            trimmed[..., -1] *= 0.5
            total -= float(np.sum(trimmed)) * grid.dx
        return total


def _interface_windows(v, g, k, n):
    """(..., n+1, 2k, 9) sliding windows of per-cell vectors along -1."""
    m = window_size(k)
    vt = np.moveaxis(v, 0, -1)  # (..., S, 9)
    win = np.lib.stride_tricks.sliding_window_view(vt, m, axis=-2)
    win = np.moveaxis(win, -1, -2)  # (..., S-m+1, 2k? -> window axis, 9)
    half = m // 2
    i0 = g - half
    return win[..., i0:i0 + n + 1, :, :]


def _sweep(u, w, v, grid, cfg, axis, want_diag):
    """Flux + central-difference contributions of one direction.

    Returns (contrib, d_bn, qhat, production): the RHS contribution on
    interior cells (canonical layout), the central derivative of the normal
    field component, and diagnostics arrays (or None).
    """
    g = grid.ghost
    n = grid.nx if axis == st.X else grid.ny
    delta = grid.dx if axis == st.X else grid.dy

    take = [slice(None)] * u.ndim
    if grid.two_d:  # restrict the non-swept direction to interior cells
        other = 2 if axis == st.X else 1
        take[other] = slice(g, -g)
    u_s = np.moveaxis(u[tuple(take)], 1 + axis, -1)
    w_s = np.moveaxis(w[tuple(take)], 1 + axis, -1)
    v_s = np.moveaxis(v[tuple(take)], 1 + axis, -1)

    w_l = w_s[..., g - 1:g + n]
    w_r = w_s[..., g:g + n + 1]
    if cfg.flux_order == 2:
        flux = ec_flux(w_l, w_r, axis)
    else:
        flux = ec_flux_fourth(w_s[..., g - 2:g + n - 1], w_l, w_r,
                              w_s[..., g + 1:g + n + 2], axis)

    qhat = production = None
    if want_diag:
        qhat = ec_entropy_flux(w_l, w_r, axis)
        if cfg.flux_order == 4:
            qhat = 4.0 / 3.0 * qhat - 1.0 / 6.0 * (
                ec_entropy_flux(w_s[..., g - 2:g + n - 1], w_r, axis)
                + ec_entropy_flux(w_l, w_s[..., g + 1:g + n + 2], axis))

    if cfg.diffusion:
        w_mean = 0.5 * (w_l + w_r)
        r_tilde = entropy_scaled_matrix(w_mean, axis)  # (..., n+1, 9, 9)
        lam = conservative_lambda_max(w_mean, axis)
        win = _interface_windows(v_s, g, cfg.k, n)
        w_sc = win @ r_tilde  # scaled entropy variables, per window cell
        rec_minus, rec_plus = reconstruct_pair(w_sc, cfg.k)
        jump_hat = rec_plus - rec_minus
        half = w_sc.shape[-2] // 2
        jump_raw = w_sc[..., half, :] - w_sc[..., half - 1, :]
        dvec = 0.5 * lam[..., None] * (r_tilde @ jump_hat[..., None])[..., 0]
        flux = flux - np.moveaxis(dvec, -1, 0)
        if want_diag:
            v_bar = 0.5 * (st.entropy_vars(w_l) + st.entropy_vars(w_r))
            qhat = qhat - 0.5 * lam * np.einsum(
                "i...,...i->...", v_bar,
                (r_tilde @ jump_hat[..., None])[..., 0])
            production = 0.5 * lam * np.sum(jump_raw * jump_hat, axis=-1)

    contrib = -(flux[..., 1:] - flux[..., :-1]) / delta

    du = central_diff(u_s, delta, cfg.central_order, axis=-1)
    off = g - (1 if cfg.central_order == 2 else 2)
    du_int = du[..., off:off + n]
    w_int = w_s[..., g:g + n]
    contrib = contrib - noncons_apply(w_int, du_int, axis)
    d_bn = du_int[BX if axis == st.X else BY]

    contrib = np.moveaxis(contrib, -1, 1 + axis)
    d_bn = np.moveaxis(d_bn, -1, axis)
    if want_diag:
        qhat = np.moveaxis(qhat, -1, axis)
        if production is not None:
            production = np.moveaxis(production, -1, axis)
    return contrib, d_bn, qhat, production


def _check_admissible(w_int):
    rep = st.admissibility(w_int)
    if not np.all(rep.ok):
        bad = np.argwhere(~rep.ok)
        i = tuple(bad[0])
        raise InadmissibleState(
            f"{bad.shape[0]} inadmissible cell(s); first at index {i}: "
            f"rho={w_int[(RHO,) + i]:.6g}, p_par={w_int[(PPAR,) + i]:.6g}, "
            f"band=[{rep.p_m[i]:.6g}, {np.asarray(rep.p_M)[i]:.6g}]",
            indices=bad)


def assemble_rhs(u, grid, cfg, diagnostics=False):
    """Semi-discrete RHS on interior cells (source term excluded).

    Ghost layers of ``u`` must already be filled (``apply_boundary``).
    With ``diagnostics=True`` returns ``(rhs, RhsDiagnostics)`` carrying
    per-interface numerical entropy fluxes and diffusion production terms.
    """
    w = st.cons_to_prim(u)
    _check_admissible(w[grid.interior])
    v = st.entropy_vars(w)

    cx, dbx, qx, px = _sweep(u, w, v, grid, cfg, st.X, diagnostics)
    rhs = cx
    divb = dbx
    qy = py = None
    if grid.two_d:
        cy, dby, qy, py = _sweep(u, w, v, grid, cfg, st.Y, diagnostics)
        rhs = rhs + cy
        divb = divb + dby
    rhs = rhs - godunov_term(v[grid.interior], divb)

    if diagnostics:
        return rhs, RhsDiagnostics(q_x=qx, q_y=qy, prod_x=px, prod_y=py)
    return rhs
