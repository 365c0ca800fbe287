"""State algebra for a collisionless plasma with directional pressures.

The model evolves nine quantities per cell.  Axis 0 of every field array
indexes the variable slot, so a single state is an array of shape ``(9,)``
and a 2-D field is ``(9, nx, ny)``:

====  ===========  =====================================================
slot  conserved    primitive
====  ===========  =====================================================
0     rho          rho        mass density
1-3   mx,my,mz     ux,uy,uz   momentum / velocity
4     p_par        p_par      pressure along the magnetic field
5     ene          p_perp     total energy / perpendicular pressure
6-8   Bx,By,Bz     Bx,By,Bz   magnetic field
====  ===========  =====================================================

Total energy closes the system through

    ene = rho|u|^2/2 + |B|^2/2 + (p_par + 2 p_perp)/2,

i.e. internal energy is 3/2 times the mean pressure (p_par + 2 p_perp)/3.
The entropy machinery is built around s = ln(p_par * p_perp^2 / rho^5),
entropy density -rho*s and its velocity-weighted fluxes.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    ComplexSpeed,
    DegenerateEntropyState,
    DegenerateField,
    NonPositiveDensity,
    NonPositivePressure,
)

# Variable slots.  Conserved and primitive layouts share indices; only the
# meaning of slots 1-3 and 5 changes.
RHO, MX, MY, MZ, PPAR, ENE, BX, BY, BZ = range(9)
UX, UY, UZ, PPERP = MX, MY, MZ, ENE
NVAR = 9

X, Y = 0, 1  # sweep directions

#: floor on |B|^2 before a unit field direction b = B/|B| may be formed
EPS_B2 = 1e-12
#: relative clamp for tiny negative speed radicands (roundoff only)
SPEED_TOL = 1e-12

_NORMAL_B = (BX, BY)
_NORMAL_U = (UX, UY)


def _vel2(w):
    return w[UX] ** 2 + w[UY] ** 2 + w[UZ] ** 2


def _mag2(w):
    return w[BX] ** 2 + w[BY] ** 2 + w[BZ] ** 2


def cons_to_prim(u, check=True):
    """Convert conserved fields to primitive fields.

    Raises NonPositiveDensity / NonPositivePressure / DegenerateField when
    ``check`` is on and the state has left the physical set.
    """
    rho = u[RHO]
    if check:
        if not np.all(rho > 0.0):
            raise NonPositiveDensity("density must be positive")
        if not np.all(_mag2(u) > EPS_B2):
            raise DegenerateField("|B|^2 at or below floor")
    w = np.empty_like(u)
    w[RHO] = rho
    w[UX] = u[MX] / rho
    w[UY] = u[MY] / rho
    w[UZ] = u[MZ] / rho
    w[PPAR] = u[PPAR]
    w[BX] = u[BX]
    w[BY] = u[BY]
    w[BZ] = u[BZ]
    kin = 0.5 * (u[MX] ** 2 + u[MY] ** 2 + u[MZ] ** 2) / rho
    mag = 0.5 * _mag2(u)
    # ene = kin + mag + (p_par + 2 p_perp)/2  =>  solve for p_perp
    w[PPERP] = u[ENE] - kin - mag - 0.5 * u[PPAR]
    if check and not (np.all(u[PPAR] > 0.0) and np.all(w[PPERP] > 0.0)):
        raise NonPositivePressure("directional pressures must be positive")
    return w


def prim_to_cons(w, check=True):
    """Convert primitive fields to conserved fields."""
    if check:
        if not np.all(w[RHO] > 0.0):
            raise NonPositiveDensity("density must be positive")
        if not (np.all(w[PPAR] > 0.0) and np.all(w[PPERP] > 0.0)):
            raise NonPositivePressure("directional pressures must be positive")
        if not np.all(_mag2(w) > EPS_B2):
            raise DegenerateField("|B|^2 at or below floor")
    u = np.empty_like(w)
    u[RHO] = w[RHO]
    u[MX] = w[RHO] * w[UX]
    u[MY] = w[RHO] * w[UY]
    u[MZ] = w[RHO] * w[UZ]
    u[PPAR] = w[PPAR]
    u[ENE] = (0.5 * w[RHO] * _vel2(w) + 0.5 * _mag2(w)
              + 0.5 * w[PPAR] + w[PPERP])
    u[BX] = w[BX]
    u[BY] = w[BY]
    u[BZ] = w[BZ]
    return u


def mean_pressure(w):
    """Isotropic-equivalent pressure (p_par + 2 p_perp)/3."""
    return (w[PPAR] + 2.0 * w[PPERP]) / 3.0


def specific_entropy(w):
    """s = ln(p_par * p_perp^2 / rho^5)."""
    return (np.log(w[PPAR]) + 2.0 * np.log(w[PPERP])
            - 5.0 * np.log(w[RHO]))


def entropy_density(w):
    """Convex entropy -rho*s."""
    return -w[RHO] * specific_entropy(w)


def entropy_flux(w):
    """Entropy fluxes (-rho*ux*s, -rho*uy*s) as a tuple."""
    rs = w[RHO] * specific_entropy(w)
    return -rs * w[UX], -rs * w[UY]


def entropy_pair(w):
    """(entropy density, x entropy flux, y entropy flux)."""
    qx, qy = entropy_flux(w)
    return entropy_density(w), qx, qy


def entropy_vars(w):
    """Gradient of -rho*s with respect to the conserved variables."""
    beta_perp = w[RHO] / w[PPERP]
    beta_par = w[RHO] / w[PPAR]
    v = np.empty_like(w)
    v[RHO] = 5.0 - specific_entropy(w) - beta_perp * _vel2(w)
    v[MX] = 2.0 * beta_perp * w[UX]
    v[MY] = 2.0 * beta_perp * w[UY]
    v[MZ] = 2.0 * beta_perp * w[UZ]
    v[PPAR] = beta_perp - beta_par
    v[ENE] = -2.0 * beta_perp
    v[BX] = 2.0 * beta_perp * w[BX]
    v[BY] = 2.0 * beta_perp * w[BY]
    v[BZ] = 2.0 * beta_perp * w[BZ]
    return v


def prim_from_entropy_vars(v):
    """Invert the entropy-variable map back to primitive fields.

    The inverse exists only on the image of the physical set; anything else
    raises DegenerateEntropyState.
    """
    beta_perp = -0.5 * v[ENE]
    if not np.all(beta_perp > 0.0):
        raise DegenerateEntropyState("slot 5 must be negative (beta_perp > 0)")
    beta_par = beta_perp - v[PPAR]
    if not np.all(beta_par > 0.0):
        raise DegenerateEntropyState("implied beta_par must be positive")
    w = np.empty_like(v)
    w[UX] = 0.5 * v[MX] / beta_perp
    w[UY] = 0.5 * v[MY] / beta_perp
    w[UZ] = 0.5 * v[MZ] / beta_perp
    w[BX] = 0.5 * v[BX] / beta_perp
    w[BY] = 0.5 * v[BY] / beta_perp
    w[BZ] = 0.5 * v[BZ] / beta_perp
    s = 5.0 - v[RHO] - beta_perp * _vel2(w)
    # s = ln(p_par p_perp^2 / rho^5) with p = rho/beta  =>  solve for rho
    w[RHO] = np.exp(-0.5 * (s + np.log(beta_par) + 2.0 * np.log(beta_perp)))
    w[PPAR] = w[RHO] / beta_par
    w[PPERP] = w[RHO] / beta_perp
    return w


# --- potential pair used by the flux/entropy compatibility identities -------

def godunov_phi(v):
    """Scalar potential 2*beta_perp*(u . B) and its gradient in V.

    The potential is homogeneous of degree one in the entropy variables,
    which is what makes the field-divergence term entropy-neutral.
    Returns ``(phi, phi_prime)``.
    """
    if not np.all(v[ENE] != 0.0):
        raise DegenerateEntropyState("slot 5 of V must be nonzero")
    return godunov_phi_value(v), godunov_phi_gradient(v)


def godunov_phi_value(v):
    """Just the scalar potential -(V2*V7 + V3*V8 + V4*V9)/V6."""
    dot = v[MX] * v[BX] + v[MY] * v[BY] + v[MZ] * v[BZ]
    return -dot / v[ENE]


def godunov_phi_gradient(v):
    """Gradient of :func:`godunov_phi` with respect to the entropy variables.

    Equals (0, B, 0, u.B, u) slot-wise; returned in the 9-slot layout.
    """
    inv = -1.0 / v[ENE]
    ux = v[MX] * inv
    uy = v[MY] * inv
    uz = v[MZ] * inv
    bx = v[BX] * inv
    by = v[BY] * inv
    bz = v[BZ] * inv
    g = np.empty_like(v)
    g[RHO] = np.zeros_like(ux)
    g[MX] = bx
    g[MY] = by
    g[MZ] = bz
    g[PPAR] = np.zeros_like(ux)
    g[ENE] = ux * bx + uy * by + uz * bz
    g[BX] = ux
    g[BY] = uy
    g[BZ] = uz
    return g


def entropy_potential(w):
    """Conjugate potential V.U - (-rho*s) = 2*rho + beta_perp*|B|^2."""
    return 2.0 * w[RHO] + w[RHO] / w[PPERP] * _mag2(w)


def entropy_potential_flux(w, axis):
    """Directional potential flux: potential times the normal velocity."""
    return entropy_potential(w) * w[_NORMAL_U[axis]]


# --- characteristic speeds ---------------------------------------------------

@dataclass
class WaveSpeeds:
    """Characteristic speeds of one sweep direction.

    ``c_a/c_f/c_s`` come from the full quasi-linear system (pressure
    anisotropy included) and drive the CFL limit.  ``cons_cf/cons_cs`` and
    the building blocks ``a`` (perpendicular sound) and ``v_ax`` (normal
    Alfven) belong to the conservative part only and size the interface
    diffusion.
    """
    a: np.ndarray
    v_ax: np.ndarray
    cons_cf: np.ndarray
    cons_cs: np.ndarray
    c_a: np.ndarray
    c_f: np.ndarray
    c_s: np.ndarray


def _clamped_sqrt(rad, scale, what):
    """sqrt with a relative clamp for roundoff-negative radicands."""
    bad = rad < -SPEED_TOL * scale
    if np.any(bad):
        raise ComplexSpeed(f"negative radicand in {what}")
    return np.sqrt(np.maximum(rad, 0.0))


def conservative_speeds(w, axis):
    """(a, v_ax, cons_cf, cons_cs) of the conservative sub-system.

    Never forms the field direction, so it is safe arbitrarily close to
    |B| = 0; the fast/slow radicand (v_a^2+a^2)^2 - 4 v_ax^2 a^2 is
    non-negative by algebra and only clamped against roundoff.
    """
    rho = w[RHO]
    a2 = 2.0 * w[PPERP] / rho
    vax2 = w[_NORMAL_B[axis]] ** 2 / rho
    va2 = _mag2(w) / rho
    tot = va2 + a2
    rad = tot * tot - 4.0 * vax2 * a2
    root = _clamped_sqrt(rad, tot * tot, "conservative fast/slow speeds")
    cf2 = 0.5 * (tot + root)
    cs2 = 0.5 * (tot - root)
    cs2 = np.maximum(cs2, 0.0)  # exact zero at v_ax = 0 up to roundoff
    return np.sqrt(a2), np.sqrt(vax2), np.sqrt(cf2), np.sqrt(cs2)


def wave_speeds(w, axis, check=True):
    """Full characteristic speed set for one sweep direction.

    Needs the field direction, so |B|^2 must clear the ``EPS_B2`` floor
    (DegenerateField otherwise).  Radicands that dip below zero by more
    than the relative clamp raise ComplexSpeed — that happens only outside
    the admissible set.
    """
    rho = w[RHO]
    p_par = w[PPAR]
    p_perp = w[PPERP]
    b2 = _mag2(w)
    if check and not np.all(b2 >= EPS_B2):
        raise DegenerateField("|B|^2 below floor; field direction undefined")
    bn = w[_NORMAL_B[axis]]
    bn2 = bn * bn / b2
    dp = p_par - p_perp

    ca2 = (bn * bn - dp * bn2) / rho
    scale_a = (bn * bn + np.abs(dp) * bn2) / rho + 1.0
    c_a = _clamped_sqrt(ca2, scale_a, "field-aligned speed")

    x = b2 + 2.0 * p_perp + bn2 * (2.0 * p_par - p_perp)
    z = (p_perp ** 2 * bn2 * (1.0 - bn2)
         - 3.0 * p_par * p_perp * bn2 * (2.0 - bn2)
         + 3.0 * p_par ** 2 * bn2 * bn2
         - 3.0 * bn * bn * p_par)
    rad = x * x + 4.0 * z
    root = _clamped_sqrt(rad, x * x, "fast/slow speeds")
    cf2 = 0.5 * (x + root) / rho
    cs2 = 0.5 * (x - root) / rho
    c_f = _clamped_sqrt(cf2, np.abs(cf2) + 1.0, "fast speed")
    c_s = _clamped_sqrt(cs2, np.maximum(cf2, 1.0), "slow speed")

    a, v_ax, cons_cf, cons_cs = conservative_speeds(w, axis)
    return WaveSpeeds(a=a, v_ax=v_ax, cons_cf=cons_cf, cons_cs=cons_cs,
                      c_a=c_a, c_f=c_f, c_s=c_s)


def max_signal_speed(w, axis, check=True):
    """|u_n| + max(c_a, c_f): the CFL signal speed of one direction."""
    sp = wave_speeds(w, axis, check=check)
    return np.abs(w[_NORMAL_U[axis]]) + np.maximum(sp.c_a, sp.c_f)


def cons_max_signal(w, axis):
    """|u_n| + conservative fast speed (interface diffusion magnitude)."""
    _, _, cf, _ = conservative_speeds(w, axis)
    return np.abs(w[_NORMAL_U[axis]]) + cf


# --- admissibility -----------------------------------------------------------

@dataclass
class AdmissibilityReport:
    """Pointwise admissibility data.

    ``ok`` is the admissible mask; ``p_m``/``p_M`` are the parallel-pressure
    bounds p_perp^2/(6 p_perp + 3|B|^2) and |B|^2 + p_perp; ``region`` labels
    the characteristic-ordering band (1, 2 or 3, boundary ties to the lower
    band, 0 where inadmissible).
    """
    ok: np.ndarray
    p_m: np.ndarray
    p_M: np.ndarray
    region: np.ndarray


def admissibility(w):
    """Classify states against positivity and the pressure-band bounds."""
    p_perp = w[PPERP]
    b2 = _mag2(w)
    p_m = p_perp ** 2 / (6.0 * p_perp + 3.0 * b2)
    p_M = b2 + p_perp
    ok = ((w[RHO] > 0.0) & (w[PPAR] > 0.0) & (p_perp > 0.0)
          & (w[PPAR] >= p_m) & (w[PPAR] <= p_M))
    r12 = 0.25 * p_M
    r23 = 0.25 * p_M + 0.75 * p_m
    region = np.where(w[PPAR] <= r12, 1, np.where(w[PPAR] <= r23, 2, 3))
    region = np.where(ok, region, 0)
    return AdmissibilityReport(ok=ok, p_m=p_m, p_M=p_M, region=region)
