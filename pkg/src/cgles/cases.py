"""Bundled test problems: initial data and exact references.

Eight one-dimensional configurations (one smooth wave with a closed-form
solution, seven shock tubes) and one two-dimensional vortex.  Each entry
pins the domain, boundary kind, final time and either a left/right state
pair or a smooth field closure; ``init_case`` turns an entry into a
conserved field on a grid, ghost layers included.

Shock-tube states are stored in primitive slot order
(rho, u_x, u_y, u_z, p_par, p_perp, B_x, B_y, B_z).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .scheme import BC_KINDS, Grid, apply_boundary
from .state import BX, NVAR, PPAR, PPERP, RHO, UX, UY, UZ, prim_to_cons

_S4PI = math.sqrt(4.0 * math.pi)


@dataclass(frozen=True)
class CaseSpec:
    """One test problem: domain, boundary kind, final time, initial data.

    Exactly one of (``left``, ``right``) or ``profile`` is set.  Shock
    tubes carry the two primitive states plus the interface position
    ``x_jump``; smooth cases carry a closure evaluated at cell centers
    (``profile(x)`` in 1D, ``profile(x, y)`` in 2D).
    """

    name: str
    dim: int
    extent: tuple
    bc: str
    t_final: float
    left: tuple = None
    right: tuple = None
    x_jump: float = 0.0
    profile: object = None
    default_cells: int = 2000
    blurb: str = ""

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DimensionMismatch("case dim must be 1 or 2")
        if len(self.extent) != 2 * self.dim:
            raise DimensionMismatch("extent length must be 2*dim")
        if self.bc not in BC_KINDS:
            raise DimensionMismatch(f"unknown boundary kind {self.bc!r}")
        two_state = self.left is not None and self.right is not None
        if two_state == (self.profile is not None):
            raise DimensionMismatch(
                "need either left+right states or a profile closure")
        if two_state:
            if len(self.left) != NVAR or len(self.right) != NVAR:
                raise DimensionMismatch("states must have 9 slots")
            if self.dim == 1 and self.left[BX] != self.right[BX]:
                raise DimensionMismatch("1D case needs constant B_x")

    @property
    def bx(self):
        """The constant normal field of a 1D shock tube."""
        return self.left[BX]


def _wave_state(x, t):
    w = np.empty((NVAR,) + np.shape(x))
    w[RHO] = 2.0 + np.sin(2.0 * np.pi * (np.asarray(x) - t))
    w[UX] = 1.0
    w[UY] = 0.0
    w[UZ] = 0.0
    w[PPAR] = 1.0
    w[PPERP] = 1.0
    w[BX] = 1.0
    w[BX + 1] = 1.0
    w[BX + 2] = 0.0
    return w


def exact_accuracy_solution(x, t):
    """Primitive state of the traveling-wave problem at position x, time t.

    The density profile 2 + sin(2*pi*x) rides on a unit velocity while
    every other primitive stays constant, so the solution is the initial
    data shifted by t.
    """
    return _wave_state(x, t)


#: slot parity under a half-turn of the plane: in-plane vector components
#: flip sign, scalars and z-components do not.
_HALF_TURN_SIGN = np.array(
    [1.0, -1.0, -1.0, 1.0, 1.0, 1.0, -1.0, -1.0, 1.0])


def _vortex_state(x, y):
    xc = np.asarray(x)[:, None]
    yc = np.asarray(y)[None, :]
    w = np.empty((NVAR, xc.shape[0], yc.shape[1]))
    w[RHO] = 25.0 / (36.0 * np.pi)
    w[UX] = -np.sin(2.0 * np.pi * yc)
    w[UY] = np.sin(2.0 * np.pi * xc)
    w[UZ] = 0.0
    w[PPAR] = 5.0 / (12.0 * np.pi)
    w[PPERP] = 5.0 / (12.0 * np.pi)
    w[BX] = -np.sin(2.0 * np.pi * yc) / _S4PI
    w[BX + 1] = np.sin(4.0 * np.pi * xc) / _S4PI
    w[BX + 2] = 0.0
    # The configuration is invariant under a half-turn of the plane.  Float
    # sin() leaves ~1e-16 asymmetry between mirrored cells, which a long
    # nonlinear run amplifies; averaging with the rotated image (changes
    # values by at most 1 ulp) makes the discrete data exactly symmetric.
    return 0.5 * (w + _HALF_TURN_SIGN[:, None, None] * w[:, ::-1, ::-1])


def _tube(name, extent, t_final, left, right, x_jump=0.0, blurb=""):
    return CaseSpec(name=name, dim=1, extent=extent, bc="outflow",
                    t_final=t_final, left=left, right=right, x_jump=x_jump,
                    blurb=blurb)


CASES = {
    "accuracy": CaseSpec(
        name="accuracy", dim=1, extent=(0.0, 1.0), bc="periodic",
        t_final=2.0, profile=lambda x: _wave_state(x, 0.0),
        default_cells=320,
        blurb="smooth traveling density wave with closed-form solution"),
    "brio_wu": _tube(
        "brio_wu", (-1.0, 1.0), 0.2,
        left=(1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.75, 1.0, 0.0),
        right=(0.125, 0.0, 0.0, 0.0, 0.1, 0.1, 0.75, -1.0, 0.0),
        blurb="classic shock tube with reversing tangential field"),
    "ryu_jones": _tube(
        "ryu_jones", (-0.5, 0.5), 0.2,
        left=(1.08, 1.2, 0.0, 0.0, 0.95, 0.95,
              2.0 / _S4PI, 3.6 / _S4PI, 2.0 / _S4PI),
        right=(1.0, 0.0, 0.0, 0.0, 1.0, 1.0,
               2.0 / _S4PI, 4.0 / _S4PI, 2.0 / _S4PI),
        blurb="colliding-stream tube with oblique field"),
    "superfast": _tube(
        "superfast", (0.0, 1.0), 0.05,
        left=(1.0, -3.1, 0.0, 0.0, 1.0, 1.0, 0.0, 0.5, 0.0),
        right=(1.0, 3.1, 0.0, 0.0, 1.0, 1.0, 0.0, 0.5, 0.0),
        x_jump=0.5,
        blurb="diverging streams leaving a low-density, low-pressure core"),
    "rp4": _tube(
        "rp4", (-0.5, 0.5), 0.15,
        left=(1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.3, 1.0, 0.0),
        right=(0.4, 0.0, 0.0, 0.0, 0.4, 0.4, 1.3, -1.0, 0.0),
        blurb="strong normal field with tangential reversal"),
    "rp5": _tube(
        "rp5", (-0.5, 0.5), 0.15,
        left=(1.7, 0.0, 0.0, 0.0, 1.7, 1.7,
              3.899398 / _S4PI, 3.544908 / _S4PI, 0.0),
        right=(0.2, 0.0, 0.0, -1.496891, 0.2, 0.2,
               3.899398 / _S4PI, 2.785898 / _S4PI, 2.192064 / _S4PI),
        blurb="large density ratio with out-of-plane shear"),
    "rp6": _tube(
        "rp6", (-0.5, 0.5), 0.15,
        left=(1.0 / (4.0 * np.pi), -1.0, 1.0, -1.0, 1.0, 1.0,
              1.0 / _S4PI, -1.0 / _S4PI, 1.0 / _S4PI),
        right=(1.0 / (4.0 * np.pi), -1.0, -1.0, -1.0, 1.0, 1.0,
               1.0 / _S4PI, 1.0 / _S4PI, 1.0 / _S4PI),
        blurb="low-density shear with flipping tangential field"),
    "rp7": _tube(
        "rp7", (-0.5, 0.5), 0.15,
        left=(1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0),
        right=(0.2, 0.0, 0.0, 0.0, 0.1, 0.1, 1.0, 0.0, 0.0),
        blurb="shock tube whose right state has a purely normal field"),
    "orszag_tang": CaseSpec(
        name="orszag_tang", dim=2, extent=(0.0, 1.0, 0.0, 1.0),
        bc="periodic", t_final=0.5, profile=_vortex_state,
        default_cells=200,
        blurb="doubly periodic vortex that steepens into current sheets"),
}


def get_case(name):
    return CASES[name] if isinstance(name, str) else name


def case_grid(case, nx, ny=0, *, ghost=2):
    """Grid covering the case's domain with nx (x ny) interior cells."""
    spec = get_case(case)
    dx = (spec.extent[1] - spec.extent[0]) / nx
    if spec.dim == 1:
        if ny:
            raise DimensionMismatch(f"{spec.name} is one-dimensional")
        return Grid(nx, dx, ghost=ghost, bc=spec.bc)
    ny = ny or nx
    dy = (spec.extent[3] - spec.extent[2]) / ny
    return Grid(nx, dx, ny=ny, dy=dy, ghost=ghost, bc=spec.bc)


def cell_centers(case, grid):
    """Interior cell-center coordinates: x, or (x, y) for a 2D case."""
    spec = get_case(case)
    if (spec.dim == 2) != grid.two_d:
        raise DimensionMismatch(
            f"{spec.name} is {spec.dim}D but the grid is not")
    x0, x1 = spec.extent[:2]
    if not math.isclose(grid.nx * grid.dx, x1 - x0, rel_tol=1e-12):
        raise DimensionMismatch(
            f"grid does not tile [{x0}, {x1}]: nx*dx = {grid.nx * grid.dx}")
    x = x0 + (np.arange(grid.nx) + 0.5) * grid.dx
    if spec.dim == 1:
        return x
    y0, y1 = spec.extent[2:]
    if not math.isclose(grid.ny * grid.dy, y1 - y0, rel_tol=1e-12):
        raise DimensionMismatch(
            f"grid does not tile [{y0}, {y1}]: ny*dy = {grid.ny * grid.dy}")
    return x, y0 + (np.arange(grid.ny) + 0.5) * grid.dy


def init_case(case, grid):
    """Conserved field at t=0 on the grid, ghost layers filled.

    Shock-tube cells take the left state where the cell center satisfies
    x <= x_jump (the interface itself sits between cells; an exactly
    centered cell goes left) and the right state elsewhere.  Smooth
    closures are evaluated pointwise at cell centers.
    """
    spec = get_case(case)
    if spec.dim == 1:
        x = cell_centers(spec, grid)
        if spec.profile is not None:
            w = spec.profile(x)
        else:
            lft = np.asarray(spec.left)[:, None]
            rgt = np.asarray(spec.right)[:, None]
            w = np.where(x <= spec.x_jump, lft, rgt)
    else:
        x, y = cell_centers(spec, grid)
        w = spec.profile(x, y)
    u = np.empty(grid.shape)
    u[grid.interior] = prim_to_cons(w)
    return apply_boundary(u, grid)
