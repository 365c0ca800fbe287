"""Interface reconstruction in scaled entropy variables.

The entropy-stable diffusion needs the jump of reconstructed states at each
interface, taken in the variables W = R̃ᵀV (R̃ the scaled eigenvector frame
of that interface).  Reconstructing componentwise in W with MinMod (second
order) or ENO point-value interpolation (third/fourth) preserves the sign
of the raw jump componentwise, which is what makes the diffusion term
dissipative at any order.

Window convention: an interface sees ``2k`` cells (two for k=1), indexed
``0 .. 2k-1`` along the second-to-last axis, with the interface between
cells ``k-1`` and ``k``.  In cell-index coordinates the cell centers sit at
integers and the interface at ``k - 1/2``.
"""

from dataclasses import dataclass

import numpy as np

from . import state as st
from .eigen import entropy_scaled_eigenvectors
from .errors import InsufficientGhostWidth, SingularScaling

#: condition-number ceiling for inverting the scaled frame
COND_LIMIT = 1e12


@dataclass
class ScaledJump:
    """Entropy-variable jump of reconstructed interface states."""
    jump: np.ndarray  # (..., 9)
    order: int


def minmod(a, b):
    """Smaller-magnitude argument when signs agree, else zero."""
    a = np.asarray(a)
    b = np.asarray(b)
    return np.where(a * b <= 0.0, 0.0, np.where(np.abs(a) < np.abs(b), a, b))


def window_size(k):
    return 2 if k == 1 else 2 * k


def _check_window(values, k):
    need = window_size(k)
    if values.shape[-2] != need:
        raise InsufficientGhostWidth(
            f"order {k} reconstruction needs a window of {need} cells, "
            f"got {values.shape[-2]}")


def eno_point_value(values, k, home):
    """ENO interpolant of unit-spaced point samples, evaluated at k - 1/2.

    ``values`` has the window on axis -2 and components on axis -1; each
    component selects its own stencil.  Starting from the single cell
    ``home``, the stencil grows left or right toward the smaller-magnitude
    divided difference (ties toward the left).
    """
    lead = values.shape[:-2] + values.shape[-1:]
    lo = np.full(lead, home, dtype=np.intp)
    table = values
    for m in range(1, k):
        table = np.diff(table, axis=-2) / m
        left = np.take_along_axis(table, (lo - 1)[..., None, :], axis=-2)
        right = np.take_along_axis(table, lo[..., None, :], axis=-2)
        go_left = np.abs(left[..., 0, :]) <= np.abs(right[..., 0, :])
        lo = lo - go_left
    offsets = np.arange(k).reshape((k, 1))
    samples = np.take_along_axis(values, lo[..., None, :] + offsets, axis=-2)
    s = (k - 0.5) - lo
    shifted = s[..., None, :] - offsets  # (..., k, ncomp), never zero
    numer = np.prod(shifted, axis=-2)
    j = np.arange(k)
    fact = np.array([np.prod(i - np.delete(j, i)) for i in range(k)],
                    dtype=float).reshape((k, 1))
    weights = numer[..., None, :] / (shifted * fact)
    return np.sum(weights * samples, axis=-2)


def reconstruct_pair(values, k):
    """Left/right reconstructed point values at the central interface."""
    _check_window(values, k)
    if k == 1:
        return values[..., 0, :], values[..., 1, :]
    if k == 2:
        d = np.diff(values, axis=-2)
        s_left = minmod(d[..., 0, :], d[..., 1, :])
        s_right = minmod(d[..., 1, :], d[..., 2, :])
        return (values[..., 1, :] + 0.5 * s_left,
                values[..., 2, :] - 0.5 * s_right)
    return (eno_point_value(values, k, k - 1),
            eno_point_value(values, k, k))


def scaled_entropy_jump(cells, axis, k, decomp=None):
    """Jump of the reconstructed entropy variables at one interface.

    ``cells`` holds the primitive window as ``(9, ..., 2k)`` (components
    leading, window trailing).  For k >= 2 the window is transformed to
    W = R̃ᵀV cell by cell, reconstructed componentwise, and the jump is
    mapped back through (R̃ᵀ)⁻¹.
    """
    _check_window(np.moveaxis(cells, 0, -1), k)
    n = cells.shape[-1]
    v = np.moveaxis(st.entropy_vars(cells), (0, -1), (-1, -2))  # (...,2k,9)
    if k == 1:
        return ScaledJump(jump=v[..., 1, :] - v[..., 0, :], order=k)
    if decomp is None:
        decomp = entropy_scaled_eigenvectors(
            cells[..., n // 2 - 1], cells[..., n // 2], axis)
    r_t = np.swapaxes(decomp.r_tilde, -1, -2)
    cond = np.linalg.cond(r_t)
    if np.any(cond > COND_LIMIT):
        worst = float(np.max(cond))
        raise SingularScaling(
            f"scaled eigenvector frame is numerically singular "
            f"(condition number {worst:.3e})")
    w = v @ decomp.r_tilde
    w_minus, w_plus = reconstruct_pair(w, k)
    jump_w = w_plus - w_minus
    jump_v = np.linalg.solve(r_t, jump_w[..., None])[..., 0]
    return ScaledJump(jump=jump_v, order=k)
