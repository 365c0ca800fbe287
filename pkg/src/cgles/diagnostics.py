"""Error norms, convergence orders, and the per-step entropy budget.

The budget audits one completed time step: the change of total entropy,
plus the net numerical entropy flux through the boundary interfaces,
minus the relaxation term when the source is active.  On periodic
domains the flux term telescopes away and the audit reduces to the bare
entropy change.  Entropy-stable configurations must keep the audit
nonpositive up to time-integration error; the run driver records one row
per step.

Two flux readings are supported: the primary residual uses interface
fluxes evaluated at the step's starting state (a forward-Euler-consistent
audit), and an optional second residual uses the stage-weighted fluxes of
the actual multi-stage update.
"""

from dataclasses import dataclass

import numpy as np

from . import state as st
from .errors import NonPositiveError, ShapeMismatch
from .scheme import source_term
from .state import PPAR


def total_entropy(u, grid):
    """Plain sum of the entropy density over interior cells."""
    w = st.cons_to_prim(u[grid.interior])
    return float(np.sum(st.entropy_density(w)))


def source_entropy_sum(u, tau):
    """Sum of V·S over the cells of ``u`` (nonpositive).

    ``u`` holds conserved interior cells; the relaxation source only
    feeds the parallel-pressure slot, so the contraction is a single
    product per cell.
    """
    w = st.cons_to_prim(u)
    v = st.entropy_vars(w)
    s = source_term(w, tau)
    return float(np.sum(v[PPAR] * s[PPAR]))


def boundary_flux_rate(diag, grid):
    """Net entropy outflow rate: sum over cells of the Q̂ differences.

    Every interior difference cancels in the cell sum, leaving the two
    ends of each grid line scaled by the line's spacing.
    """
    total = (np.sum(diag.q_x[-1]) - np.sum(diag.q_x[0])) / grid.dx
    if diag.q_y is not None:
        total += (np.sum(diag.q_y[:, -1]) - np.sum(diag.q_y[:, 0])) / grid.dy
    return float(total)


@dataclass
class EntropyBudget:
    """Audit of one time step; ``residual`` must stay ≤ 0 up to tolerance."""
    step: int
    t: float
    dt: float
    total_entropy: float            # after the step
    residual: float                 # ΔE + Δt·(flux rate) − Δt·(source rate)
    stage_residual: float = None    # same with stage-weighted fluxes
    flux_rate: float = 0.0
    source_rate: float = 0.0
    production: float = None        # optional: interface production rate


def entropy_budget(u_old, u_new, diag, grid, dt, *, step=0, t=0.0,
                   source_rate=0.0, stage_flux_rate=None,
                   with_production=False):
    """Entropy audit of the step ``u_old -> u_new`` taken with ``dt``.

    ``diag`` carries the interface entropy fluxes evaluated at ``u_old``;
    ``source_rate`` is the stage-weighted sum of V·S when the relaxation
    source is active (zero otherwise); ``stage_flux_rate`` optionally
    supplies the stage-weighted boundary flux rate for the second audit.
    """
    e_new = total_entropy(u_new, grid)
    delta = e_new - total_entropy(u_old, grid)
    flux = boundary_flux_rate(diag, grid)
    stage = None
    if stage_flux_rate is not None:
        stage = delta + dt * stage_flux_rate - dt * source_rate
    return EntropyBudget(
        step=step, t=t, dt=dt,
        total_entropy=e_new,
        residual=delta + dt * flux - dt * source_rate,
        stage_residual=stage,
        flux_rate=flux,
        source_rate=source_rate,
        production=diag.total_production(grid) if with_production else None)


def l1_error(numeric, exact, measure):
    """Cell-sum L1 distance: sum |numeric - exact| * measure."""
    numeric = np.asarray(numeric)
    exact = np.asarray(exact)
    if numeric.shape != exact.shape:
        raise ShapeMismatch(
            f"field shapes differ: {numeric.shape} vs {exact.shape}")
    return float(np.sum(np.abs(numeric - exact)) * measure)


def convergence_order(errors, ns):
    """Observed orders between consecutive refinements.

    Returns ``len(errors) - 1`` slopes ``log(e_i/e_{i+1}) / log(n_{i+1}/n_i)``
    (plain ``log2`` of the error ratio for doubling sequences).
    """
    errors = [float(e) for e in errors]
    ns = [float(n) for n in ns]
    if len(errors) != len(ns):
        raise ShapeMismatch("need one resolution per error value")
    if len(errors) < 2:
        raise ShapeMismatch("need at least two refinement levels")
    if any(e <= 0.0 for e in errors):
        raise NonPositiveError("errors must be strictly positive")
    if any(n <= 0.0 for n in ns):
        raise NonPositiveError("resolutions must be strictly positive")
    return [np.log(errors[i] / errors[i + 1]) / np.log(ns[i + 1] / ns[i])
            for i in range(len(errors) - 1)]


def emit_convergence_table(errors, ns, label="L1 error"):
    """Plain-text (N, error, order) table; the first row has no order."""
    lines = [f"{'N':>8s} {label:>14s} {'order':>8s}"]
    orders = convergence_order(errors, ns) if len(errors) >= 2 else []
    for i, (n, e) in enumerate(zip(ns, errors)):
        order = f"{orders[i - 1]:8.3f}" if i else f"{'--':>8s}"
        lines.append(f"{int(n):>8d} {e:>14.5e} {order}")
    return "\n".join(lines)
