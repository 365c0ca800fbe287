"""Time integration: explicit SSP Runge-Kutta and implicit-explicit steps.

The explicit steppers are the strong-stability-preserving RK2/RK3 schemes
(convex-combination form) and the five-stage fourth-order SSP scheme with
its standard printed coefficients.  The IMEX stepper treats transport
explicitly and the stiff pressure-relaxation source implicitly; because
the source moves only the parallel pressure while total energy, mass,
momentum and field stay fixed, each implicit stage reduces to a scalar
*linear* equation per cell and is solved in closed form.  A Newton solver
with backtracking is kept behind a flag as an independent verification
path, and additive tableaus can be loaded from a small text format to
swap in other IMEX integrators.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ImplicitSolveFailure,
    InadmissibleState,
    NonPositiveResult,
)
from .scheme import compute_dt  # noqa: F401  (re-export: step-size control)
from .state import BX, BY, BZ, ENE, MX, MY, MZ, PPAR, RHO


@dataclass
class ButcherSSP:
    """Convex-combination coefficients of the SSP-RK2/RK3 schemes.

    ``gamma[order][k][l]`` weights previous stage states, ``delta`` the
    corresponding stage RHS evaluations; every gamma row sums to one.
    """
    gamma: dict = field(default_factory=lambda: {
        2: [[1.0], [0.5, 0.5]],
        3: [[1.0], [0.75, 0.25], [1.0 / 3.0, 0.0, 2.0 / 3.0]],
    })
    delta: dict = field(default_factory=lambda: {
        2: [[1.0], [0.0, 0.5]],
        3: [[1.0], [0.0, 0.25], [0.0, 0.0, 2.0 / 3.0]],
    })

    def __post_init__(self):
        for order, rows in self.gamma.items():
            for row in rows:
                if any(g < 0.0 for g in row) or abs(sum(row) - 1.0) > 1e-14:
                    raise ValueError(
                        f"SSP-RK{order} row {row} is not a convex combination")


SSP = ButcherSSP()

# five-stage fourth-order SSP scheme: state weights / RHS weights per stage
RK4_STATE = (
    (1.0,),
    (0.44437049406734, 0.55562950593266),
    (0.62010185138540, 0.37989814861460),
    (0.17807995410773, 0.82192004589227),
)
RK4_FLUX = (0.39175222700392, 0.36841059262959,
            0.25189177424738, 0.54497475021237)
RK4_FINAL_STATE = (0.00683325884039, 0.51723167208978,
                   0.12759831133288, 0.34833675773694)
RK4_FINAL_FLUX = (0.08460416338212, 0.22600748319395)


@dataclass
class SourceState:
    """Relaxation-source parameters for the IMEX stepper."""
    tau: float = 1e-5
    beta_ark: float = 1.0 - 1.0 / np.sqrt(2.0)

    def __post_init__(self):
        if self.tau <= 0.0:
            raise ValueError("relaxation time tau must be positive")


def _eval(rhs, u, stage):
    """Call the RHS evaluator, tagging admissibility failures by stage."""
    try:
        return rhs(u)
    except InadmissibleState as err:
        raise InadmissibleState(f"stage {stage}: {err}",
                                indices=err.indices) from err


def ssprk_step(u, rhs, dt, order):
    """One explicit SSP-RK step of the given order (2, 3 or 4).

    ``rhs`` maps a conserved field to its full explicit time derivative.
    """
    if order == 4:
        return _ssprk4_step(u, rhs, dt)
    if order not in SSP.gamma:
        raise ValueError(f"no SSP-RK tableau of order {order}")
    states, fluxes = [u], []
    rows = zip(SSP.gamma[order], SSP.delta[order])
    for k, (g_row, d_row) in enumerate(rows, start=1):
        fluxes.append(_eval(rhs, states[-1], k))
        new = 0.0
        for g, d, prev, f in zip(g_row, d_row, states, fluxes):
            if g != 0.0:
                new = new + g * prev
            if d != 0.0:
                new = new + d * dt * f
        states.append(new)
    return states[-1]


def _ssprk4_step(u0, rhs, dt):
    f0 = _eval(rhs, u0, 1)
    u1 = u0 + RK4_FLUX[0] * dt * f0
    f1 = _eval(rhs, u1, 2)
    u2 = RK4_STATE[1][0] * u0 + RK4_STATE[1][1] * u1 + RK4_FLUX[1] * dt * f1
    f2 = _eval(rhs, u2, 3)
    u3 = RK4_STATE[2][0] * u0 + RK4_STATE[2][1] * u2 + RK4_FLUX[2] * dt * f2
    f3 = _eval(rhs, u3, 4)
    u4 = RK4_STATE[3][0] * u0 + RK4_STATE[3][1] * u3 + RK4_FLUX[3] * dt * f3
    f4 = _eval(rhs, u4, 5)
    return (RK4_FINAL_STATE[0] * u0 + RK4_FINAL_STATE[1] * u2
            + RK4_FINAL_STATE[2] * u3 + RK4_FINAL_STATE[3] * u4
            + RK4_FINAL_FLUX[0] * dt * f3 + RK4_FINAL_FLUX[1] * dt * f4)


# --- implicit relaxation stage ----------------------------------------------

def _total_pressure_sum(u):
    """p_par + 2 p_perp from conserved variables (unchanged by the source)."""
    m2 = u[MX] ** 2 + u[MY] ** 2 + u[MZ] ** 2
    b2 = u[BX] ** 2 + u[BY] ** 2 + u[BZ] ** 2
    return 2.0 * u[ENE] - m2 / u[RHO] - b2


def source_cons(u, tau):
    """Relaxation source evaluated on a conserved field."""
    s = np.zeros_like(u)
    p_perp = 0.5 * (_total_pressure_sum(u) - u[PPAR])
    s[PPAR] = (p_perp - u[PPAR]) / tau
    return s


def _newton_relax(p0, e_sum, dt_beta, tau, tol, max_iter):
    """Solve p - p0 - dt_beta*(e_sum - 3p)/(2 tau) = 0 cellwise by Newton
    with a backtracking line search on the residual magnitude."""
    p = np.array(p0, dtype=float, copy=True)
    slope = 1.0 + 1.5 * dt_beta / tau

    def residual(q):
        return q - p0 - dt_beta * (e_sum - 3.0 * q) / (2.0 * tau)

    scale = np.maximum(1.0, np.abs(p0))
    for _ in range(max_iter):
        g = residual(p)
        if np.all(np.abs(g) <= tol * scale):
            return p
        step = -g / slope
        shrink = np.ones_like(p)
        for _ in range(30):
            trial = residual(p + shrink * step)
            worse = np.abs(trial) > np.abs(g)
            if not np.any(worse):
                break
            shrink = np.where(worse, 0.5 * shrink, shrink)
        p = p + shrink * step
    raise ImplicitSolveFailure(
        f"relaxation Newton solve did not converge in {max_iter} iterations")


def implicit_source_solve(u, dt_beta, tau, method="closed",
                          tol=1e-12, max_iter=50):
    """Solve the implicit relaxation stage U = u + dt_beta * S(U).

    Only the parallel pressure changes.  With E = p_par + 2 p_perp fixed
    by the stage, the equation is linear and the default path solves it
    in closed form; ``method="newton"`` runs the iterative path instead.
    """
    if dt_beta == 0.0:
        return u.copy()
    e_sum = _total_pressure_sum(u)
    if method == "closed":
        p_new = ((u[PPAR] + dt_beta * e_sum / (2.0 * tau))
                 / (1.0 + 1.5 * dt_beta / tau))
    elif method == "newton":
        p_new = _newton_relax(u[PPAR], e_sum, dt_beta, tau, tol, max_iter)
    else:
        raise ValueError(f"unknown implicit solve method {method!r}")
    if np.any(p_new <= 0.0):
        bad = int(np.count_nonzero(p_new <= 0.0))
        raise NonPositiveResult(
            f"implicit relaxation produced non-positive parallel pressure "
            f"in {bad} cell(s); the input state is inadmissible")
    out = u.copy()
    out[PPAR] = p_new
    return out


def ark_imex2_step(u, flux_rhs, dt, src, method="closed"):
    """One step of the two-stage, second-order, L-stable IMEX scheme.

    ``flux_rhs`` is the explicit transport RHS (no source); the relaxation
    source enters through two implicit stages with weight ``src.beta_ark``
    and an averaged final combination.
    """
    beta = src.beta_ark
    u1 = implicit_source_solve(u, dt * beta, src.tau, method=method)
    s1 = source_cons(u1, src.tau)
    f1 = _eval(flux_rhs, u1, 1)
    base = u + dt * (f1 + (1.0 - 2.0 * beta) * s1)
    u2 = implicit_source_solve(base, dt * beta, src.tau, method=method)
    s2 = source_cons(u2, src.tau)
    f2 = _eval(flux_rhs, u2, 2)
    return u + dt * (0.5 * (f1 + f2) + 0.5 * (s1 + s2))


# --- additive tableau extension hook -----------------------------------------

@dataclass
class ArkTableau:
    """Additive Runge-Kutta tableau: explicit/implicit A and shared weights."""
    a_explicit: np.ndarray
    a_implicit: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        s = len(self.b)
        for name, a in (("explicit", self.a_explicit),
                        ("implicit", self.a_implicit)):
            if a.shape != (s, s):
                raise ValueError(f"{name} matrix must be {s}x{s}")
        if np.any(np.triu(self.a_explicit) != 0.0):
            raise ValueError("explicit matrix must be strictly lower"
                             " triangular")
        if np.any(np.triu(self.a_implicit, 1) != 0.0):
            raise ValueError("implicit matrix must be lower triangular")
        if abs(float(np.sum(self.b)) - 1.0) > 1e-12:
            raise ValueError("stage weights must sum to 1")


ARK2_TABLEAU = ArkTableau(
    a_explicit=np.array([[0.0, 0.0], [1.0, 0.0]]),
    a_implicit=np.array([[1.0 - 1.0 / np.sqrt(2.0), 0.0],
                         [np.sqrt(2.0) - 1.0, 1.0 - 1.0 / np.sqrt(2.0)]]),
    b=np.array([0.5, 0.5]),
)


def load_ark_tableau(path):
    """Read an additive tableau from a plain-text file.

    Layout: a ``stages N`` line, then sections ``explicit``, ``implicit``
    and ``weights``, each followed by rows of whitespace-separated numbers
    (N rows of N entries for the matrices, one row of N weights).  Blank
    lines and ``#`` comments are ignored.
    """
    rows, section, data = [], None, {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            rows.append(line)
    it = iter(rows)
    first = next(it, "")
    head = first.split()
    if len(head) != 2 or head[0] != "stages":
        raise ValueError("tableau file must start with 'stages N'")
    s = int(head[1])
    for line in it:
        if line in ("explicit", "implicit", "weights"):
            section = line
            data[section] = []
            continue
        if section is None:
            raise ValueError(f"numbers before any section header: {line!r}")
        data[section].append([float(tok) for tok in line.split()])
    missing = {"explicit", "implicit", "weights"} - set(data)
    if missing:
        raise ValueError(f"tableau file missing sections: {sorted(missing)}")
    if len(data["weights"]) != 1:
        raise ValueError("weights section must hold exactly one row")
    b = np.array(data["weights"][0], dtype=float)
    if len(b) != s:
        raise ValueError(f"expected {s} stage weights, got {len(b)}")
    return ArkTableau(a_explicit=np.array(data["explicit"], dtype=float),
                      a_implicit=np.array(data["implicit"], dtype=float),
                      b=b)


def ark_imex_step(u, flux_rhs, dt, src, tableau, method="closed"):
    """Generic additive IMEX step for a loaded tableau.

    Transport uses the explicit part, the relaxation source the implicit
    part; each nonzero implicit diagonal entry triggers a cellwise solve.
    """
    s = len(tableau.b)
    fluxes, sources = [], []
    for i in range(s):
        base = u
        for j in range(i):
            ae = tableau.a_explicit[i, j]
            ai = tableau.a_implicit[i, j]
            if ae != 0.0:
                base = base + dt * ae * fluxes[j]
            if ai != 0.0:
                base = base + dt * ai * sources[j]
        diag = tableau.a_implicit[i, i]
        stage = (implicit_source_solve(base, dt * diag, src.tau,
                                       method=method)
                 if diag != 0.0 else base)
        sources.append(source_cons(stage, src.tau))
        fluxes.append(_eval(flux_rhs, stage, i + 1))
    out = u
    for weight, f, sv in zip(tableau.b, fluxes, sources):
        out = out + dt * weight * (f + sv)
    return out


# --- effective quadrature weights of one step --------------------------------

#: rhs evaluations per step, by explicit order
RHS_CALLS = {2: 2, 3: 3, 4: 5}

#: both stages of the additive two-stage step enter the update evenly, for
#: the transport part and the source part alike (the final combination row)
ARK2_CALL_WEIGHTS = (0.5, 0.5)


def rhs_call_weights(order):
    """Effective per-call weights of one explicit SSP step.

    A completed step can be read as u + dt * sum_k b_k * rhs(U_k), one
    weight per rhs call in call order (a stage reused in the final
    combination folds into its call's weight).  The weights are extracted
    by driving the actual stepper with impulse right-hand sides, so they
    stay true to the implementation by construction.
    """
    m = RHS_CALLS[order]
    calls = iter(range(m))

    def impulse(_):
        e = np.zeros(m)
        e[next(calls)] = 1.0
        return e

    return ssprk_step(np.zeros(m), impulse, 1.0, order)


def rhs_call_times(order):
    """Stage fraction of dt at which each rhs call of one step is made."""
    seen = []

    def probe(u):
        seen.append(float(u))
        return 1.0

    ssprk_step(0.0, probe, 1.0, order)
    return seen
