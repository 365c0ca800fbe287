"""Shared helpers: admissible random states and finite-difference oracles."""

import numpy as np
import pytest

from cgles import state as st


def random_admissible(rng, n, b_lo=0.3, b_hi=2.5, band=(0.05, 0.95)):
    """Draw primitive states strictly inside the admissible set.

    The parallel pressure is placed at a random interior point of its
    [p_m, p_M] band, so every returned state has real characteristic
    speeds with margin.
    """
    w = np.empty((st.NVAR, n))
    w[st.RHO] = np.exp(rng.uniform(np.log(0.1), np.log(3.0), n))
    w[st.UX] = rng.uniform(-2.0, 2.0, n)
    w[st.UY] = rng.uniform(-2.0, 2.0, n)
    w[st.UZ] = rng.uniform(-2.0, 2.0, n)
    bdir = rng.normal(size=(3, n))
    bdir /= np.linalg.norm(bdir, axis=0)
    bmag = rng.uniform(b_lo, b_hi, n)
    w[st.BX:st.BZ + 1] = bdir * bmag
    w[st.PPERP] = np.exp(rng.uniform(np.log(0.05), np.log(3.0), n))
    b2 = bmag ** 2
    p_m = w[st.PPERP] ** 2 / (6.0 * w[st.PPERP] + 3.0 * b2)
    p_M = b2 + w[st.PPERP]
    xi = rng.uniform(band[0], band[1], n)
    w[st.PPAR] = p_m + xi * (p_M - p_m)
    return w


def fd_jacobian(f, x, h=1e-6):
    """Central-difference Jacobian of a vector function at a point."""
    x = np.asarray(x, dtype=float)
    f0 = np.atleast_1d(np.asarray(f(x), dtype=float))
    jac = np.empty((f0.size, x.size))
    for j in range(x.size):
        step = h * max(1.0, abs(x[j]))
        d = np.zeros_like(x)
        d[j] = step
        fp = np.atleast_1d(np.asarray(f(x + d), dtype=float))
        fm = np.atleast_1d(np.asarray(f(x - d), dtype=float))
        jac[:, j] = (fp - fm) / (2.0 * step)
    return jac


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
