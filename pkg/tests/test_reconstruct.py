"""Reconstruction oracles: sign preservation, accuracy, stencil selection.

The ENO kernel is checked against a pure-Python scalar reference (stencil
selection by divided differences, interpolation via polyfit) and against
polynomial-exactness identities that hold for any stencil choice.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import cgles.eigen as eig
import cgles.reconstruct as rec
import cgles.state as st
from cgles.errors import InsufficientGhostWidth, SingularScaling

from conftest import random_admissible


class TestMinmod:
    def test_examples(self):
        assert rec.minmod(1.0, 2.0) == 1.0
        assert rec.minmod(-1.0, 2.0) == 0.0
        assert rec.minmod(-3.0, -2.0) == -2.0
        assert rec.minmod(0.0, 5.0) == 0.0
        assert rec.minmod(4.0, 4.0) == 4.0

    def test_vectorized(self, rng):
        a = rng.uniform(-1, 1, size=(100,))
        b = rng.uniform(-1, 1, size=(100,))
        got = rec.minmod(a, b)
        for i in range(100):
            assert got[i] == rec.minmod(a[i], b[i])


def eno_scalar_reference(vals, k, home):
    """Independent scalar ENO interpolation (selection + polyfit)."""
    def divided(lo, hi):
        pts = [float(v) for v in vals[lo:hi + 1]]
        for level in range(1, len(pts)):
            pts = [(pts[i + 1] - pts[i]) / level for i in range(len(pts) - 1)]
        return pts[0]

    lo = hi = home
    for _ in range(1, k):
        if abs(divided(lo - 1, hi)) <= abs(divided(lo, hi + 1)):
            lo -= 1
        else:
            hi += 1
    nodes = np.arange(lo, hi + 1, dtype=float)
    coeffs = np.polyfit(nodes, vals[lo:hi + 1], k - 1)
    return np.polyval(coeffs, k - 0.5)


class TestEnoKernel:
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_matches_scalar_reference(self, rng, k):
        for _ in range(60):
            vals = rng.uniform(-2, 2, size=2 * k)
            for home in (k - 1, k):
                got = rec.eno_point_value(vals[None, :, None], k, home)
                ref = eno_scalar_reference(vals, k, home)
                assert got[0, 0] == pytest.approx(ref, rel=1e-10, abs=1e-12)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_polynomial_exactness(self, rng, k):
        # any k-point interpolant reproduces degree < k polynomials exactly
        for _ in range(20):
            coef = rng.uniform(-1, 1, size=k)
            x = np.arange(2 * k, dtype=float)
            vals = np.polyval(coef, x)[None, :, None]
            want = np.polyval(coef, k - 0.5)
            for home in (k - 1, k):
                got = rec.eno_point_value(vals, k, home)
                assert got[0, 0] == pytest.approx(want, rel=1e-12, abs=1e-12)

    def test_tie_breaks_left(self):
        # oscillating data makes every divided-difference comparison a tie;
        # the left-going choice lands on cells {0,1,2} whose interpolant at
        # the interface coordinate 2.5 is -1.25 (right stencils give +0.75
        # or +0.25 instead)
        vals = np.array([0.0, 1.0, 0.0, 1.0, 0.0, 1.0])[None, :, None]
        got = rec.eno_point_value(vals, 3, 2)
        assert got[0, 0] == pytest.approx(-1.25, rel=1e-13)

    def test_batch_layout(self, rng):
        vals = rng.uniform(-1, 1, size=(5, 7, 8, 9))
        got = rec.eno_point_value(vals, 4, 3)
        assert got.shape == (5, 7, 9)
        one = rec.eno_point_value(vals[2, 4][None, :, :], 4, 3)
        assert_allclose(got[2, 4], one[0])


class TestReconstructPair:
    def test_first_order(self):
        vals = np.array([[1.0], [2.0]])[None, :, :]
        m, p = rec.reconstruct_pair(vals, 1)
        assert m[0, 0] == 1.0 and p[0, 0] == 2.0

    def test_minmod_hand_case(self):
        vals = np.array([0.0, 1.0, 3.0, 4.0])[None, :, None]
        m, p = rec.reconstruct_pair(vals, 2)
        assert m[0, 0] == pytest.approx(1.5)
        assert p[0, 0] == pytest.approx(2.5)

    def test_window_check(self):
        with pytest.raises(InsufficientGhostWidth):
            rec.reconstruct_pair(np.zeros((1, 5, 9)), 3)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_constant_window(self, k):
        vals = np.full((3, rec.window_size(k), 9), 0.7)
        m, p = rec.reconstruct_pair(vals, k)
        assert_allclose(m, 0.7, rtol=1e-14)
        assert_allclose(p, 0.7, rtol=1e-14)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_sign_property_random(self, rng, k):
        vals = rng.uniform(-1, 1, size=(10000, 2 * k, 9))
        m, p = rec.reconstruct_pair(vals, k)
        raw = vals[:, k, :] - vals[:, k - 1, :]
        hat = p - m
        assert np.min(raw * hat) >= -1e-13

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_sign_property_structured(self, rng, k):
        # smooth trigonometric profiles with a random step discontinuity
        n = 10000
        x = (np.arange(2 * k) - (k - 0.5))[None, :, None] * 0.05
        phase = rng.uniform(0, 2 * np.pi, size=(n, 1, 9))
        freq = rng.uniform(0.5, 4.0, size=(n, 1, 9))
        vals = np.sin(freq * x + phase)
        step_at = rng.integers(1, 2 * k, size=(n, 1, 9))
        amp = rng.uniform(-2, 2, size=(n, 1, 9))
        vals = vals + amp * (np.arange(2 * k)[None, :, None] >= step_at)
        m, p = rec.reconstruct_pair(vals, k)
        raw = vals[:, k, :] - vals[:, k - 1, :]
        hat = p - m
        assert np.min(raw * hat) >= -1e-13

    def test_minmod_jump_bounded_by_raw(self, rng):
        vals = rng.uniform(-1, 1, size=(5000, 4, 9))
        m, p = rec.reconstruct_pair(vals, 2)
        raw = vals[:, 2, :] - vals[:, 1, :]
        hat = p - m
        assert np.all(np.abs(hat) <= np.abs(raw) + 1e-14)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_smooth_accuracy(self, k):
        def f(x):
            return np.exp(0.8 * x) * np.sin(2 * np.pi * x) \
                + 0.3 * np.cos(6 * np.pi * x)

        x0 = 0.13
        jumps, errs = [], []
        for h in (1 / 40, 1 / 80, 1 / 160):
            nodes = x0 + (np.arange(2 * k) - (k - 0.5)) * h
            vals = f(nodes)[None, :, None]
            m, p = rec.reconstruct_pair(vals, k)
            jumps.append(abs(float(p[0, 0] - m[0, 0])))
            errs.append(abs(float(m[0, 0]) - f(x0)))
        jump_rate = math.log2(jumps[-2] / jumps[-1])
        err_rate = math.log2(errs[-2] / errs[-1])
        assert jump_rate >= k - 0.4
        assert err_rate >= k - 0.4


def window_states(rng, k, spread=0.1):
    """A physically admissible window that stays near one base state."""
    base = random_admissible(rng, 1)[:, 0]
    cells = np.repeat(base[:, None], rec.window_size(k), axis=1)
    wiggle = 1.0 + spread * rng.uniform(-1, 1, size=cells.shape)
    cells = cells * wiggle
    # re-seat p_par inside the admissible band of the perturbed state
    rep = st.admissibility(cells)
    xi = rng.uniform(0.15, 0.85, size=cells.shape[1:])
    cells[st.PPAR] = rep.p_m + xi * (rep.p_M - rep.p_m)
    assert np.all(st.admissibility(cells).ok)
    return cells


class TestScaledEntropyJump:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_uniform_window(self, rng, k):
        base = random_admissible(rng, 1)[:, 0]
        cells = np.repeat(base[:, None], rec.window_size(k), axis=1)
        out = rec.scaled_entropy_jump(cells, st.X, k)
        assert out.order == k
        assert_allclose(out.jump, 0.0, atol=1e-12)

    def test_first_order_is_raw_jump(self, rng):
        cells = random_admissible(rng, 2)
        out = rec.scaled_entropy_jump(cells, st.X, 1)
        v = st.entropy_vars(cells)
        assert_allclose(out.jump, v[:, 1] - v[:, 0], rtol=1e-14)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_transform_round_trip(self, rng, k):
        for _ in range(10):
            cells = window_states(rng, k)
            n = cells.shape[-1]
            dec = eig.entropy_scaled_eigenvectors(
                cells[:, n // 2 - 1], cells[:, n // 2], st.X)
            out = rec.scaled_entropy_jump(cells, st.X, k, decomp=dec)
            # map the returned jump forward again and compare with an
            # in-test reconstruction done in W space
            v = np.moveaxis(st.entropy_vars(cells), (0, 1), (1, 0))
            w = v @ dec.r_tilde
            w_m, w_p = rec.reconstruct_pair(w, k)
            assert_allclose(dec.r_tilde.T @ out.jump, w_p - w_m,
                            rtol=1e-10, atol=1e-12)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_sign_property_in_w(self, rng, k):
        violations = 0
        for _ in range(200):
            cells = window_states(rng, k, spread=0.25 if k == 2 else 0.1)
            n = cells.shape[-1]
            dec = eig.entropy_scaled_eigenvectors(
                cells[:, n // 2 - 1], cells[:, n // 2], st.X)
            out = rec.scaled_entropy_jump(cells, st.X, k, decomp=dec)
            v = np.moveaxis(st.entropy_vars(cells), (0, 1), (1, 0))
            w = v @ dec.r_tilde
            raw = w[n // 2] - w[n // 2 - 1]
            hat = dec.r_tilde.T @ out.jump
            violations += int(np.min(raw * hat) < -1e-12)
        assert violations == 0

    def test_default_decomp_uses_home_cells(self, rng):
        cells = window_states(rng, 3)
        dec = eig.entropy_scaled_eigenvectors(cells[:, 2], cells[:, 3], st.X)
        a = rec.scaled_entropy_jump(cells, st.X, 3)
        b = rec.scaled_entropy_jump(cells, st.X, 3, decomp=dec)
        assert_allclose(a.jump, b.jump, rtol=1e-14)

    def test_singular_scaling(self, rng):
        cells = window_states(rng, 2)
        dec = eig.EigenDecomp(r_tilde=np.zeros((9, 9)),
                              lambda_max=np.asarray(1.0), axis=st.X)
        with pytest.raises(SingularScaling):
            rec.scaled_entropy_jump(cells, st.X, 2, decomp=dec)

    def test_y_axis(self, rng):
        cells = window_states(rng, 2)
        out = rec.scaled_entropy_jump(cells, st.Y, 2)
        assert out.jump.shape == (9,)
        assert np.all(np.isfinite(out.jump))
