"""Fundamental solution, boundary kernel blocks, and Kress splittings."""

import numpy as np
import pytest

from flexscat import make_shape
from flexscat.kernels import (RHO0, farfield_kernel_row, green_biharm,
                              green_diag_limit, phi_helmholtz, phi_modified,
                              sdir_block, sdir_selfsplit, _split_arrays)
from flexscat.specfun import bessel_k, hankel1

KAPPA = 2.0 * np.pi


def neville(xs, ys):
    """Polynomial extrapolation of (xs, ys) samples to x = 0."""
    p = list(ys)
    n = len(p)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = p[i + 1] + (p[i + 1] - p[i]) * xs[i + k] / (xs[i] - xs[i + k])
    return p[0]


class TestPhiHelmholtz:
    def test_matches_hankel_composition(self):
        assert phi_helmholtz(1.0, 1.0) == 0.25j * hankel1(0, 1.0)

    def test_small_argument_imaginary_part(self):
        assert np.imag(phi_helmholtz(1.0, 1e-4)) == pytest.approx(0.25, rel=1e-6)

    def test_radial_helmholtz_equation(self):
        # u'' + u'/r + kappa^2 u = 0, central differences at r = 1
        r, h = 1.0, 1e-4
        u = lambda rr: phi_helmholtz(KAPPA, rr)
        d2 = (u(r + h) - 2 * u(r) + u(r - h)) / h**2
        d1 = (u(r + h) - u(r - h)) / (2 * h)
        assert abs(d2 + d1 / r + KAPPA**2 * u(r)) < 1e-4

    def test_domain_error(self):
        with pytest.raises(ValueError):
            phi_helmholtz(1.0, 0.0)


class TestPhiModified:
    def test_positivity(self):
        for r in (0.1, 1.0, 5.0):
            assert phi_modified(KAPPA, r) > 0

    def test_value(self):
        assert phi_modified(1.0, 1.0) == pytest.approx(
            bessel_k(0, 1.0) / (2 * np.pi), rel=1e-12)

    def test_exponential_decay(self):
        assert phi_modified(1.0, 20.0) < 1e-9


class TestGreenBiharm:
    def test_diagonal_limit(self):
        val = green_biharm(KAPPA, np.array([1e-7, 0.0]), np.zeros(2))
        assert abs(val - green_diag_limit(KAPPA)) < 1e-8

    def test_symmetry(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            x, y = rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 2)
            assert green_biharm(KAPPA, x, y) == green_biharm(KAPPA, y, x)

    def test_coincidence_error(self):
        with pytest.raises(ValueError, match="coincident"):
            green_biharm(KAPPA, np.zeros(2), np.zeros(2))

    def test_far_field_asymptotics(self):
        xhat = np.array([np.cos(0.3), np.sin(0.3)])
        x, y = 500.0 * xhat, np.array([0.2, -0.1])
        pref = np.exp(1j * np.pi / 4) / np.sqrt(8 * np.pi * KAPPA)
        asym = (pref * np.exp(1j * KAPPA * 500.0) / np.sqrt(500.0)
                * (-1.0 / (2 * KAPPA**2)) * np.exp(-1j * KAPPA * (xhat @ y)))
        assert abs(green_biharm(KAPPA, x, y) / asym - 1.0) < 1e-2

    def test_biharmonic_stencil(self):
        # 13-point Delta^2 stencil residual at r = 2, mesh 1e-3
        h = 1e-3
        x0, y0 = np.array([2.0, 0.0]), np.zeros(2)
        offs = np.arange(-2, 3)
        g = np.array([[green_biharm(KAPPA, x0 + np.array([i * h, j * h]), y0)
                       for j in offs] for i in offs])
        lap = np.zeros((3, 3), complex)
        for i in range(1, 4):
            for j in range(1, 4):
                lap[i - 1, j - 1] = (g[i + 1, j] + g[i - 1, j] + g[i, j + 1]
                                     + g[i, j - 1] - 4 * g[i, j]) / h**2
        bih = (lap[2, 1] + lap[0, 1] + lap[1, 2] + lap[1, 0] - 4 * lap[1, 1]) / h**2
        assert abs(bih - KAPPA**4 * g[2, 2]) < 1e-2


class TestSdirBlock:
    def test_first_entry_is_green(self):
        c = make_shape("ellipse")
        block = sdir_block(KAPPA, c, 0.5, c, 2.0)
        assert block[0, 0] == pytest.approx(
            complex(green_biharm(KAPPA, c.point(0.5), c.point(2.0))), rel=1e-14)

    def test_mixed_derivative_symmetry(self):
        # upper-right of block(x, y) equals lower-left of block(y, x)
        c = make_shape("kite")
        rng = np.random.default_rng(7)
        for _ in range(50):
            t, s = rng.uniform(0, 2 * np.pi, 2)
            if abs(t - s) < 1e-3:
                continue
            b1 = sdir_block(KAPPA, c, t, c, s)
            b2 = sdir_block(KAPPA, c, s, c, t)
            assert abs(b1[0, 1] - b2[1, 0]) < 1e-10

    def test_hypersingular_entry_symmetric(self):
        c = make_shape("ellipse")
        rng = np.random.default_rng(8)
        for _ in range(20):
            t, s = rng.uniform(0, 2 * np.pi, 2)
            if abs(t - s) < 1e-3:
                continue
            b1 = sdir_block(KAPPA, c, t, c, s)
            b2 = sdir_block(KAPPA, c, s, c, t)
            assert abs(b1[1, 1] - b2[1, 1]) < 1e-10

    def test_bounded_entries_near_diagonal_except_22(self):
        c = make_shape("ellipse")
        t0 = 0.7
        dts = np.logspace(-4, -2, 12)
        blocks = np.array([sdir_block(KAPPA, c, t0, c, t0 + dt) for dt in dts])
        for (i, j) in ((0, 0), (0, 1), (1, 0)):
            assert np.max(np.abs(blocks[:, i, j])) < 1.0  # stays bounded
        slope = np.polyfit(np.log(dts), blocks[:, 1, 1].real, 1)[0]
        assert slope == pytest.approx(1.0 / (4 * np.pi), rel=5e-2)

    def test_coincidence_error(self):
        c = make_shape("circle")
        with pytest.raises(ValueError, match="coincident"):
            sdir_block(KAPPA, c, 1.0, c, 1.0)

    def test_cross_curve_block(self):
        # distinct curves never collide, even at equal parameters
        a = make_shape("circle", radius=0.4)
        b = make_shape("kite", center=(3.0, 4.0))
        block = sdir_block(KAPPA, a, 1.0, b, 1.0)
        assert np.all(np.isfinite(block))
        assert block[0, 0] == pytest.approx(
            complex(green_biharm(KAPPA, a.point(1.0), b.point(1.0))), rel=1e-14)


class TestSelfSplit:
    @pytest.mark.parametrize("kind", ["circle", "ellipse", "kite"])
    @pytest.mark.parametrize("kappa", [1.0, KAPPA])
    def test_reconstruction(self, kind, kappa):
        curve = (make_shape("circle", radius=1.0) if kind == "circle"
                 else make_shape(kind))
        t0 = 1.1
        for dt in (1e-3, 1e-2, 0.5, 1.5, np.pi):
            split = sdir_selfsplit(kappa, curve, t0, t0 - dt)
            recon = split.k1 * np.log(4 * np.sin(dt / 2) ** 2) + split.k2
            block = sdir_block(kappa, curve, t0, curve, t0 - dt)
            assert np.max(np.abs(recon - block)) < 1e-11

    def test_unit_circle_reconstruction_at_half(self):
        curve = make_shape("circle", radius=1.0)
        t, s = 1.3, 0.8
        split = sdir_selfsplit(KAPPA, curve, t, s)
        recon = split.k1 * np.log(4 * np.sin((t - s) / 2) ** 2) + split.k2
        block = sdir_block(KAPPA, curve, t, curve, s)
        assert np.max(np.abs(recon - block)) < 1e-11

    def test_k1_diagonal_structure(self):
        for kind in ("circle", "ellipse", "kite"):
            split = sdir_selfsplit(KAPPA, make_shape(kind), 0.9, 0.9)
            assert split.k1[0, 0] == 0.0
            assert split.k1[0, 1] == 0.0
            assert split.k1[1, 0] == 0.0
            assert split.k1[1, 1] == pytest.approx(1.0 / (8 * np.pi), rel=1e-14)

    def test_k2_diagonal_trace_entry(self):
        # regression: the (1,1) diagonal is -i/(8 kappa^2) on any curve
        for kind in ("circle", "ellipse", "kite", "rounded_square"):
            split = sdir_selfsplit(KAPPA, make_shape(kind), 2.2, 2.2)
            assert split.k2[0, 0] == pytest.approx(-0.125j / KAPPA**2, abs=1e-15)
            assert split.k2[0, 1] == 0.0
            assert split.k2[1, 0] == 0.0

    def test_k2_diagonal_hypersingular_entry(self):
        # regression for the derived constant rho0
        curve = make_shape("kite")
        t0 = 1.234
        split = sdir_selfsplit(KAPPA, curve, t0, t0)
        expected = -0.5 * RHO0 + np.log(KAPPA * curve.speed(t0)) / (4 * np.pi)
        assert split.k2[1, 1] == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("kappa", [1.0, KAPPA])
    @pytest.mark.parametrize("kind", ["ellipse", "kite"])
    def test_diagonal_matches_richardson(self, kind, kappa):
        curve = make_shape(kind)
        t0 = 1.234
        diag = sdir_selfsplit(kappa, curve, t0, t0)
        eps = 0.2 / 2.0 ** np.arange(9)
        samples = [sdir_selfsplit(kappa, curve, t0, t0 + e) for e in eps]
        for bi in range(2):
            for bj in range(2):
                extrap = neville(list(eps), [s.k2[bi, bj] for s in samples])
                assert abs(extrap - diag.k2[bi, bj]) < 1e-8
                extrap1 = neville(list(eps), [s.k1[bi, bj] for s in samples])
                assert abs(extrap1 - diag.k1[bi, bj]) < 1e-8

    def test_biperiodicity(self):
        curve = make_shape("ellipse")
        a = sdir_selfsplit(KAPPA, curve, 0.4, 2.9)
        b = sdir_selfsplit(KAPPA, curve, 0.4 + 2 * np.pi, 2.9)
        scale = max(1.0, np.max(np.abs(a.k1)), np.max(np.abs(a.k2)))
        assert np.max(np.abs(a.k1 - b.k1)) < 1e-13 * scale
        assert np.max(np.abs(a.k2 - b.k2)) < 1e-13 * scale

    def test_near_diagonal_branch_reconstruction(self):
        # below the series cutoff the splitting must still sum to the kernel;
        # the direct block itself carries ~1e-9 cancellation error down here
        curve = make_shape("kite")
        t0 = 0.456
        for dt in (0.99e-4, 5e-5, 2e-5):
            split = sdir_selfsplit(KAPPA, curve, t0, t0 + dt)
            recon = split.k1 * np.log(4 * np.sin(dt / 2) ** 2) + split.k2
            block = sdir_block(KAPPA, curve, t0, curve, t0 + dt)
            assert np.max(np.abs(recon - block)) < 1e-7


class TestFarfieldKernelRow:
    def test_unit_modulus_first_entry(self):
        c = make_shape("kite")
        for s in np.linspace(0, 2 * np.pi, 9):
            row = farfield_kernel_row(KAPPA, np.array([0.6, 0.8]), c, s)
            assert abs(abs(row[0]) - 1.0) < 1e-14

    def test_second_entry_vanishes_for_tangential_direction(self):
        c = make_shape("circle", radius=0.4)
        # at s = 0 the normal is (1, 0); xhat = (0, 1) is orthogonal to it
        row = farfield_kernel_row(KAPPA, np.array([0.0, 1.0]), c, 0.0)
        assert abs(row[1]) < 1e-14

    def test_circle_closed_form(self):
        c = make_shape("circle", radius=0.4)
        row = farfield_kernel_row(KAPPA, np.array([1.0, 0.0]), c, 0.0)
        expected0 = np.exp(-1j * KAPPA * 0.4)
        assert row[0] == pytest.approx(expected0, rel=1e-14)
        assert row[1] == pytest.approx(-1j * KAPPA * expected0, rel=1e-14)

    def test_rejects_non_unit_direction(self):
        with pytest.raises(ValueError, match="unit vector"):
            farfield_kernel_row(KAPPA, np.array([1.0, 1.0]), make_shape("circle"), 0.0)
