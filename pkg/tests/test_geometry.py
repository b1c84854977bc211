import numpy as np
import pytest
from scipy import integrate

from bergband.geometry import (
    CellGeometry,
    QuadratureRule,
    build_disc_quadrature,
    build_cell_quadrature,
    contains,
)


class TestCellGeometry:
    def test_valid_construction(self):
        cell = CellGeometry(R0=0.3, h=0.1)
        assert cell.R0 == 0.3

    @pytest.mark.parametrize(
        "R0,h",
        [(0.2, 0.05), (0.5, 0.05), (0.6, 0.05), (0.3, 0.0), (0.3, 0.2), (0.26, 0.3)],
    )
    def test_rejects_out_of_range(self, R0, h):
        with pytest.raises(ValueError):
            CellGeometry(R0=R0, h=h)

    def test_area_against_adaptive_oracle(self):
        # Independent 2-D adaptive integration of the indicator-free area:
        # disc area + two strip-minus-lens side pieces.
        cell = CellGeometry(R0=0.3, h=0.08)
        R0, h = cell.R0, cell.h
        side, err = integrate.dblquad(
            lambda x, y: 1.0,
            -h,
            h,
            lambda y: np.sqrt(R0**2 - y**2),
            lambda y: 0.5,
            epsabs=1e-13,
        )
        oracle = np.pi * R0**2 + 2.0 * side
        assert cell.area == pytest.approx(oracle, abs=1e-11)


class TestQuadratureRule:
    def test_rejects_nonpositive_weights(self):
        with pytest.raises(ValueError):
            QuadratureRule(np.array([0.0 + 0j]), np.array([0.0]))

    def test_rejects_mismatched_lengths(self):
        with pytest.raises(ValueError):
            QuadratureRule(np.zeros(3, dtype=complex), np.ones(2))


class TestDiscQuadrature:
    def test_total_weight_is_disc_area(self):
        quad = build_disc_quadrature(0.4, n_r=8, n_t=16)
        assert quad.total_weight == pytest.approx(np.pi * 0.16, abs=1e-12)

    def test_centroid_vanishes(self):
        quad = build_disc_quadrature(0.4, n_r=8, n_t=16)
        assert abs(np.sum(quad.weights * quad.nodes)) < 1e-12

    def test_radial_monomial_closed_form(self):
        # integral |z|^{2n} dA = pi R0^{2n+2} / (n+1), here n=3, R0=0.4
        quad = build_disc_quadrature(0.4, n_r=8, n_t=16)
        val = np.sum(quad.weights * np.abs(quad.nodes) ** 6)
        assert val == pytest.approx(np.pi * 0.4**8 / 4, rel=1e-12)

    def test_radial_monomial_monte_carlo_oracle(self):
        # Brute-force check of the same integral, independent of any closed form.
        rng = np.random.default_rng(1)
        pts = rng.uniform(-0.4, 0.4, size=(400_000, 2))
        inside = pts[np.hypot(pts[:, 0], pts[:, 1]) < 0.4]
        mc = np.mean(np.hypot(inside[:, 0], inside[:, 1]) ** 6) * np.pi * 0.16
        quad = build_disc_quadrature(0.4, n_r=8, n_t=16)
        val = np.sum(quad.weights * np.abs(quad.nodes) ** 6)
        assert val == pytest.approx(mc, rel=2e-2)

    def test_monomial_norms_exact(self):
        R0 = 0.35
        quad = build_disc_quadrature(R0, n_r=24, n_t=48)
        for n in range(23):
            exact = np.pi * R0 ** (2 * n + 2) / (n + 1)
            got = np.sum(quad.weights * np.abs(quad.nodes ** n) ** 2)
            assert got == pytest.approx(exact, rel=1e-10)

    def test_radial_breaks_preserve_area_and_fix_jumps(self):
        R0 = 0.4
        plain = build_disc_quadrature(R0, n_r=12, n_t=8)
        split = build_disc_quadrature(R0, n_r=12, n_t=8, radial_breaks=(R0 / 2,))
        assert split.total_weight == pytest.approx(plain.total_weight, rel=1e-13)
        # Integrate an integrand that jumps at |z| = R0/2.
        exact = np.pi * (R0 / 2) ** 2
        f = lambda q: np.sum(q.weights * (np.abs(q.nodes) < R0 / 2))
        assert abs(f(split) - exact) < 1e-12
        assert abs(f(plain) - exact) > 1e-4  # single panel genuinely fails

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            build_disc_quadrature(0.4, n_r=0)
        with pytest.raises(ValueError):
            build_disc_quadrature(-0.1)
        with pytest.raises(ValueError):
            build_disc_quadrature(0.4, radial_breaks=(0.5,))


class TestCellQuadrature:
    def test_total_weight_matches_area(self):
        cell = CellGeometry(R0=0.3, h=0.1)
        quad = build_cell_quadrature(cell)
        assert quad.total_weight == pytest.approx(cell.area, abs=1e-12)

    def test_all_nodes_inside(self):
        cell = CellGeometry(R0=0.3, h=0.1)
        quad = build_cell_quadrature(cell)
        assert np.all(contains(cell, quad.nodes))

    def test_refinement_error_decreases(self):
        cell = CellGeometry(R0=0.28, h=0.07)
        f = lambda z: np.exp(z.real) * np.cos(3 * z.imag)
        vals = []
        for n in (4, 8, 16):
            q = build_cell_quadrature(cell, n_r=n, n_t=4 * n, n_strip=n)
            vals.append(np.sum(q.weights * f(q.nodes)))
        ref = vals[-1]
        errs = [abs(v - ref) for v in vals[:-1]]
        assert errs[1] < errs[0]

    def test_small_h_limit(self):
        # As h -> 0 the cell area tends to the disc area plus the full strip.
        cell = CellGeometry(R0=0.3, h=1e-4)
        quad = build_cell_quadrature(cell)
        assert quad.total_weight == pytest.approx(cell.area, abs=1e-12)
        assert quad.total_weight == pytest.approx(np.pi * 0.09 + 2e-4, rel=1e-2)


class TestContains:
    def test_center(self):
        assert contains(CellGeometry(0.3, 0.1), 0.0)

    def test_strip_point(self):
        assert contains(CellGeometry(0.3, 0.1), 0.49)

    def test_outside(self):
        assert not contains(CellGeometry(0.3, 0.1), 0.49 + 0.2j)

    def test_vectorized(self):
        out = contains(CellGeometry(0.3, 0.1), np.array([0.0, 0.49, 0.49 + 0.2j]))
        assert out.tolist() == [True, True, False]
