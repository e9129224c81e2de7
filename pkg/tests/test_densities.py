import numpy as np
import pytest
from scipy.integrate import quad

from quadmaps.densities import (
    DensityError,
    chi_square_gof,
    wilson_interval,
    xi,
    zeta,
    zeta_marginal_p1,
    zeta_mass_p1,
)


class TestZeta:
    def test_reference_value(self):
        # closed form at tau = 1/2, x = 1/2
        assert zeta_marginal_p1(0.5, 0.5) == pytest.approx(1.9358, abs=2e-4)

    def test_vanishing_outside_cone(self):
        # an interior rise-plus-drop of zero kills the density
        assert zeta([0.5, 0.2], [0.5], [0.3, 0.6]) == 0.0
        assert zeta([0.2, 0.5], [0.5], [0.3, 0.6]) == 0.0
        assert zeta([0.5, 0.4], [-0.1], [0.3, 0.6]) == 0.0

    def test_positive_inside_cone(self):
        assert zeta([0.7, 0.9], [0.3], [0.25, 0.7]) > 0.0

    def test_dimension_checks(self):
        with pytest.raises(DensityError):
            zeta([0.5], [0.1], [0.5])
        with pytest.raises(DensityError):
            zeta([0.5, 0.6], [0.1], [0.6, 0.5])
        with pytest.raises(DensityError):
            zeta([0.5], [], [1.5])

    def test_total_mass_p1_is_two(self):
        # lattice-parity normalization: integrates to 2 over x > 0
        total, _ = quad(lambda x: zeta_marginal_p1(x, 0.4), 0, 12)
        assert total == pytest.approx(2.0, abs=1e-8)

    def test_mass_matches_quadrature(self):
        a, b, tau = 0.3, 0.9, 0.35
        num, _ = quad(lambda x: zeta_marginal_p1(x, tau), a, b)
        assert zeta_mass_p1(a, b, tau) == pytest.approx(num, abs=1e-10)


class TestXi:
    def test_p1_is_gaussian_density(self):
        # analytic identity: single factor = centered normal, variance l
        for l in (0.2, 1.0, 3.7):
            for k in (-1.5, 0.0, 0.4):
                expect = np.exp(-k * k / (2 * l)) / np.sqrt(2 * np.pi * l)
                assert xi([l], [k]) == pytest.approx(expect, rel=1e-12)

    def test_factorizes(self):
        assert xi([1.0, 2.0], [0.3, -0.7]) == pytest.approx(
            xi([1.0], [0.3]) * xi([2.0], [-0.7]), rel=1e-12
        )

    def test_normalization(self):
        total, _ = quad(lambda k: xi([0.8], [k]), -np.inf, np.inf)
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_domain(self):
        with pytest.raises(DensityError):
            xi([0.0], [0.1])
        with pytest.raises(DensityError):
            xi([1.0, 2.0], [0.1])
        with pytest.raises(DensityError):
            xi([], [])


class TestStatsHelpers:
    def test_wilson_contains_truth(self):
        rng = np.random.default_rng(0)
        p = 0.3
        misses = 0
        for _ in range(200):
            hits = int(rng.binomial(1000, p))
            lo, hi = wilson_interval(hits, 1000)
            if not lo <= p <= hi:
                misses += 1
        assert misses <= 2  # 3-sigma interval

    def test_chi_square_uniform(self):
        rng = np.random.default_rng(1)
        obs = np.bincount(rng.integers(0, 10, size=10_000), minlength=10)
        stat, p = chi_square_gof(obs, np.full(10, 0.1))
        assert p > 1e-3

    def test_chi_square_detects_bias(self):
        obs = np.array([900, 100])
        _, p = chi_square_gof(obs, np.array([0.5, 0.5]))
        assert p < 1e-10
