import numpy as np
import pytest
from scipy import integrate

from wcospec.errors import TruncationSuspectWarning, UnsupportedExponent
from wcospec.series import TaylorSeries, fractional_power
from wcospec.spaces import (
    SpaceSpec,
    circle_mean,
    inner_product,
    monomial_norm,
    monomial_norms,
    norm,
    pnorm_quadrature,
    tail_mass_fraction,
)

from conftest import random_polynomial


def bergman_monomial_oracle(n, sigma):
    """Independent 2-d quadrature of the squared Bergman norm of z^n."""
    val, _ = integrate.dblquad(
        lambda r, _theta: r ** (2 * n + 1) * (1 - r * r) ** sigma,
        0.0, 2.0 * np.pi, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13,
    )
    return np.sqrt(val)


class TestMonomialNorm:
    def test_hardy_orthonormal(self):
        assert monomial_norm(SpaceSpec.hardy(), 7) == 1.0

    def test_bergman_constant_is_disk_area(self):
        assert abs(monomial_norm(SpaceSpec.bergman(0.0), 0) - np.sqrt(np.pi)) < 1e-14

    def test_bergman_against_quadrature(self):
        space = SpaceSpec.bergman(1.0)
        expected = bergman_monomial_oracle(3, 1.0)
        assert abs(monomial_norm(space, 3) / expected - 1.0) < 1e-8

    def test_strictly_decreasing_for_bergman(self):
        w = monomial_norms(SpaceSpec.bergman(0.5), 20)
        assert np.all(np.diff(w) < 0)

    def test_p_not_two_rejected(self):
        with pytest.raises(UnsupportedExponent):
            monomial_norm(SpaceSpec.hardy(p=4.0), 2)


class TestNorm:
    def test_one_plus_z(self):
        f = TaylorSeries(np.array([1.0, 1.0]))
        assert abs(norm(f, SpaceSpec.hardy()) - np.sqrt(2.0)) < 1e-14

    def test_zero(self):
        assert norm(TaylorSeries.zero(8), SpaceSpec.hardy()) == 0.0

    def test_boundary_singular_against_circle_oracle(self):
        # (1-z)^(-0.4) has slowly decaying coefficients; its truncated
        # coefficient norm agrees with a high-resolution circle quadrature of
        # the true function near the boundary to a couple of percent
        n = 4096
        f = fractional_power(1.0, -0.4, n)
        rho = 0.9999
        theta = 2.0 * np.pi * (np.arange(1 << 17) + 0.5) / (1 << 17)
        vals = np.abs(1.0 - rho * np.exp(1j * theta)) ** (-0.4)
        oracle = np.sqrt(np.mean(vals**2))
        with pytest.warns(TruncationSuspectWarning):
            value = norm(f, SpaceSpec.hardy())
        assert abs(value / oracle - 1.0) < 0.02

    def test_tail_fraction_small_for_polynomials(self, rng):
        f = random_polynomial(rng, 8, 64)
        assert tail_mass_fraction(f, SpaceSpec.hardy()) == 0.0


class TestPnormQuadrature:
    def test_constant_any_p(self):
        f = TaylorSeries.constant(1.0, 16)
        for p in (1.0, 2.0, 4.0):
            assert abs(pnorm_quadrature(f, SpaceSpec.hardy(p=p), 0.5) - 1.0) < 1e-12

    def test_parseval_at_radius(self, rng):
        # the trapezoid circle mean reproduces the radius-rho Parseval sum
        rho = 0.9999
        for _ in range(5):
            f = random_polynomial(rng, 32, 64)
            dilated = f.coeffs * rho ** np.arange(65)
            expected = float(np.linalg.norm(dilated))
            got = pnorm_quadrature(f, SpaceSpec.hardy(), rho)
            assert abs(got - expected) < 1e-5 * max(1.0, expected)

    def test_p2_matches_coefficient_norm_near_boundary(self, rng):
        space = SpaceSpec.hardy()
        for _ in range(3):
            f = random_polynomial(rng, 32, 64)
            got = pnorm_quadrature(f, space, 1.0 - 1e-9)
            assert abs(got - norm(f, space)) < 1e-6 * max(1.0, norm(f, space))

    def test_p4_binomial_value(self):
        # the fourth power mean of |1 + e^(i t)| integrates to 6
        f = TaylorSeries(np.array([1.0, 1.0]))
        got = pnorm_quadrature(f, SpaceSpec.hardy(p=4.0), 1.0 - 1e-6)
        assert abs(got - 6.0 ** 0.25) < 1e-4

    def test_p4_exact_at_interior_radius(self):
        # at any rho the p=4 mean of |1 + rho e^(i t)|^4 is 1 + 4 rho^2 + rho^4
        f = TaylorSeries(np.array([1.0, 1.0]))
        rho = 0.999
        expected = (1.0 + 4.0 * rho**2 + rho**4) ** 0.25
        assert abs(pnorm_quadrature(f, SpaceSpec.hardy(p=4.0), rho) - expected) < 1e-9

    def test_hardy_means_monotone_in_radius(self, rng):
        f = random_polynomial(rng, 16, 32)
        radii = np.linspace(0.1, 0.99, 10)
        means = [pnorm_quadrature(f, SpaceSpec.hardy(), r) for r in radii]
        assert np.all(np.diff(means) >= 0)

    def test_bergman_p2_converges_to_coefficient_norm(self, rng):
        space = SpaceSpec.bergman(1.0)
        f = random_polynomial(rng, 12, 24)
        got = pnorm_quadrature(f, space, 1.0 - 1e-9, radial_nodes=512)
        assert abs(got / norm(f, space, warn_tail=False) - 1.0) < 1e-6

    def test_rho_out_of_range(self):
        with pytest.raises(ValueError):
            pnorm_quadrature(TaylorSeries.constant(1.0), SpaceSpec.hardy(), 1.5)


class TestInnerProduct:
    def test_monomials_orthogonal(self):
        space = SpaceSpec.bergman(0.0)
        e1 = TaylorSeries(np.array([0.0, 1.0, 0.0]))
        e2 = TaylorSeries(np.array([0.0, 0.0, 1.0]))
        assert abs(inner_product(e1, e2, space)) < 1e-15
        assert abs(inner_product(e1, e1, space) - monomial_norm(space, 1) ** 2) < 1e-15


class TestCircleMean:
    def test_matches_direct_evaluation(self, rng):
        f = random_polynomial(rng, 10, 20)
        rho = 0.7
        theta = 2.0 * np.pi * np.arange(256) / 256
        direct = np.mean(np.abs(f(rho * np.exp(1j * theta))) ** 2) ** 0.5
        assert abs(circle_mean(f, rho, 2.0, nodes=256) - direct) < 1e-12
