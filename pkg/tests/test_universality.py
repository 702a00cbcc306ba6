import math

import numpy as np
import pytest

from wcospec.errors import NoEigenvectorFound, ProbeFailed
from wcospec.mobius import canonical
from wcospec.series import TaylorSeries, mul
from wcospec.spaces import SpaceSpec, norm
from wcospec.spectra import predict_annuli
from wcospec.symbolparse import analyze_text
from wcospec.universality import (
    caradus_report,
    decompose,
    default_target_battery,
    eigenfunction,
    eigenfunction_composed,
    eigenfunction_eval,
    generator_check,
    gk_family,
    kernel_probe,
    membership_diagnostics,
    omega_ratio_limits,
    omega_weight,
    surjectivity_probe,
    twisted_weight,
)
from wcospec.wco import WCOperator

from conftest import random_polynomial


@pytest.fixture(scope="module")
def setup():
    psi = canonical(0.5)
    hardy = SpaceSpec.hardy()
    n = 512
    u1 = analyze_text("1", psi, n)
    u2 = analyze_text("2+z", psi, n)
    return {
        "psi": psi,
        "hardy": hardy,
        "n": n,
        "one": WCOperator(u1, psi, hardy, n),
        "two": WCOperator(u2, psi, hardy, n),
    }


class TestEigenfunction:
    def test_w_zero_is_constant_one(self, psi_half):
        e = eigenfunction(psi_half, 0.0, 32)
        assert abs(e.coeffs[0] - 1.0) < 1e-14
        assert np.max(np.abs(e.coeffs[1:])) < 1e-14

    def test_eigen_relation_imaginary_exponent(self, psi_half):
        w = 2j * np.pi / psi_half.delta  # this is g_1
        g = eigenfunction(psi_half, w, 512, normalize=True)
        cg = eigenfunction_composed(psi_half, w, 512, normalize=True)
        assert np.linalg.norm(cg.coeffs[:257] - g.coeffs[:257]) < 1e-7

    def test_eigen_relation_real_exponent(self, psi_half):
        w = 0.3
        e = eigenfunction(psi_half, w, 512)
        ce = eigenfunction_composed(psi_half, w, 512)
        factor = math.exp(psi_half.delta * w)
        res = np.linalg.norm(ce.coeffs - factor * e.coeffs) / np.linalg.norm(e.coeffs)
        assert res < 1e-6

    def test_eigenvalue_modulus_scaling(self, psi_half):
        for w in (0.3, -0.2 + 1.5j, 0.1 - 0.4j):
            factor = np.exp(psi_half.delta * w)
            assert abs(abs(factor) - math.exp(psi_half.delta * w.real
                                              if isinstance(w, complex) else psi_half.delta * w)) < 1e-8

    def test_series_matches_pointwise_branch(self, psi_half, rng):
        w = 0.25 + 0.7j
        e = eigenfunction(psi_half, w, 256)
        pts = 0.6 * rng.random(10) * np.exp(2j * np.pi * rng.random(10))
        direct = eigenfunction_eval(psi_half, w, pts)
        assert np.max(np.abs(e.eval(pts) - direct)) < 1e-9


class TestGkFamily:
    def test_k_zero_constant(self, psi_half):
        fam = gk_family(psi_half, 0, 16)
        assert abs(fam[0].coeffs[0] - 1.0) < 1e-14

    def test_bounded_on_inner_circle(self, psi_half):
        fam = gk_family(psi_half, 1, 512, normalize=False)
        crude_bound = math.exp(np.pi**2 * (2 * np.pi / psi_half.delta))
        theta = np.linspace(0, 2 * np.pi, 720)
        for k in (-1, 1):
            vals = np.abs(eigenfunction_eval(psi_half, 2j * np.pi * k / psi_half.delta,
                                             0.99 * np.exp(1j * theta)))
            assert np.isfinite(vals).all()
            assert vals.max() <= crude_bound

    def test_conjugate_symmetry_raw(self, psi_half):
        fam = gk_family(psi_half, 1, 256, normalize=False)
        prod = mul(fam[1], fam[-1])
        unit = np.zeros(257)
        unit[0] = 1.0
        assert np.max(np.abs(prod.coeffs - unit)) < 1e-8

    def test_family_size(self, psi_half):
        fam = gk_family(psi_half, 3, 32)
        assert sorted(fam) == list(range(-3, 4))


class TestGeneratorCheck:
    def test_k_zero_vanishes(self, psi_half):
        assert generator_check(psi_half, 0, 128) < 1e-14

    def test_eigenvalue_formula(self, psi_half):
        # a=1, b=-1, delta=log 3: eigenvalue of g_1 is -4 pi i / log 3
        lam = 2.0 * np.pi * 1 * (psi_half.b - psi_half.a) * 1j / psi_half.delta
        assert abs(lam - (-4j * np.pi / np.log(3.0))) < 1e-12
        assert abs(lam.imag + 11.4384) < 1e-3
        lam_neg = 2.0 * np.pi * (-1) * (psi_half.b - psi_half.a) * 1j / psi_half.delta
        assert abs(lam_neg + lam) < 1e-12

    def test_residuals_small(self, psi_half):
        for k in range(-5, 6):
            assert generator_check(psi_half, k, 512) < 1e-6


class TestOmegaWeight:
    def test_series_matches_eval(self, psi_half, rng):
        om = omega_weight(psi_half, 1.3, 0.7, 256)
        pts = 0.7 * rng.random(8) * np.exp(2j * np.pi * rng.random(8))
        assert np.max(np.abs(om.series.eval(pts) - om.eval(pts))) < 1e-9

    def test_nonvanishing_inside(self, psi_half):
        om = omega_weight(psi_half, 1.0, 1.0, 64)
        theta = np.linspace(0, 2 * np.pi, 256)
        vals = np.abs(om.eval(0.95 * np.exp(1j * theta)))
        assert vals.min() > 0.0
        assert vals.max() < 4.0 + 1e-9  # |a-z||b-z| <= 4 on the disk


class TestOmegaRatioLimits:
    def test_trivial_exponents(self, psi_half):
        lim = omega_ratio_limits(psi_half, 0.0, 0.0)
        assert abs(lim["at_a"] - 1.0) < 1e-12
        assert abs(lim["at_b"] - 1.0) < 1e-12

    def test_first_power_at_a(self, psi_half):
        lim = omega_ratio_limits(psi_half, 1.0, 0.0)
        assert abs(lim["at_a"] - 1.0 / 3.0) < 1e-3
        assert abs(lim["at_b"] - 1.0) < 1e-3

    def test_second_power_at_b(self, psi_half):
        lim = omega_ratio_limits(psi_half, 0.0, 2.0)
        assert abs(lim["at_b"] - 9.0) < 1e-3

    def test_grid_against_multipliers(self, psi_half):
        for mu in (0.0, 1.0, 2.0):
            for nu in (0.0, 1.0, 2.0):
                lim = omega_ratio_limits(psi_half, mu, nu)
                assert abs(lim["at_a"] - psi_half.lambda_a**mu) < 1e-3
                assert abs(lim["at_b"] - psi_half.lambda_b**nu) < 1e-3


class TestTwistedWeight:
    def test_zero_twist_is_identity(self, setup):
        u = setup["two"].u
        assert twisted_weight(u, setup["psi"], 0.0, 0.0) is u

    def test_limits_shift_by_multiplier_powers(self, setup):
        psi = setup["psi"]
        u1 = setup["one"].u
        tw = twisted_weight(u1, psi, 1.0, 0.0)
        assert abs(tw.A_plus - 1.0 / 3.0) < 1e-3
        assert abs(tw.B_plus - 1.0) < 1e-3
        tw2 = twisted_weight(setup["two"].u, psi, 0.5, 1.5)
        assert abs(tw2.A_plus - 3.0 * psi.lambda_a**0.5) < 1e-3
        assert abs(tw2.B_plus - 1.0 * psi.lambda_b**1.5) < 1e-2

    def test_ratio_bounded_and_bounded_below(self, setup):
        tw = twisted_weight(setup["one"].u, setup["psi"], 1.0, 1.0)
        assert tw.inf_modulus_est > 0.0
        assert np.isfinite(tw.sup_norm_est)


class TestDecompose:
    def test_constant_reconstruction(self, psi_half):
        f = TaylorSeries.constant(1.0, 16)
        f1, f2 = decompose(f, psi_half, 1.0, 1.0)
        assert np.max(np.abs(f1.coeffs + f2.coeffs - f.coeffs)) < 1e-14

    def test_cubic_exact(self, psi_half):
        c = np.zeros(65, dtype=complex)
        c[3] = 1.0
        f = TaylorSeries(c)
        f1, f2 = decompose(f, psi_half, 1.0, 1.0)
        assert np.max(np.abs(f1.coeffs + f2.coeffs - f.coeffs)) < 1e-14

    def test_fractional_exponent_uses_ceiling(self, psi_half, rng):
        f = random_polynomial(rng, 10, 32)
        f1, f2 = decompose(f, psi_half, 1.5, 0.5)
        assert np.max(np.abs(f1.coeffs + f2.coeffs - f.coeffs)) < 1e-12

    def test_divisibility_split(self, psi_half, rng):
        # f1 vanishes at a to order ceil(mu), f2 at b to order ceil(nu)
        f = random_polynomial(rng, 8, 64)
        f1, f2 = decompose(f, psi_half, 2.0, 1.0)
        h = 1e-4
        assert abs(f1.eval(psi_half.a * (1 - h))) < 10 * h**2 * np.max(np.abs(f1.coeffs))
        assert abs(f2.eval(psi_half.b * (1 - h))) < 10 * h * np.max(np.abs(f2.coeffs))

    def test_membership_diagnostics_finite(self, psi_half, hardy, rng):
        f = random_polynomial(rng, 8, 128)
        f1, f2 = decompose(f, psi_half, 1.0, 1.0)
        diag = membership_diagnostics(f1, f2, psi_half, 1.0, 1.0, hardy)
        assert np.isfinite(diag["f1_quotient_norm"])
        assert np.isfinite(diag["f2_quotient_norm"])

    def test_negative_exponent_rejected(self, psi_half):
        with pytest.raises(ValueError):
            decompose(TaylorSeries.constant(1.0, 8), psi_half, -1.0, 0.0)


class TestKernelProbe:
    def test_unweighted_full_rank(self, setup):
        kp = kernel_probe(setup["one"], 1.0, 5)
        assert kp.rank == 11
        assert kp.base_residual < 1e-6
        assert max(kp.eigenvector_residuals.values()) < 1e-6

    def test_k_zero_rank_one(self, setup):
        kp = kernel_probe(setup["one"], 1.0, 0)
        assert kp.rank == 1

    def test_gram_conditioning_at_depth_ten(self, setup):
        kp = kernel_probe(setup["one"], 1.0, 10)
        assert kp.rank == 21
        assert kp.min_singular_value > 1e-8 * kp.singular_values[0]

    def test_weighted_operator_interior_lambda(self, setup):
        kp = kernel_probe(setup["two"], 1.0, 3)
        assert kp.rank == 7
        assert kp.base_residual < 1e-6

    def test_outside_annulus_fails(self, setup):
        with pytest.raises(NoEigenvectorFound):
            kernel_probe(setup["one"], 10.0, 2)


class TestSurjectivityProbe:
    def test_plain_neumann_outside_annulus(self, setup):
        targets = default_target_battery(setup["n"], extra=0)
        pr = surjectivity_probe(setup["one"], 3.0, targets, tol=1e-3)
        assert pr.max_residual < 1e-8
        assert all(t["method"] == "neumann" for t in pr.per_target)

    def test_unweighted_window_interior(self, setup):
        targets = default_target_battery(setup["n"], extra=0)
        pr = surjectivity_probe(setup["one"], 1.0, targets, tol=1e-3)
        assert pr.max_residual < 1e-4

    def test_weighted_window_interior(self, setup):
        targets = default_target_battery(setup["n"], extra=0)
        pr = surjectivity_probe(setup["two"], 1.5, targets, tol=1e-3)
        assert pr.max_residual < 1e-3

    def test_failure_carries_probe(self, setup):
        # an impossible tolerance still reports the best residual achieved
        targets = default_target_battery(setup["n"], extra=0)[:2]
        with pytest.raises(ProbeFailed) as err:
            surjectivity_probe(setup["one"], 1.0, targets, tol=1e-18)
        assert err.value.best_residual is not None
        assert hasattr(err.value, "probe")


class TestCaradusReport:
    def test_unweighted_certified(self, setup):
        rep = caradus_report(setup["one"].u, setup["psi"], setup["hardy"], 1.0,
                             setup["n"], K=5)
        assert rep.verdict == "certified_at_scale"
        assert rep.kernel["gram_rank"] == 11
        assert rep.surjectivity["max_residual"] < 1e-3
        assert rep.window_check

    def test_weighted_certified(self, setup):
        rep = caradus_report(setup["two"].u, setup["psi"], setup["hardy"], 1.0,
                             setup["n"], K=5)
        assert rep.verdict == "certified_at_scale"
        assert abs(rep.annulus["inclusion_outer"] - 3.0 * np.sqrt(3.0)) < 1e-3

    def test_window_empty_verdict(self, setup):
        psi = setup["psi"]
        u = analyze_text("exp(-3*z)", psi, 256)
        pred = predict_annuli(u, psi, setup["hardy"])
        assert not pred.universality_window_nonempty
        rep = caradus_report(u, psi, setup["hardy"], 1.0, 256, K=2)
        assert rep.verdict == "window_empty"

    def test_lambda_outside_fails_with_diagnostics(self, setup):
        rep = caradus_report(setup["one"].u, setup["psi"], setup["hardy"], 10.0,
                             setup["n"], K=2)
        assert rep.verdict == "failed"
        assert any("NoEigenvectorFound" in d or "outside the open window" in d
                   for d in rep.diagnostics)

    def test_report_reproducible(self, setup):
        from wcospec.report import dumps

        a = caradus_report(setup["one"].u, setup["psi"], setup["hardy"], 1.0, 256, K=2)
        b = caradus_report(setup["one"].u, setup["psi"], setup["hardy"], 1.0, 256, K=2)
        assert dumps(a.to_dict()) == dumps(b.to_dict())


class TestDecompositionScaling:
    def test_norm_of_pieces_controlled(self, psi_half, hardy, rng):
        # pieces stay comparable to the input: no catastrophic cancellation
        f = random_polynomial(rng, 16, 64)
        f1, f2 = decompose(f, psi_half, 1.0, 1.0)
        total = norm(f, hardy, warn_tail=False)
        assert norm(f1, hardy, warn_tail=False) < 50 * total
        assert norm(f2, hardy, warn_tail=False) < 50 * total
