import numpy as np
import pytest

from wcospec.errors import ArityError, IllConditioned, NotInvertible, SymbolSyntaxError, ZeroOnCircle
from wcospec.symbolparse import (
    BinOp,
    BoundaryPow,
    Const,
    Var,
    analyze_text,
    parse,
    winding_check,
)

CATALOG = [
    "1",
    "2+z",
    "exp(0.3*z)/(1 - 0.2*z)",
    "(2+z)*(3-z)",
    "exp(z^2) + 0.5",
    "pow(1 - z, 0.5) + 2",
    "3 - 2*z + 0.25*z^3",
    "1/(1 - 0.5*z)",
]


class TestParse:
    def test_constant(self):
        assert parse("1") == Const(1.0)

    def test_addition_tree(self):
        assert parse("2+z") == BinOp("+", Const(2.0), Var())

    def test_call_and_division(self):
        tree = parse("exp(0.3*z)/(1 - 0.2*z)")
        assert abs(complex(tree.eval(np.complex128(0.0))) - 1.0) < 1e-15

    def test_imaginary_literals(self):
        assert parse("2i") == Const(2j)
        assert parse("i") == Const(1j)
        assert abs(complex(parse("1+0.5i").eval(np.complex128(0.0))) - (1 + 0.5j)) < 1e-15

    def test_precedence_power_over_minus(self):
        tree = parse("-z^2")
        assert abs(complex(tree.eval(np.complex128(2.0))) + 4.0) < 1e-15

    def test_roundtrip_through_text(self):
        for text in CATALOG:
            tree = parse(text)
            assert parse(tree.to_text()) == tree

    def test_syntax_error_carries_position(self):
        with pytest.raises(SymbolSyntaxError) as err:
            parse("2 + $")
        assert err.value.position == 4

    def test_unbalanced(self):
        with pytest.raises(SymbolSyntaxError):
            parse("(1 + z")

    def test_arity_errors(self):
        with pytest.raises(ArityError):
            parse("exp(z, 1)")
        with pytest.raises(ArityError):
            parse("pow(z - 1, 2)")
        with pytest.raises(ArityError):
            parse("pow(0.5 - z, 1)")
        with pytest.raises(ArityError):
            parse("pow(1 - z, z)")

    def test_boundary_pow_atom(self):
        tree = parse("pow(1 - z, 0.5)")
        assert tree == BoundaryPow(1.0 + 0j, 0.5 + 0j)

    def test_double_star_synonym(self):
        assert parse("z**2") == parse("z^2")


class TestAnalyze:
    def test_unimodular_constant(self, psi_half):
        w = analyze_text("1", psi_half, 64)
        for v in (w.A_plus, w.A_minus, w.B_plus, w.B_minus, w.sup_norm_est, w.inf_modulus_est):
            assert abs(v - 1.0) < 1e-12

    def test_two_plus_z(self, psi_half):
        w = analyze_text("2+z", psi_half, 64)
        assert abs(w.A_plus - 3.0) < 1e-4
        assert abs(w.A_minus - 3.0) < 1e-4
        assert abs(w.B_plus - 1.0) < 1e-4
        assert abs(w.B_minus - 1.0) < 1e-4
        assert abs(w.sup_norm_est - 3.0) < 1e-4
        assert abs(w.inf_modulus_est - 1.0) < 1e-4

    def test_vanishing_weight_rejected(self, psi_half):
        with pytest.raises(NotInvertible):
            analyze_text("z", psi_half, 32)

    def test_division_by_inner_zero_rejected(self, psi_half):
        # a pole inside the disk blows up the series expansion
        with pytest.raises(IllConditioned):
            analyze_text("1/(1 - 2*z)", psi_half, 64)

    def test_series_matches_evaluator(self, psi_half, rng):
        pts = 0.9 * rng.random(20) * np.exp(2j * np.pi * rng.random(20))
        for text in CATALOG:
            w = analyze_text(text, psi_half, 256)
            series_vals = w.series.eval(pts)
            direct_vals = np.asarray(w.evaluate(pts))
            assert np.max(np.abs(series_vals - direct_vals)) < 1e-9

    def test_continuous_modulus_catalog_has_matching_limits(self, psi_half):
        for text in ("1", "2+z", "exp(0.3*z)/(1 - 0.2*z)", "3 - 2*z + 0.25*z^3"):
            w = analyze_text(text, psi_half, 64)
            assert abs(w.A_plus - w.A_minus) < 1e-4
            assert abs(w.B_plus - w.B_minus) < 1e-4

    def test_deterministic(self, psi_half):
        w1 = analyze_text("2+z", psi_half, 64)
        w2 = analyze_text("2+z", psi_half, 64)
        assert w1.A_plus == w2.A_plus
        assert w1.sup_norm_est == w2.sup_norm_est
        assert np.array_equal(w1.series.coeffs, w2.series.coeffs)

    def test_invariant_ordering(self, psi_half):
        for text in CATALOG:
            w = analyze_text(text, psi_half, 128)
            assert w.inf_modulus_est > 0
            assert w.A_minus <= w.A_plus + 1e-12
            assert w.B_minus <= w.B_plus + 1e-12
            assert min(w.A_minus, w.B_minus) >= w.inf_modulus_est - 1e-9
            assert max(w.A_plus, w.B_plus) <= w.sup_norm_est + 1e-9

    def test_heuristic_flag_for_boundary_atoms_at_fixed_points(self, psi_half):
        w = analyze_text("pow(1 - z, 0.5) + 2", psi_half, 64)
        assert w.diagnostics["heuristic_boundary_moduli"]
        w2 = analyze_text("2+z", psi_half, 64)
        assert not w2.diagnostics["heuristic_boundary_moduli"]


class TestWindingCheck:
    def test_no_zeros(self, psi_half):
        assert winding_check(parse("2+z"), 0.99) == 0

    def test_single_zero_at_origin(self):
        assert winding_check(parse("z"), 0.5) == 1

    def test_exponential_never_vanishes(self):
        assert winding_check(parse("exp(z)"), 0.99) == 0

    def test_double_zero(self):
        assert winding_check(parse("z^2"), 0.5) == 2

    def test_zero_on_circle_detected(self):
        with pytest.raises(ZeroOnCircle):
            winding_check(parse("z - 0.5"), 0.5)

    def test_rho_out_of_range(self):
        with pytest.raises(ValueError):
            winding_check(parse("2+z"), 1.2)
