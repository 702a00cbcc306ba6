"""The weighted composition operator u C_psi as an executable object.

Applying the operator to a truncated series is ``u * (f o psi)``. For
repeated application the operator also exposes its finite section: the
matrix of the truncated-algebra action on coefficients, assembled once and
reused. The two paths implement the same linear map on the truncation.
"""

from __future__ import annotations

import numpy as np

from .errors import IllConditioned
from .mobius import (
    Automorphism,
    automorphism_series,
    derivative_power_eval,
    derivative_power_series,
    inverse,
    iterate,
    mobius_apply,
    to_series,
)
from .series import TaylorSeries, check_conditioning, compose, mul, reciprocal
from .spaces import SpaceSpec, monomial_norms, norm
from .symbolparse import WeightSymbol, analyze_callable

#: circles used for sup/inf sampling of iterated weights (same ladder shape
#: as the weight analysis, shallower for iteration cost)
_SUP_LADDER = 12
_SUP_SAMPLES = 2048


class WCOperator:
    """f -> u * (f o psi) on a Hardy/Bergman space, truncated at `order`.

    Immutable after construction; the finite-section matrix and the symbol
    series are cached internally.
    """

    def __init__(self, u: WeightSymbol, psi: Automorphism, space: SpaceSpec, order: int):
        self.u = u
        self.psi = psi
        self.space = space
        self.order = int(order)
        self._u_series = u.series.truncate(self.order)
        self._psi_series = automorphism_series(psi, self.order)
        self._matrix = None

    # -- core action ----------------------------------------------------------

    @property
    def u_series(self) -> TaylorSeries:
        return self._u_series

    @property
    def psi_series(self) -> TaylorSeries:
        return self._psi_series

    def apply(self, f: TaylorSeries) -> TaylorSeries:
        """u * (f o psi), truncated at the working order."""
        return mul(self._u_series, compose(f.truncate(self.order), self._psi_series))

    def coeff_matrix(self) -> np.ndarray:
        """Matrix of the truncated action on monomial coefficients.

        Column m holds the coefficients of u * psi^m computed with the same
        running truncated products the series path uses, so the matrix action
        coincides with :meth:`apply`.
        """
        if self._matrix is None:
            n = self.order
            m = np.empty((n + 1, n + 1), dtype=np.complex128)
            power = TaylorSeries.constant(1.0, n)
            m[:, 0] = self._u_series.coeffs
            for col in range(1, n + 1):
                power = mul(power, self._psi_series)
                m[:, col] = mul(self._u_series, power).coeffs
            if not np.all(np.isfinite(m)):
                raise IllConditioned("finite-section assembly produced non-finite entries")
            self._matrix = m
        return self._matrix

    def apply_coeffs(self, vec: np.ndarray) -> np.ndarray:
        return self.coeff_matrix() @ vec

    def apply_power(self, f: TaylorSeries, n: int) -> TaylorSeries:
        """n-fold application through the cached finite section."""
        vec = f.truncate(self.order).coeffs.copy()
        m = self.coeff_matrix()
        for _ in range(n):
            vec = m @ vec
        return TaylorSeries(vec)

    # -- iterated weights -----------------------------------------------------

    def iterated_weight(self, n: int) -> TaylorSeries:
        """The product series u_n = prod_{j<n} u o psi_j (empty product = 1).

        Computed as the n-fold image of the constant 1, which equals u_n in
        the truncated algebra since constants compose trivially.
        """
        if n < 0:
            raise ValueError("iterated weight needs n >= 0")
        out = self.apply_power(TaylorSeries.constant(1.0, self.order), n)
        return check_conditioning(out, f"iterated weight u_{n}")

    def iterate_consistency(self, n: int, f: TaylorSeries) -> float:
        """Relative defect of (u C_psi)^n = u_n C_{psi_n} on f.

        The n-fold application is compared against the one-shot form built
        from the iterated weight and the exact series of psi_n. The defect is
        read on the pollution-free band (index <= order/4) and normalized by
        the larger of ||f|| and ||T^n f||, since the iterates of weights with
        |u| > 1 grow geometrically and a defect relative to ||f|| alone would
        just measure that growth.
        """
        lhs = self.apply_power(f, n)
        un = self.iterated_weight(n)
        psi_n = to_series(iterate(self.psi, n), self.order)
        rhs = mul(un, compose(f.truncate(self.order), psi_n))
        guard = self.order // 4
        diff = TaylorSeries(lhs.coeffs[: guard + 1] - rhs.coeffs[: guard + 1])
        denom = max(norm(f, self.space, warn_tail=False),
                    norm(lhs, self.space, warn_tail=False))
        if denom == 0.0:
            return 0.0
        return norm(diff, self.space, warn_tail=False) / denom

    def gelfand_sup_weight(self, n_max: int, which: str = "sup") -> np.ndarray:
        """Sequence (extremum over sampling circles of |u_n|)^(1/n), n = 1..n_max.

        which='sup' samples the maximum (bounded above, in the limit, by
        max(A+, B+)); which='inf' the minimum. Products accumulate in the log
        domain: the circle points are pushed forward through psi while the
        log-moduli of the weight accumulate.
        """
        if n_max < 1:
            raise ValueError("n_max must be >= 1")
        if which not in ("sup", "inf"):
            raise ValueError("which must be 'sup' or 'inf'")
        theta = 2.0 * np.pi * np.arange(_SUP_SAMPLES) / _SUP_SAMPLES
        unit = np.exp(1j * theta)
        pts = np.concatenate([(1.0 - 2.0 ** (-j)) * unit for j in range(1, _SUP_LADDER + 1)])
        acc = np.zeros(pts.shape)
        out = np.empty(n_max)
        w = pts
        for n in range(1, n_max + 1):
            vals = np.abs(np.asarray(self.u.evaluate(w)))
            if not np.all(np.isfinite(vals)) or np.any(vals <= 0.0):
                raise IllConditioned("weight vanished or blew up along an orbit sample")
            acc = acc + np.log(vals)
            extremum = acc.max() if which == "sup" else acc.min()
            out[n - 1] = np.exp(extremum / n)
            w = mobius_apply(self.psi.matrix, w)
        return out

    # -- matrix views ---------------------------------------------------------

    def galerkin(self) -> "GalerkinMatrix":
        """Finite section in the orthonormal monomial basis e_n = z^n / ||z^n||."""
        w = monomial_norms(self.space, self.order)
        entries = self.coeff_matrix() * (w[:, None] / w[None, :])
        return GalerkinMatrix(entries=entries, space=self.space, basis_norms=w)

    def inverse_operator(self) -> "WCOperator":
        """The inverse: weight 1/(u o psi^{-1}), symbol psi^{-1}.

        The boundary moduli of the inverse weight are the exact reciprocals
        of the direct ones with the fixed-point roles swapped (psi^{-1}
        attracts at b), so they are derived algebraically instead of being
        re-sampled; this keeps inverse-symmetry identities exact.
        """
        psi_inv = inverse(self.psi)
        inv_series = reciprocal(
            compose(self.u.series.truncate(self.order), automorphism_series(psi_inv, self.order))
        )
        inv_matrix = psi_inv.matrix
        u = self.u
        u_eval = u.evaluate

        def inv_eval(z):
            return 1.0 / np.asarray(u_eval(mobius_apply(inv_matrix, z)))

        diagnostics = dict(u.diagnostics)
        diagnostics["derived"] = "algebraic reciprocal of the direct weight"
        weight = WeightSymbol(
            source=f"1/(({u.source}) o psi^-1)",
            evaluate=inv_eval,
            series=inv_series,
            sup_norm_est=1.0 / u.inf_modulus_est,
            inf_modulus_est=1.0 / u.sup_norm_est,
            A_plus=1.0 / u.B_minus,
            A_minus=1.0 / u.B_plus,
            B_plus=1.0 / u.A_minus,
            B_minus=1.0 / u.A_plus,
            expr=None,
            diagnostics=diagnostics,
        )
        return WCOperator(weight, psi_inv, self.space, self.order)


class GalerkinMatrix:
    """Dense finite section of the operator in the orthonormal basis.

    Eigenvalues of finite sections of non-normal operators can be polluted;
    treat them as diagnostics, not as certified spectrum.
    """

    def __init__(self, entries: np.ndarray, space: SpaceSpec, basis_norms: np.ndarray):
        self.entries = entries
        self.space = space
        self.basis_norms = basis_norms

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def matvec(self, vec: np.ndarray) -> np.ndarray:
        return self.entries @ vec


def constant_weight(value, psi: Automorphism, order: int) -> WeightSymbol:
    """WeightSymbol for a constant symbol (u = 1 gives the unweighted C_psi)."""
    value = complex(value)
    if value == 0:
        raise ValueError("constant weight must be nonzero")

    def ev(z):
        z = np.asarray(z, dtype=np.complex128)
        return np.full(z.shape, value)

    return analyze_callable(ev, TaylorSeries.constant(value, order), psi,
                            source=f"{value.real:g}" if value.imag == 0 else str(value))


def isometry_weight(psi: Automorphism, space: SpaceSpec, order: int) -> WeightSymbol:
    """WeightSymbol for (psi')^gamma, the isometry normalizer of the space."""
    g = space.gamma
    series = derivative_power_series(psi, g, order)

    def ev(z):
        return derivative_power_eval(psi, g, z)

    return analyze_callable(ev, series, psi, source=f"(psi')^{g:g}")


def normalized_isometry(psi: Automorphism, space: SpaceSpec, order: int) -> WCOperator:
    """The operator (psi')^gamma C_psi, an isometry of the space at p = 2."""
    return WCOperator(isometry_weight(psi, space, order), psi, space, order)
