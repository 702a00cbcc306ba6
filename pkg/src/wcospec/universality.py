"""Numerical certification of the two Caradus hypotheses for u C_psi - lambda I:
an infinite-dimensional kernel (probed up to finite rank) and surjectivity
(probed on a battery of targets).

The kernel probe multiplies a base eigenvector by the invariant family
g_k = ((b - z)/(a - z))^(2 pi k i / delta) and certifies linear independence
through the singular values of the Gram matrix. The surjectivity probe splits
each target into pieces supported (after division) near each fixed point and
solves the two pieces by forward/backward resolvent series of twisted
operators, mirroring how the range spaces at the two fixed points interact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BranchUndefined, NoEigenvectorFound, ProbeFailed, SeriesDiverging
from .mobius import Automorphism
from .series import (
    TaylorSeries,
    derivative as series_derivative,
    exp as series_exp,
    fractional_power,
    mul,
)
from .spaces import SpaceSpec, coeff_norm, monomial_norms, tail_mass_fraction
from .spectra import AnnulusPrediction, predict_annuli, resolvent_backward, resolvent_forward
from .symbolparse import WeightSymbol, analyze_callable
from .wco import WCOperator

#: rank threshold for the Gram matrix: singular values above this fraction of
#: the largest count toward the numerical rank
GRAM_RANK_THRESHOLD = 1e-8
#: sampled-limit ladder depth for the omega ratio
RATIO_LADDER_DEPTH = 20


# ---------------------------------------------------------------------------
# Range-space weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OmegaWeight:
    """The function (a - z)^mu (b - z)^nu; non-vanishing on the open disk."""

    mu: float
    nu: float
    a: complex
    b: complex
    series: TaylorSeries

    def eval(self, z):
        z = np.asarray(z, dtype=np.complex128)
        fa = np.exp(self.mu * (cmath.log(self.a) + np.log(1.0 - z / self.a)))
        fb = np.exp(self.nu * (cmath.log(self.b) + np.log(1.0 - z / self.b)))
        return fa * fb


def omega_weight(psi: Automorphism, mu: float, nu: float, order: int) -> OmegaWeight:
    s = mul(fractional_power(psi.a, mu, order), fractional_power(psi.b, nu, order))
    return OmegaWeight(mu=float(mu), nu=float(nu), a=psi.a, b=psi.b, series=s)


def omega_ratio_limits(psi: Automorphism, mu: float, nu: float) -> dict:
    """Sampled limits of |omega o psi / omega| along radial approaches.

    Tends to psi'(a)^mu at the attractive point and psi'(b)^nu at the
    repulsive one.
    """
    def ratio_at(c):
        j = np.arange(1, RATIO_LADDER_DEPTH + 1)
        z = c * (1.0 - 2.0 ** (-j.astype(float)))
        pz = psi(z)
        num = (np.abs(psi.a - pz) ** mu) * (np.abs(psi.b - pz) ** nu)
        den = (np.abs(psi.a - z) ** mu) * (np.abs(psi.b - z) ** nu)
        return float((num / den)[-1])

    return {"at_a": ratio_at(psi.a), "at_b": ratio_at(psi.b)}


def _ratio_power_parts(psi: Automorphism, mu: float, nu: float):
    """Closed rational form of omega_{mu,nu} o psi / omega_{mu,nu}.

    Since psi fixes a and b, (c - psi(z))/(c - z) = (m00 - c m10)/(m10 z + m11)
    for c in {a, b}; the full ratio is an affine power
    K_a^mu K_b^nu (1 + (m10/m11) z)^(-(mu+nu)) with K_c = (m00 - c m10)/m11.
    """
    m = psi.matrix
    ka = (m[0, 0] - psi.a * m[1, 0]) / m[1, 1]
    kb = (m[0, 0] - psi.b * m[1, 0]) / m[1, 1]
    q = m[1, 0] / m[1, 1]
    lead = cmath.exp(mu * cmath.log(complex(ka)) + nu * cmath.log(complex(kb)))
    return lead, q


def twisted_weight(u: WeightSymbol, psi: Automorphism, mu: float, nu: float,
                   order: int | None = None) -> WeightSymbol:
    """The weight (omega_{mu,nu} o psi / omega_{mu,nu}) * u.

    Its boundary moduli are re-sampled; they track psi'(a)^mu A+- at a and
    psi'(b)^nu B+- at b.
    """
    if mu == 0 and nu == 0:
        return u
    order = u.series.truncation_order if order is None else order
    from .series import affine_power

    lead, q = _ratio_power_parts(psi, mu, nu)
    ratio_series = affine_power(q, -(mu + nu), order).scale(lead)
    u_eval = u.evaluate

    def ev(z):
        z = np.asarray(z, dtype=np.complex128)
        ratio = lead * np.exp(-(mu + nu) * np.log(1.0 + q * z))
        return ratio * np.asarray(u_eval(z))

    series = mul(ratio_series, u.series.truncate(order))
    return analyze_callable(ev, series, psi,
                            source=f"(omega[{mu:g},{nu:g}] ratio) * ({u.source})")


def decompose(f: TaylorSeries, psi: Automorphism, mu: float, nu: float):
    """Split f = f1 + f2 with f1 divisible by (a-z)^mu and f2 by (b-z)^nu.

    Binomial identity: 1 = ((a-z) - (b-z))^(m+n) / (a-b)^(m+n) with
    m = ceil(mu), n = ceil(nu); terms with j >= m powers of (a-z) go to f1
    (the j = m boundary term included), the rest to f2. The split is exact
    coefficientwise.
    """
    if mu < 0 or nu < 0:
        raise ValueError("mu and nu must be nonnegative")
    m = math.ceil(mu)
    n = math.ceil(nu)
    a, b = psi.a, psi.b
    total = m + n
    if total == 0:
        return f, TaylorSeries.zero(f.truncation_order)
    scale = 1.0 / (a - b) ** total
    f1 = TaylorSeries.zero(f.truncation_order)
    f2 = TaylorSeries.zero(f.truncation_order)
    pa = np.array([a, -1.0], dtype=np.complex128)  # a - z
    pb = np.array([b, -1.0], dtype=np.complex128)  # b - z
    for j in range(total + 1):
        poly = np.array([1.0], dtype=np.complex128)
        for _ in range(j):
            poly = np.convolve(poly, pa)
        for _ in range(total - j):
            poly = np.convolve(poly, pb)
        coef = math.comb(total, j) * (-1.0) ** (total - j) * scale
        term = mul(TaylorSeries(poly * coef).pad(f.truncation_order), f)
        if j >= m:
            f1 = f1 + term
        else:
            f2 = f2 + term
    return f1, f2


def membership_diagnostics(f1: TaylorSeries, f2: TaylorSeries, psi: Automorphism,
                           mu: float, nu: float, space: SpaceSpec) -> dict:
    """Tail-mass diagnostics for f1/omega_{mu,0} and f2/omega_{0,nu}."""
    order = f1.truncation_order
    q1 = mul(f1, fractional_power(psi.a, -mu, order))
    q2 = mul(f2, fractional_power(psi.b, -nu, order))
    return {
        "f1_quotient_norm": coeff_norm(q1.coeffs, space),
        "f1_quotient_tail_fraction": tail_mass_fraction(q1, space),
        "f2_quotient_norm": coeff_norm(q2.coeffs, space),
        "f2_quotient_tail_fraction": tail_mass_fraction(q2, space),
    }


# ---------------------------------------------------------------------------
# Invariant eigenfunctions
# ---------------------------------------------------------------------------

def _log_ratio_series(psi: Automorphism, order: int) -> TaylorSeries:
    """Branch of log((b - z)/(a - z)) equal to Log(b/a) at the origin."""
    a, b = psi.a, psi.b
    if abs(a - b) < 1e-12:
        raise BranchUndefined("fixed points coincide; no branch of the log ratio")
    k = np.arange(1, order + 1)
    c = np.empty(order + 1, dtype=np.complex128)
    c[0] = cmath.log(b / a)
    c[1:] = (1.0 / a ** k - 1.0 / b ** k) / k  # -(z/b)^k/k + (z/a)^k/k
    return TaylorSeries(c)


def eigenfunction(psi: Automorphism, w: complex, order: int,
                  normalize: bool = False) -> TaylorSeries:
    """The function e_w = ((b - z)/(a - z))^w with the fixed branch.

    Satisfies C_psi e_w = e^(delta w) e_w. Membership in the space requires
    |Re w| < gamma; the construction itself allows any w. With normalize=True
    the result is scaled to unit Hardy coefficient norm (the eigen-relation is
    scale-invariant, and the raw functions have extreme dynamic range for
    large imaginary w).
    """
    L = _log_ratio_series(psi, order)
    e = series_exp(L.scale(complex(w)))
    if normalize:
        nrm = float(np.linalg.norm(e.coeffs))
        if nrm > 0:
            e = e.scale(1.0 / nrm)
    return e


def eigenfunction_eval(psi: Automorphism, w: complex, z):
    """Pointwise values of e_w on the disk (same branch as the series)."""
    a, b = psi.a, psi.b
    z = np.asarray(z, dtype=np.complex128)
    L = cmath.log(b / a) + np.log(1.0 - z / b) - np.log(1.0 - z / a)
    return np.exp(complex(w) * L)


def eigenfunction_composed(psi: Automorphism, w: complex, order: int,
                           normalize: bool = False) -> TaylorSeries:
    """Series of e_w o psi computed without truncated composition.

    The ratio (b - psi(z))/(a - psi(z)) is itself a Moebius function of z, so
    log of it has closed-form coefficients; only the branch constant needs
    care, and it is pinned by continuity through the value of the log-ratio
    series of e_w at psi(0). Every coefficient is exact up to rounding, which
    makes this the reference side for eigen-relation residuals (generic
    truncated composition pollutes the upper half of the coefficient range).
    """
    a, b = psi.a, psi.b
    m = psi.matrix
    # (b - psi(z))/(a - psi(z)) = (n1 z + n0)/(d1 z + d0)
    n1 = b * m[1, 0] - m[0, 0]
    n0 = b * m[1, 1] - m[0, 1]
    d1 = a * m[1, 0] - m[0, 0]
    d0 = a * m[1, 1] - m[0, 1]
    L = _log_ratio_series(psi, order)
    const = complex(L.eval(complex(m[0, 1] / m[1, 1])))  # L(psi(0)), right branch
    k = np.arange(1, order + 1)
    c = np.empty(order + 1, dtype=np.complex128)
    c[0] = const
    c[1:] = (-((-n1 / n0) ** k) + ((-d1 / d0) ** k)) / k  # log1p(n1/n0 z) - log1p(d1/d0 z)
    composed = series_exp(TaylorSeries(c).scale(complex(w)))
    if normalize:
        nrm = float(np.linalg.norm(eigenfunction(psi, w, order).coeffs))
        if nrm > 0:
            composed = composed.scale(1.0 / nrm)
    return composed


def gk_family(psi: Automorphism, k_range: int, order: int,
              normalize: bool = True) -> dict:
    """The invariant family g_k = e_(2 pi k i / delta) for |k| <= k_range.

    Each g_k is bounded on the disk and satisfies C_psi g_k = g_k. Normalized
    scaling is the default: products g_k g_(-k) = 1 only hold for the raw
    functions (normalize=False), while residual checks and Gram ranks need
    unit-scale inputs.
    """
    out = {}
    for k in range(-k_range, k_range + 1):
        w = 2.0 * math.pi * 1j * k / psi.delta
        out[k] = eigenfunction(psi, w, order, normalize=normalize)
    return out


def generator_check(psi: Automorphism, k: int, order: int) -> float:
    """Residual of omega_{1,1} g_k' = (2 pi k (b-a) i / delta) g_k.

    Checked on guarded coefficients (index <= order/2) of the unit-scaled
    g_k; the eigenvalue is exact for the true function.
    """
    g = eigenfunction(psi, 2.0 * math.pi * 1j * k / psi.delta, order, normalize=True)
    om = omega_weight(psi, 1.0, 1.0, order).series
    lhs = mul(om, series_derivative(g).pad(order))
    lam = 2.0 * math.pi * k * (psi.b - psi.a) * 1j / psi.delta
    guard = order // 2
    diff = lhs.coeffs[: guard + 1] - lam * g.coeffs[: guard + 1]
    return float(np.linalg.norm(diff))


# ---------------------------------------------------------------------------
# Kernel probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelProbe:
    K: int
    rank: int
    min_singular_value: float
    singular_values: np.ndarray
    eigenvector_residuals: dict
    base_residual: float
    base_iterations: int

    def as_dict(self) -> dict:
        return {
            "K": self.K,
            "gram_rank": self.rank,
            "min_singular_value": self.min_singular_value,
            "base_residual": self.base_residual,
            "base_iterations": self.base_iterations,
            "max_eigenvector_residual": max(self.eigenvector_residuals.values()),
        }


def _guarded_residual(T: WCOperator, vec: np.ndarray, lam: complex) -> float:
    """||T v - lambda v|| / ||v|| in the space norm on indices <= order/4.

    The quarter-order guard band is where truncated composition is
    pollution-free: the influence of the discarded tail on coefficient n
    scales like max_rho (max_|z|=rho |psi|)^N / rho^n, negligible for
    n <= order/4 and order-one around order/2.
    """
    guard = T.order // 4
    image = T.coeff_matrix() @ vec
    diff = image[: guard + 1] - lam * vec[: guard + 1]
    w = monomial_norms(T.space, T.order)
    num = float(np.linalg.norm(diff * w[: guard + 1]))
    den = float(np.linalg.norm(vec * w))
    return num / den if den > 0 else math.inf


def find_eigenvector(T: WCOperator, lam: complex, tol: float = 1e-6,
                     max_iterations: int = 30) -> tuple[TaylorSeries, float, int]:
    """Base eigenvector for T at lambda.

    Seeds with e_w, w = Log(lambda)/delta, which is exact for the unweighted
    operator; for general weights the seed is refined by inverse iteration on
    the finite section. Raises NoEigenvectorFound if the guarded residual
    never drops below tol (expected when lambda is outside the annulus).
    """
    lam = complex(lam)
    if lam == 0:
        raise NoEigenvectorFound("lambda = 0 is never an eigenvalue of an invertible operator")
    w = cmath.log(lam) / T.psi.delta
    seed = eigenfunction(T.psi, w, T.order, normalize=True)
    vec = seed.coeffs / np.linalg.norm(seed.coeffs)
    # e_w solves the eigen-relation formally for every w but belongs to the
    # space only for |Re w| < gamma; outside that strip the seed is just a
    # starting guess and must not be accepted on its residual alone
    member = abs(w.real) < T.space.gamma
    best = _guarded_residual(T, vec, lam) if member else math.inf
    iterations = 0
    if best >= tol:
        a = T.coeff_matrix() - lam * np.eye(T.order + 1)
        try:
            solver = np.linalg.inv(a)
        except np.linalg.LinAlgError:
            solver = np.linalg.inv(a + 1e-12 * np.eye(T.order + 1))
        while iterations < max_iterations:
            iterations += 1
            vec_new = solver @ vec
            nrm = np.linalg.norm(vec_new)
            if not np.isfinite(nrm) or nrm == 0.0:
                break
            vec_new = vec_new / nrm
            res = _guarded_residual(T, vec_new, lam)
            vec = vec_new
            if res < best:
                best = res
            if res < tol:
                best = res
                break
    if best >= tol:
        raise NoEigenvectorFound(
            f"no eigenvector with guarded residual < {tol:g} at lambda = {lam} "
            f"(best {best:.3e} after {iterations} iterations)"
        )
    return TaylorSeries(vec), best, iterations


def kernel_probe(T: WCOperator, lam: complex, K: int,
                 tol: float = 1e-6) -> KernelProbe:
    """Probe dim ker(lambda - T) >= 2K+1 through the Gram matrix of g_k f.

    Builds f_k = g_k * f from a base eigenvector f, checks the eigen-relation
    residual of each f_k, and returns the numerical rank of the Gram matrix
    of the unit-normalized family in the space inner product.
    """
    base, base_res, iters = find_eigenvector(T, lam, tol=tol)
    gk = gk_family(T.psi, K, T.order, normalize=True)
    w2 = monomial_norms(T.space, T.order) ** 2
    vectors = {}
    residuals = {}
    for k, g in gk.items():
        fk = mul(g, base).coeffs
        fk = fk / math.sqrt(float(np.sum(np.abs(fk) ** 2 * w2)))
        vectors[k] = fk
        residuals[k] = _guarded_residual(T, fk, lam)
    ks = sorted(vectors)
    V = np.column_stack([vectors[k] for k in ks])
    gram = (V.conj().T * w2) @ V
    sv = np.linalg.svd(gram, compute_uv=False)
    rank = int(np.sum(sv > GRAM_RANK_THRESHOLD * sv[0]))
    return KernelProbe(
        K=K,
        rank=rank,
        min_singular_value=float(sv.min()),
        singular_values=sv,
        eigenvector_residuals=residuals,
        base_residual=base_res,
        base_iterations=iters,
    )


# ---------------------------------------------------------------------------
# Surjectivity probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SurjectivityProbe:
    max_residual: float
    per_target: list
    mu: float
    nu: float

    def as_dict(self) -> dict:
        return {
            "num_targets": len(self.per_target),
            "max_residual": self.max_residual,
            "mu": self.mu,
            "nu": self.nu,
            "methods": [t["method"] for t in self.per_target],
        }


def _split_exponents(T: WCOperator, lam: complex, margin: float = 2.0):
    """mu, nu with A+ psi'(a)^(mu-gamma) = |lambda|/margin and
    B- psi'(b)^(nu-gamma) = margin |lambda| (clamped at 0)."""
    g = T.space.gamma
    d = T.psi.delta
    la = T.psi.lambda_a
    mu = math.log(margin * T.u.A_plus * la ** (-g) / abs(lam)) / d
    nu = math.log(margin * abs(lam) * la ** (-g) / T.u.B_minus) / d
    return max(0.0, mu), max(0.0, nu)


def _guarded_solution_residual(T: WCOperator, x: np.ndarray, y: np.ndarray,
                               lam: complex) -> float:
    """Relative defect of (lambda - T)x = y on the pollution-free band."""
    guard = T.order // 4
    defect = lam * x - T.coeff_matrix() @ x
    w = monomial_norms(T.space, T.order)
    num = float(np.linalg.norm((defect - y)[: guard + 1] * w[: guard + 1]))
    den = float(np.linalg.norm(y * w))
    return num / den if den > 0 else math.inf


def surjectivity_probe(T: WCOperator, lam: complex, targets: list,
                       terms: int = 80, tol: float = 1e-3,
                       prediction: AnnulusPrediction | None = None) -> SurjectivityProbe:
    """For each target y, produce x with (lambda - T)x ~= y and report residuals.

    Strategy: split y = y1 + y2 with y1 divisible by (a-z)^mu and y2 by
    (b-z)^nu; solve the y1 piece by the forward resolvent of the mu-twisted
    operator and the y2 piece by the backward resolvent of the nu-twisted
    one, then undo the divisions. Falls back to regularized least squares on
    the finite section when the series route misses the tolerance. Raises
    ProbeFailed (carrying the probe) if any target stays above tolerance.
    """
    lam = complex(lam)
    pred = prediction or predict_annuli(T.u, T.psi, T.space)
    order = T.order

    plain = abs(lam) > 1.05 * pred.outer_upper
    mu = nu = 0.0
    if not plain:
        mu, nu = _split_exponents(T, lam)
    T_mu = T if mu == 0.0 else WCOperator(twisted_weight(T.u, T.psi, mu, 0.0, order),
                                          T.psi, T.space, order)
    T_nu = T if nu == 0.0 else WCOperator(twisted_weight(T.u, T.psi, 0.0, nu, order),
                                          T.psi, T.space, order)
    T_nu_inv = T_nu.inverse_operator()
    omega_a = fractional_power(T.psi.a, mu, order)
    omega_a_inv = fractional_power(T.psi.a, -mu, order)
    omega_b = fractional_power(T.psi.b, nu, order)
    omega_b_inv = fractional_power(T.psi.b, -nu, order)

    per_target = []
    for y in targets:
        y = y.truncate(order)
        yvec = y.coeffs
        entry = {"method": "split", "residual": math.inf, "terms": terms}
        try:
            if plain:
                r = resolvent_forward(T, y, lam, terms, prediction=pred)
                x = r.series.coeffs
                entry["method"] = "neumann"
            else:
                y1, y2 = decompose(y, T.psi, mu, nu)
                x = np.zeros(order + 1, dtype=np.complex128)
                if np.any(y1.coeffs):
                    y1_t = mul(y1, omega_a_inv)
                    r1 = resolvent_forward(T_mu, y1_t, lam, terms)
                    x = x + mul(omega_a, r1.series).coeffs
                if np.any(y2.coeffs):
                    y2_t = mul(y2, omega_b_inv)
                    r2 = resolvent_backward(T_nu, y2_t, lam, terms, inverse_op=T_nu_inv)
                    x = x - mul(omega_b, r2.series).coeffs
            entry["residual"] = _guarded_solution_residual(T, x, yvec, lam)
        except SeriesDiverging as exc:
            entry["method"] = "split(diverged)"
            entry["error"] = str(exc)
        if entry["residual"] > tol:
            xf, res = _least_squares_solve(T, yvec, lam)
            if res < entry["residual"]:
                entry["residual"] = res
                entry["method"] = entry["method"] + "+lstsq"
        per_target.append(entry)

    max_res = max(t["residual"] for t in per_target)
    probe = SurjectivityProbe(max_residual=max_res, per_target=per_target, mu=mu, nu=nu)
    if max_res > tol:
        err = ProbeFailed(
            f"surjectivity probe residual {max_res:.3e} above tolerance {tol:g}",
            best_residual=max_res,
        )
        err.probe = probe
        raise err
    return probe


def _least_squares_solve(T: WCOperator, yvec: np.ndarray, lam: complex):
    a = lam * np.eye(T.order + 1) - T.coeff_matrix()
    x, *_ = np.linalg.lstsq(a, yvec, rcond=1e-12)
    return x, _guarded_solution_residual(T, x, yvec, lam)


# ---------------------------------------------------------------------------
# Certification report
# ---------------------------------------------------------------------------

@dataclass
class UniversalityReport:
    inputs: dict
    annulus: dict
    window_check: bool
    kernel: dict | None
    surjectivity: dict | None
    verdict: str
    diagnostics: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "inputs": self.inputs,
            "annulus": self.annulus,
            "window_check": self.window_check,
            "kernel_probe": self.kernel,
            "surjectivity_probe": self.surjectivity,
            "verdict": self.verdict,
            "diagnostics": self.diagnostics,
        }


def default_target_battery(order: int, seed: int = 0, max_degree: int = 8,
                           extra: int = 3) -> list:
    """Monomials z^j, j <= max_degree, plus `extra` seeded random polynomials."""
    targets = []
    for j in range(max_degree + 1):
        c = np.zeros(order + 1, dtype=np.complex128)
        c[j] = 1.0
        targets.append(TaylorSeries(c))
    rng = np.random.default_rng(seed)
    for _ in range(extra):
        c = np.zeros(order + 1, dtype=np.complex128)
        c[: max_degree + 1] = rng.standard_normal(max_degree + 1) \
            + 1j * rng.standard_normal(max_degree + 1)
        targets.append(TaylorSeries(c))
    return targets


def caradus_report(u: WeightSymbol, psi: Automorphism, space: SpaceSpec,
                   lam: complex, order: int, K: int = 5,
                   tolerance: float = 1e-3, seed: int = 0,
                   terms: int = 80) -> UniversalityReport:
    """Assemble the universality certification report for u C_psi - lambda I.

    Never raises: probe failures are recorded in the diagnostics and turn
    the verdict to 'failed'. Verdict 'certified_at_scale' requires a nonempty
    window containing lambda, full Gram rank 2K+1, and a surjectivity probe
    below tolerance. The probe depth is finite: the kernel is certified up to
    rank 2K+1, never literally infinite.
    """
    lam = complex(lam)
    T = WCOperator(u, psi, space, order)
    pred = predict_annuli(u, psi, space)
    inputs = {
        "symbol": u.source,
        "automorphism": {
            "a": psi.a,
            "b": psi.b,
            "lambda_a": psi.lambda_a,
            "delta": psi.delta,
            "r_canonical": psi.r_canonical,
        },
        "space": space.describe(),
        "gamma": space.gamma,
        "lambda": lam,
        "N": order,
        "K": K,
        "tolerance": tolerance,
        "seed": seed,
        "terms": terms,
        "branch_convention": "log((b-z)/(a-z)) fixed by principal value at z=0; "
                             "boundary powers (c-z)^s via principal log(1-z/c)",
        "sampling": u.diagnostics,
    }
    diagnostics = []
    window_ok = pred.universality_window_nonempty and pred.in_window(lam)
    if not pred.universality_window_nonempty:
        diagnostics.append("universality window is empty for this weight/space")
        return UniversalityReport(inputs=inputs, annulus=pred.as_dict(),
                                  window_check=False, kernel=None, surjectivity=None,
                                  verdict="window_empty", diagnostics=diagnostics)
    if not pred.in_window(lam):
        diagnostics.append(
            f"|lambda| = {abs(lam):.6g} outside the open window "
            f"({pred.inclusion_inner:.6g}, {pred.inclusion_outer:.6g})"
        )

    kernel_dict = None
    surj_dict = None
    failed = False
    try:
        kp = kernel_probe(T, lam, K)
        kernel_dict = kp.as_dict()
        if kp.rank != 2 * K + 1:
            failed = True
            diagnostics.append(f"Gram rank {kp.rank} != {2 * K + 1}")
    except NoEigenvectorFound as exc:
        failed = True
        diagnostics.append(f"NoEigenvectorFound: {exc}")

    try:
        sp = surjectivity_probe(T, lam, default_target_battery(order, seed=seed),
                                terms=terms, tol=tolerance)
        surj_dict = sp.as_dict()
    except ProbeFailed as exc:
        failed = True
        surj_dict = exc.probe.as_dict() if hasattr(exc, "probe") else None
        diagnostics.append(f"ProbeFailed: {exc}")

    if not window_ok:
        verdict = "failed"
    elif failed:
        verdict = "failed"
    else:
        verdict = "certified_at_scale"
    return UniversalityReport(inputs=inputs, annulus=pred.as_dict(),
                              window_check=window_ok, kernel=kernel_dict,
                              surjectivity=surj_dict, verdict=verdict,
                              diagnostics=diagnostics)
