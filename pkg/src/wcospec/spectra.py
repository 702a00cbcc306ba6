"""Spectral predictions and numerical estimates for u C_psi.

The four annulus radii come from the boundary moduli of the weight and the
fixed-point derivatives; the Gelfand sequences and the two resolvent series
provide independent numerical evidence at the working truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EigSolverFailure, IllConditioned, SeriesDiverging
from .mobius import Automorphism, mobius_apply
from .series import TaylorSeries
from .spaces import SpaceSpec, coeff_norm
from .symbolparse import WeightSymbol
from .wco import GalerkinMatrix, WCOperator

#: geometric rate beyond which a resolvent series is flagged slow
SLOW_CONVERGENCE_RATE = 0.8
#: consecutive growing terms that trigger divergence detection
DIVERGENCE_RUN = 5

EIGENVALUE_CAVEAT = (
    "finite-section eigenvalues of a non-normal operator; spectral pollution "
    "is possible and no convergence to the true spectrum is claimed"
)


@dataclass(frozen=True)
class AnnulusPrediction:
    """Predicted spectral annuli for an invertible weighted composition
    operator with hyperbolic symbol.

    ``[inner_lower, outer_upper]`` contains the spectrum;
    ``[inclusion_inner, inclusion_outer]`` is contained in it when the
    universality window is nonempty (inclusion_inner < inclusion_outer).
    """

    outer_upper: float
    inner_lower: float
    inclusion_inner: float
    inclusion_outer: float

    @property
    def universality_window_nonempty(self) -> bool:
        return self.inclusion_inner < self.inclusion_outer

    def contains(self, lam: complex) -> bool:
        return self.inner_lower <= abs(lam) <= self.outer_upper

    def in_window(self, lam: complex) -> bool:
        return self.inclusion_inner < abs(lam) < self.inclusion_outer

    def as_dict(self) -> dict:
        return {
            "outer_upper": self.outer_upper,
            "inner_lower": self.inner_lower,
            "inclusion_inner": self.inclusion_inner,
            "inclusion_outer": self.inclusion_outer,
            "universality_window_nonempty": self.universality_window_nonempty,
        }


def predict_annuli(u: WeightSymbol, psi: Automorphism, space: SpaceSpec) -> AnnulusPrediction:
    """Annulus radii from the boundary moduli A+-, B+- and the multipliers.

    outer_upper  = max(A+ / psi'(a)^g, B+ / psi'(b)^g)
    inner_lower  = min(A- / psi'(a)^g, B- / psi'(b)^g)
    inclusion    = [B+ / psi'(b)^g, A- / psi'(a)^g]
    """
    g = space.gamma
    da = psi.lambda_a ** g
    db = psi.lambda_b ** g
    return AnnulusPrediction(
        outer_upper=max(u.A_plus / da, u.B_plus / db),
        inner_lower=min(u.A_minus / da, u.B_minus / db),
        inclusion_inner=u.B_plus / db,
        inclusion_outer=u.A_minus / da,
    )


@dataclass(frozen=True)
class GelfandSequence:
    """Root-test sequence ||T^n f||^(1/n) with tail diagnostics."""

    values: np.ndarray
    tail_fractions: np.ndarray
    tail_suspect: np.ndarray

    def root_estimate(self, n: int | None = None) -> float:
        n = len(self.values) if n is None else n
        return float(self.values[n - 1])

    def ratio_estimate(self, n0: int, n1: int | None = None) -> float:
        """Geometric-mean growth between steps n0 and n1; cancels the
        subexponential prefactor of the root test."""
        n1 = len(self.values) if n1 is None else n1
        l0 = n0 * math.log(self.values[n0 - 1])
        l1 = n1 * math.log(self.values[n1 - 1])
        return math.exp((l1 - l0) / (n1 - n0))


def gelfand_radius(T: WCOperator, f: TaylorSeries, n_max: int) -> GelfandSequence:
    """Vector iterates ||T^n f||^(1/n), n = 1..n_max, with guard diagnostics.

    Iterates run through the finite section with per-step normalization, so
    arbitrarily long products stay in range. Entries where more than half of
    the squared norm sits above index order/2 are flagged tail-suspect.
    """
    order = T.order
    if f.effective_degree() > order // 16:
        raise ValueError("gelfand_radius expects deg f <= order/16 (guard bands)")
    norms0 = coeff_norm(f.truncate(order).coeffs, T.space)
    if norms0 == 0.0:
        raise ValueError("gelfand_radius needs a nonzero start vector")
    m = T.coeff_matrix()
    vec = f.truncate(order).coeffs.copy()
    guard = order // 2
    acc_log = 0.0
    values = np.empty(n_max)
    tail_fractions = np.empty(n_max)
    for n in range(1, n_max + 1):
        vec = m @ vec
        r = coeff_norm(vec, T.space)
        if not np.isfinite(r) or r == 0.0:
            raise IllConditioned(f"iterate norm degenerate at step {n}")
        acc_log += math.log(r)
        values[n - 1] = math.exp(acc_log / n)
        total = float(np.sum(np.abs(vec) ** 2))
        tail_fractions[n - 1] = float(np.sum(np.abs(vec[guard + 1:]) ** 2) / total)
        vec = vec / r
    return GelfandSequence(values=values, tail_fractions=tail_fractions,
                           tail_suspect=tail_fractions > 0.4)


def gelfand_radius_sampled(T: WCOperator, a_exponent: float, b_exponent: float,
                           n_max: int, rho: float = 1.0 - 2.0 ** -10,
                           samples: int = 4096) -> GelfandSequence:
    """Root-test sequence for probes f = (a-z)^p (b-z)^q by circle quadrature.

    The iterate (u C_psi)^n f = u_n (f o psi_n) is evaluated pointwise on
    |z| = rho: the weight product accumulates in the log domain along the
    orbit, and the distances |a - psi_n(z)|, |b - psi_n(z)| come from the
    fixed-point factorization of the iterated Moebius matrix, which stays
    stable long after a - psi_n(z) itself has collapsed below rounding.
    This is the estimator of record for attainment of the outer radius:
    finite-section iterates of truncated probes revert to the polynomial
    growth rate and stay strictly inside it.
    """
    psi = T.psi
    a, b = psi.a, psi.b
    # eigenvalue of the det-1 matrix at the attractive fixed point; |s| > 1
    s = psi.matrix[1, 0] * a + psi.matrix[1, 1]
    s2 = 1.0 / (s * s)
    theta = 2.0 * np.pi * np.arange(samples) / samples
    z = rho * np.exp(1j * theta)
    log_az = np.log(np.abs(a - z))
    log_bz = np.log(np.abs(b - z))
    log_ab = math.log(abs(a - b))
    acc_logu = np.zeros(samples)
    w = z.copy()
    values = np.empty(n_max)
    s2n = 1.0 + 0.0j
    for n in range(1, n_max + 1):
        vals = np.abs(np.asarray(T.u.evaluate(w)))
        if not np.all(np.isfinite(vals)) or np.any(vals <= 0.0):
            raise IllConditioned("weight degenerate along an orbit sample")
        acc_logu = acc_logu + np.log(vals)
        w = mobius_apply(psi.matrix, w)
        s2n *= s2
        log_den = np.log(np.abs(z - b + s2n * (a - z)))
        log_dist_a = log_az + log_ab + n * np.log(abs(s2)) - log_den
        log_dist_b = log_bz + log_ab - log_den
        logvals = acc_logu + a_exponent * log_dist_a + b_exponent * log_dist_b
        peak = logvals.max()
        log_mean_sq = 2.0 * peak + math.log(float(np.mean(np.exp(2.0 * (logvals - peak)))))
        values[n - 1] = math.exp(0.5 * log_mean_sq / n)
    zeros = np.zeros(n_max)
    return GelfandSequence(values=values, tail_fractions=zeros,
                           tail_suspect=zeros.astype(bool))


@dataclass(frozen=True)
class EigenvalueDiagnostic:
    values: np.ndarray
    caveat: str = EIGENVALUE_CAVEAT


def truncated_eigenvalues(M: GalerkinMatrix) -> EigenvalueDiagnostic:
    """Eigenvalues of the dense finite section, sorted by decreasing modulus."""
    try:
        vals = np.linalg.eigvals(M.entries)
    except np.linalg.LinAlgError as exc:
        raise EigSolverFailure(str(exc)) from exc
    order = np.argsort(-np.abs(vals))
    return EigenvalueDiagnostic(values=vals[order])


@dataclass(frozen=True)
class ResolventResult:
    """Partial resolvent sum with its certification data.

    ``residual`` is computed directly from the defining identity at the
    returned partial sum; ``term_norms`` holds the norms of the summed
    terms. ``truncated_at_floor`` marks sums rolled back to their optimal
    truncation when the finite-section junk component took over.
    """

    series: TaylorSeries
    residual: float
    residual_history: np.ndarray
    term_norms: np.ndarray
    terms_used: int
    margin: float
    slow_convergence: bool
    truncated_at_floor: bool
    identity: str


class _TermMonitor:
    """Detects divergence and the finite-section floor takeover.

    Terms of a valid resolvent series decay geometrically until they hit a
    junk component of the finite section, which then grows like |lambda|^n.
    Growth without any prior decay means lambda is outside the validity
    region (SeriesDiverging, including the documented 5-step monotone-growth
    trigger); growth long after a real decay is the takeover, at which point
    the sum is rolled back to its optimal truncation.
    """

    def __init__(self, kind):
        self.kind = kind
        self.norms = []
        self.best = math.inf
        self.best_index = -1

    def update(self, value, index) -> bool:
        """Record a term norm; True means stop and roll back to best_index."""
        self.norms.append(value)
        if value < self.best:
            self.best = value
            self.best_index = index
            return False
        decayed = self.best < 0.7 * self.norms[0]
        run = self.norms[-DIVERGENCE_RUN:]
        monotone_growth = (len(run) == DIVERGENCE_RUN and np.all(np.diff(run) > 0)
                           and run[-1] > 1.2 * run[0])
        takeover = value > 10.0 * self.best
        if (monotone_growth or takeover) and not decayed:
            raise SeriesDiverging(
                f"{self.kind} resolvent terms grow without prior decay; "
                "lambda is outside the series' validity region"
            )
        return takeover and decayed


def resolvent_forward(T: WCOperator, f: TaylorSeries, lam: complex, terms: int,
                      prediction: AnnulusPrediction | None = None) -> ResolventResult:
    """Partial sums of F = sum_n T^n f / lambda^(n+1), solving (lambda - T)F = f.

    Valid (terms contracting) for |lambda| above the inclusion annulus' inner
    radius; the margin |lambda| / inclusion_inner is reported. Five
    consecutive growing terms raise SeriesDiverging.
    """
    lam = complex(lam)
    if lam == 0:
        raise ValueError("lambda must be nonzero for the forward resolvent")
    pred = prediction or predict_annuli(T.u, T.psi, T.space)
    margin = abs(lam) / pred.inclusion_inner if pred.inclusion_inner > 0 else math.inf
    rate = pred.inclusion_inner / abs(lam)
    m = T.coeff_matrix()
    fvec = f.truncate(T.order).coeffs
    fnorm = coeff_norm(fvec, T.space)
    vec = fvec.copy()
    total = vec / lam
    monitor = _TermMonitor("forward")
    monitor.update(fnorm / abs(lam), 0)
    best_total = total.copy()
    scale = 1.0 / lam
    truncated = False
    for n in range(1, terms + 1):
        vec = m @ vec
        scale /= lam
        term = vec * scale
        total = total + term
        stop = monitor.update(coeff_norm(term, T.space), n)
        if monitor.best_index == n:
            best_total = total.copy()
        if stop:
            truncated = True
            break
    if truncated:
        total = best_total
    terms_used = monitor.best_index if truncated else len(monitor.norms) - 1
    term_norms = np.array(monitor.norms)
    defect = lam * total - (m @ total) - fvec
    residual = coeff_norm(defect, T.space) / fnorm
    return ResolventResult(
        series=TaylorSeries(total),
        residual=residual,
        residual_history=term_norms[1:] * abs(lam) / fnorm,
        term_norms=term_norms,
        terms_used=terms_used,
        margin=margin,
        slow_convergence=rate >= SLOW_CONVERGENCE_RATE,
        truncated_at_floor=truncated,
        identity="(lambda - T) F = f",
    )


def resolvent_backward(T: WCOperator, f: TaylorSeries, lam: complex, terms: int,
                       prediction: AnnulusPrediction | None = None,
                       inverse_op: WCOperator | None = None) -> ResolventResult:
    """Partial sums of G = sum_n lambda^n T^(-(n+1)) f, solving (T - lambda)G = f.

    Valid for |lambda| below the inclusion annulus' outer radius; the margin
    inclusion_outer / |lambda| is reported. (The inverse operator is the
    weighted composition operator with symbol psi^{-1}.)
    """
    lam = complex(lam)
    pred = prediction or predict_annuli(T.u, T.psi, T.space)
    margin = pred.inclusion_outer / abs(lam) if lam != 0 else math.inf
    rate = abs(lam) / pred.inclusion_outer if pred.inclusion_outer > 0 else math.inf
    Tinv = inverse_op or T.inverse_operator()
    minv = Tinv.coeff_matrix()
    m = T.coeff_matrix()
    fvec = f.truncate(T.order).coeffs
    fnorm = coeff_norm(fvec, T.space)
    w = minv @ fvec  # T^(-1) f
    total = w.copy()
    monitor = _TermMonitor("backward")
    monitor.update(coeff_norm(w, T.space), 0)
    best_total = total.copy()
    truncated = False
    for n in range(1, terms + 1):
        w = lam * (minv @ w)
        total = total + w
        stop = monitor.update(coeff_norm(w, T.space), n)
        if monitor.best_index == n:
            best_total = total.copy()
        if stop:
            truncated = True
            break
    if truncated:
        total = best_total
    terms_used = monitor.best_index if truncated else len(monitor.norms) - 1
    term_norms = np.array(monitor.norms)
    defect = (m @ total) - lam * total - fvec
    residual = coeff_norm(defect, T.space) / fnorm
    return ResolventResult(
        series=TaylorSeries(total),
        residual=residual,
        residual_history=term_norms[1:] * abs(lam) / fnorm,
        term_norms=term_norms,
        terms_used=terms_used,
        margin=margin,
        slow_convergence=rate >= SLOW_CONVERGENCE_RATE,
        truncated_at_floor=truncated,
        identity="(T - lambda) G = f",
    )
