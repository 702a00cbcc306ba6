"""Hardy and weighted Bergman space norms.

At p = 2 both spaces have orthogonal monomials, so norms are coefficient
sums weighted by closed-form monomial norms. For p != 2 only quadrature
of the p-mean integrand is offered.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import TruncationSuspectWarning, UnsupportedExponent
from .series import TaylorSeries

#: angular nodes for circle quadrature (trapezoid rule is spectrally
#: accurate for trigonometric integrands)
CIRCLE_NODES = 8192
#: radial Gauss-Legendre nodes for Bergman area quadrature
RADIAL_NODES = 256
#: tail window and mass threshold for the truncation diagnostic
TAIL_WINDOW = 16
TAIL_MASS_THRESHOLD = 1e-6


@dataclass(frozen=True)
class SpaceSpec:
    """Hardy space (kind='hardy') or weighted Bergman space (kind='bergman').

    ``gamma`` is the exponent making (psi')^gamma C_psi an isometry:
    1/p for Hardy, (sigma+2)/p for Bergman.
    """

    kind: str = "hardy"
    sigma: float = 0.0
    p: float = 2.0

    def __post_init__(self):
        if self.kind not in ("hardy", "bergman"):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind == "bergman" and self.sigma <= -1.0:
            raise ValueError("Bergman weight parameter must exceed -1")
        if self.p < 1.0:
            raise ValueError("exponent p must be >= 1")

    @property
    def gamma(self) -> float:
        if self.kind == "hardy":
            return 1.0 / self.p
        return (self.sigma + 2.0) / self.p

    def describe(self) -> str:
        if self.kind == "hardy":
            return f"hardy(p={self.p:g})"
        return f"bergman(sigma={self.sigma:g}, p={self.p:g})"

    @staticmethod
    def hardy(p: float = 2.0) -> "SpaceSpec":
        return SpaceSpec(kind="hardy", p=p)

    @staticmethod
    def bergman(sigma: float, p: float = 2.0) -> "SpaceSpec":
        return SpaceSpec(kind="bergman", sigma=sigma, p=p)


def _require_p2(space: SpaceSpec, what: str):
    if space.p != 2.0:
        raise UnsupportedExponent(f"{what} requires p = 2, got p = {space.p}")


def monomial_norm(space: SpaceSpec, n: int) -> float:
    """Norm of z^n at p = 2.

    Hardy: 1. Bergman: (pi n! Gamma(sigma+1) / Gamma(n+sigma+2))^(1/2),
    from polar integration of |z|^(2n) (1-|z|^2)^sigma over the disk.
    """
    _require_p2(space, "monomial_norm")
    if space.kind == "hardy":
        return 1.0
    s = space.sigma
    return math.exp(0.5 * (math.log(math.pi) + math.lgamma(n + 1.0)
                           + math.lgamma(s + 1.0) - math.lgamma(n + s + 2.0)))


def monomial_norms(space: SpaceSpec, order: int) -> np.ndarray:
    """Vector of monomial norms for degrees 0..order."""
    _require_p2(space, "monomial_norms")
    if space.kind == "hardy":
        return np.ones(order + 1)
    return np.array([monomial_norm(space, n) for n in range(order + 1)])


def coeff_norm(coeffs: np.ndarray, space: SpaceSpec) -> float:
    w = monomial_norms(space, len(coeffs) - 1)
    return float(np.sqrt(np.sum((np.abs(coeffs) * w) ** 2)))


def norm(f: TaylorSeries, space: SpaceSpec, warn_tail: bool = True) -> float:
    """Space norm from coefficients (p = 2 only).

    Emits TruncationSuspectWarning when the top TAIL_WINDOW coefficients
    carry more than TAIL_MASS_THRESHOLD of the squared norm: the stored
    truncation is then too short for the value to be trusted.
    """
    _require_p2(space, "norm")
    w = monomial_norms(space, f.truncation_order)
    weighted_sq = (np.abs(f.coeffs) * w) ** 2
    total = float(np.sum(weighted_sq))
    if total == 0.0:
        return 0.0
    if warn_tail and f.truncation_order > TAIL_WINDOW:
        tail = float(np.sum(weighted_sq[-(TAIL_WINDOW + 1):]))
        if tail > TAIL_MASS_THRESHOLD * total:
            warnings.warn(
                f"tail coefficients carry {tail / total:.2e} of the squared norm",
                TruncationSuspectWarning,
                stacklevel=2,
            )
    return math.sqrt(total)


def tail_mass_fraction(f: TaylorSeries, space: SpaceSpec, window: int = TAIL_WINDOW) -> float:
    """Fraction of the squared norm in the top `window` coefficients."""
    _require_p2(space, "tail_mass_fraction")
    w = monomial_norms(space, f.truncation_order)
    weighted_sq = (np.abs(f.coeffs) * w) ** 2
    total = float(np.sum(weighted_sq))
    if total == 0.0:
        return 0.0
    return float(np.sum(weighted_sq[-(window + 1):]) / total)


def inner_product(f: TaylorSeries, g: TaylorSeries, space: SpaceSpec) -> complex:
    """Space inner product <f, g> at p = 2 (conjugate-linear in g)."""
    _require_p2(space, "inner_product")
    n = max(f.truncation_order, g.truncation_order)
    a, b = f.pad(n).coeffs, g.pad(n).coeffs
    w2 = monomial_norms(space, n) ** 2
    return complex(np.sum(a * np.conj(b) * w2))


def _circle_values(f: TaylorSeries, rho: float, nodes: int) -> np.ndarray:
    """Values of f on |z| = rho at `nodes` equispaced angles (FFT when the
    coefficient count fits under the node count)."""
    scaled = f.coeffs * np.power(rho, np.arange(f.coeffs.size))
    if f.coeffs.size <= nodes:
        padded = np.zeros(nodes, dtype=np.complex128)
        padded[: scaled.size] = scaled
        return np.fft.fft(padded)
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    return f.eval(rho * np.exp(1j * theta))


def circle_mean(f: TaylorSeries, rho: float, p: float, nodes: int = CIRCLE_NODES) -> float:
    """The p-mean (int |f(rho e^(i t))|^p dt / 2pi)^(1/p)."""
    vals = np.abs(_circle_values(f, rho, nodes))
    return float(np.mean(vals ** p) ** (1.0 / p))


def pnorm_quadrature(f: TaylorSeries, space: SpaceSpec, rho: float,
                     nodes: int = CIRCLE_NODES, radial_nodes: int = RADIAL_NODES) -> float:
    """Quadrature of the p-norm integrand at radius rho.

    Hardy: the circle p-mean at radius rho (nondecreasing in rho).
    Bergman: the area integral over |z| <= rho of |f|^p (1-|z|^2)^sigma,
    by Gauss-Legendre in the radius and trapezoid in the angle.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    p = space.p
    if space.kind == "hardy":
        return circle_mean(f, rho, p, nodes)
    x, w = np.polynomial.legendre.leggauss(radial_nodes)
    r = 0.5 * rho * (x + 1.0)
    wr = 0.5 * rho * w
    total = 0.0
    for ri, wi in zip(r, wr):
        mean_p = circle_mean(f, ri, p, nodes) ** p
        total += wi * mean_p * (1.0 - ri * ri) ** space.sigma * ri
    return float((2.0 * np.pi * total) ** (1.0 / p))
