"""Disk automorphisms: construction from boundary fixed-point data,
classification, iteration, and series expansion.

Maps are stored projectively as 2x2 complex matrices normalized to
determinant 1, which keeps iteration (matrix powers) numerically stable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidFixedPoints, InvalidMultiplier, NotAutomorphism, NotHyperbolic
from .series import TaylorSeries

_UNIT_TOL = 1e-10
_PARABOLIC_TOL = 1e-10


def _normalize_det1(m: np.ndarray) -> np.ndarray:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det == 0:
        raise NotAutomorphism("degenerate Moebius matrix (zero determinant)")
    return m / cmath.sqrt(det)


def mobius_apply(m: np.ndarray, z):
    """Evaluate (m00 z + m01)/(m10 z + m11); vectorized over z."""
    z = np.asarray(z, dtype=np.complex128)
    w = (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])
    return complex(w) if w.shape == () else w


def mobius_derivative(m: np.ndarray, z):
    """Derivative of the map at z (matrix assumed det-1 normalized)."""
    z = np.asarray(z, dtype=np.complex128)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    w = det / (m[1, 0] * z + m[1, 1]) ** 2
    return complex(w) if w.shape == () else w


def _preserves_disk(m: np.ndarray, tol=1e-9) -> bool:
    for z in (1.0, -1.0, 1.0j, cmath.exp(0.7j)):
        if abs(abs(mobius_apply(m, z)) - 1.0) > tol:
            return False
    return abs(mobius_apply(m, 0.0)) < 1.0 - 1e-12


def classify(m: np.ndarray) -> str:
    """Classify a disk automorphism: identity, elliptic, parabolic or hyperbolic.

    Uses the squared-trace invariant t = tr(M)^2 / det(M); for disk
    automorphisms t is real, with t > 4 hyperbolic, t = 4 parabolic (or the
    identity) and t < 4 elliptic.
    """
    m = np.asarray(m, dtype=np.complex128)
    if not _preserves_disk(m):
        raise NotAutomorphism("map does not preserve the unit disk")
    if abs(m[0, 1]) + abs(m[1, 0]) < _PARABOLIC_TOL * max(abs(m[0, 0]), abs(m[1, 1])) \
            and abs(m[0, 0] - m[1, 1]) < _PARABOLIC_TOL * abs(m[0, 0]):
        return "identity"
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    t = (m[0, 0] + m[1, 1]) ** 2 / det
    if abs(t.imag) > 1e-8 * max(1.0, abs(t.real)):
        raise NotAutomorphism("squared trace is not real; not a disk automorphism")
    if abs(t.real - 4.0) <= _PARABOLIC_TOL * 4.0:
        return "parabolic"
    return "hyperbolic" if t.real > 4.0 else "elliptic"


@dataclass(frozen=True)
class Automorphism:
    """Hyperbolic disk automorphism with boundary fixed points a, b.

    ``a`` is attractive, ``b`` repulsive; ``lambda_a`` is the derivative at
    ``a`` (in (0,1)), ``lambda_b = 1/lambda_a``, ``delta = -log lambda_a``,
    and ``r_canonical`` is the parameter of the conjugate canonical map
    ``z -> (r+z)/(1+rz)``. ``matrix`` holds the det-1 Moebius coefficients.
    """

    a: complex
    b: complex
    lambda_a: float
    matrix: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(np.asarray(self.matrix, dtype=np.complex128))
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def lambda_b(self) -> float:
        return 1.0 / self.lambda_a

    @property
    def delta(self) -> float:
        return -math.log(self.lambda_a)

    @property
    def r_canonical(self) -> float:
        return (1.0 - self.lambda_a) / (1.0 + self.lambda_a)

    def __call__(self, z):
        return mobius_apply(self.matrix, z)

    def deriv(self, z):
        return mobius_derivative(self.matrix, z)


def from_fixed_points(a, b, lambda_a) -> Automorphism:
    """Build the automorphism with given boundary fixed points and multiplier.

    The Moebius coefficients are
    ``psi(z) = ((b la - a) z + a b (1 - la)) / ((la - 1) z + b - a la)``
    with ``la = lambda_a``; the construction is validated by evaluating the
    map and its derivative at the fixed points.
    """
    a = complex(a)
    b = complex(b)
    lambda_a = float(lambda_a)
    if abs(abs(a) - 1.0) > _UNIT_TOL or abs(abs(b) - 1.0) > _UNIT_TOL:
        raise InvalidFixedPoints(f"fixed points must lie on the unit circle: |a|={abs(a)}, |b|={abs(b)}")
    if abs(a - b) <= _UNIT_TOL:
        raise InvalidFixedPoints("fixed points must be distinct")
    if not 0.0 < lambda_a < 1.0:
        raise InvalidMultiplier(f"attractive multiplier must lie in (0,1), got {lambda_a}")
    m = np.array(
        [
            [b * lambda_a - a, a * b * (1.0 - lambda_a)],
            [lambda_a - 1.0, b - a * lambda_a],
        ],
        dtype=np.complex128,
    )
    m = _normalize_det1(m)
    psi = Automorphism(a=a, b=b, lambda_a=lambda_a, matrix=m)
    for p in (a, b):
        if abs(psi(p) - p) > 1e-12 * 4:
            raise InvalidFixedPoints(f"constructed map does not fix {p}")
    if abs(psi.deriv(a) - lambda_a) > 1e-9:
        raise InvalidMultiplier("constructed map has wrong derivative at the attractive point")
    return psi


def canonical(r) -> Automorphism:
    """The canonical hyperbolic map z -> (r+z)/(1+rz), fixing -1 and 1."""
    r = float(r)
    if not 0.0 < r < 1.0:
        raise InvalidMultiplier(f"canonical parameter must lie in (0,1), got {r}")
    lambda_a = (1.0 - r) / (1.0 + r)
    return from_fixed_points(1.0, -1.0, lambda_a)


def canonical_r(psi: Automorphism) -> float:
    """The unique r in (0,1) with psi conjugate to z -> (r+z)/(1+rz).

    Solves (1-r)/(1+r) = psi'(a).
    """
    if not isinstance(psi, Automorphism):
        raise NotHyperbolic("canonical_r requires a hyperbolic automorphism")
    return psi.r_canonical


def iterate(psi: Automorphism, n: int) -> np.ndarray:
    """Moebius coefficients of the n-th iterate (n may be negative)."""
    if n == 0:
        return np.eye(2, dtype=np.complex128)
    m = psi.matrix if n > 0 else inverse(psi).matrix
    out = np.linalg.matrix_power(m, abs(int(n)))
    return _normalize_det1(out)


def inverse(psi: Automorphism) -> Automorphism:
    """Inverse automorphism; fixed-point roles swap and the multiplier is
    preserved: the attractive point of the inverse is b with derivative
    1/psi'(b) = psi'(a)."""
    m = psi.matrix
    inv = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=np.complex128)
    return Automorphism(a=psi.b, b=psi.a, lambda_a=psi.lambda_a, matrix=_normalize_det1(inv))


def to_series(m, order) -> TaylorSeries:
    """Expand (m00 z + m01)/(m10 z + m11) as a Taylor series.

    Geometric expansion in (m10/m11) z, valid because the pole of a disk
    automorphism lies outside the closed disk.
    """
    m = np.asarray(m, dtype=np.complex128)
    al, be, ga, de = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    if de == 0 or abs(ga / de) >= 1.0:
        raise NotAutomorphism("pole inside the closed disk; no disk expansion")
    q = -ga / de
    geo = np.power(q, np.arange(order + 1)) / de  # 1/(de + ga z)
    c = be * geo
    c[1:] += al * geo[:-1]
    return TaylorSeries(c)


def automorphism_series(psi: Automorphism, order) -> TaylorSeries:
    return to_series(psi.matrix, order)


def derivative_power_series(psi: Automorphism, s, order) -> TaylorSeries:
    """Series of (psi')^s on the disk, branch continuous with value
    (psi'(0))^s = (1/m11^2)^s at the origin.

    With the det-1 matrix, psi'(z) = 1/(m10 z + m11)^2, so
    (psi')^s = m11^(-2s) (1 + (m10/m11) z)^(-2s).
    """
    from .series import affine_power  # local to avoid cycle at import time

    m = psi.matrix
    ga, de = m[1, 0], m[1, 1]
    lead = cmath.exp(-2.0 * complex(s) * cmath.log(complex(de)))
    return affine_power(ga / de, -2.0 * complex(s), order).scale(lead)


def derivative_power_eval(psi: Automorphism, s, z):
    """Pointwise evaluator matching :func:`derivative_power_series`."""
    m = psi.matrix
    ga, de = m[1, 0], m[1, 1]
    z = np.asarray(z, dtype=np.complex128)
    w = np.exp(-2.0 * complex(s) * (cmath.log(complex(de)) + np.log(1.0 + (ga / de) * z)))
    return complex(w) if w.shape == () else w
