"""Truncated complex Taylor series on the unit disk.

All higher-level objects (weights, automorphism expansions, eigenfunctions,
resolvent sums) are represented as instances of :class:`TaylorSeries`: a
coefficient vector ``c[0..N]`` for ``sum c_k z^k`` together with the
truncation order ``N``. Arithmetic never reads beyond index ``N`` and always
truncates results back to the working order.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergentComposition, IllConditioned, LogAtZero

#: Coefficients beyond this magnitude are treated as numerical garbage by the
#: operations that opt into conditioning checks (operator iteration, Galerkin
#: assembly, weight analysis). Core arithmetic does not check, since bounded
#: analytic functions with extreme dynamic range are legitimate inputs.
ILL_CONDITIONED_THRESHOLD = 1e12


@dataclass(frozen=True)
class TaylorSeries:
    """Coefficients ``c[k]`` of ``z^k``, ``k = 0..truncation_order``."""

    coeffs: np.ndarray
    truncation_order: int = field(init=False)

    def __post_init__(self):
        c = np.ascontiguousarray(np.asarray(self.coeffs, dtype=np.complex128))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d array")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "truncation_order", c.size - 1)
        c.setflags(write=False)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def constant(value, order=0) -> "TaylorSeries":
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = value
        return TaylorSeries(c)

    @staticmethod
    def identity(order=1) -> "TaylorSeries":
        c = np.zeros(max(order, 1) + 1, dtype=np.complex128)
        c[1] = 1.0
        return TaylorSeries(c)

    @staticmethod
    def zero(order=0) -> "TaylorSeries":
        return TaylorSeries(np.zeros(order + 1, dtype=np.complex128))

    # -- basic queries --------------------------------------------------------

    def __len__(self):
        return self.coeffs.size

    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        """Horner evaluation; accepts scalars or numpy arrays."""
        z = np.asarray(z, dtype=np.complex128)
        acc = np.full(z.shape, self.coeffs[-1])
        for k in range(self.coeffs.size - 2, -1, -1):
            acc = acc * z + self.coeffs[k]
        if acc.shape == ():
            return complex(acc)
        return acc

    def pad(self, order) -> "TaylorSeries":
        if order <= self.truncation_order:
            return self
        c = np.zeros(order + 1, dtype=np.complex128)
        c[: self.coeffs.size] = self.coeffs
        return TaylorSeries(c)

    def truncate(self, order) -> "TaylorSeries":
        if order >= self.truncation_order:
            return self.pad(order)
        return TaylorSeries(self.coeffs[: order + 1])

    def effective_degree(self) -> int:
        """Index of the last nonzero coefficient (0 for the zero series)."""
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if nz.size else 0

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "TaylorSeries":
        return add(self, _coerce(other, self.truncation_order))

    def __radd__(self, other) -> "TaylorSeries":
        return self.__add__(other)

    def __sub__(self, other) -> "TaylorSeries":
        return add(self, _coerce(other, self.truncation_order).scale(-1.0))

    def __rsub__(self, other) -> "TaylorSeries":
        return _coerce(other, self.truncation_order).__sub__(self)

    def __mul__(self, other):
        if isinstance(other, TaylorSeries):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, TaylorSeries):
            return div(self, other)
        return self.scale(1.0 / other)

    def __neg__(self):
        return self.scale(-1.0)

    def scale(self, factor) -> "TaylorSeries":
        return TaylorSeries(self.coeffs * complex(factor))


def _coerce(x, order) -> TaylorSeries:
    if isinstance(x, TaylorSeries):
        return x
    return TaylorSeries.constant(complex(x), order)


def _common_order(f: TaylorSeries, g: TaylorSeries) -> int:
    return max(f.truncation_order, g.truncation_order)


def add(f: TaylorSeries, g: TaylorSeries) -> TaylorSeries:
    """Coefficientwise sum; the shorter operand is zero-padded."""
    n = _common_order(f, g)
    return TaylorSeries(f.pad(n).coeffs + g.pad(n).coeffs)


def mul(f: TaylorSeries, g: TaylorSeries) -> TaylorSeries:
    """Cauchy product truncated at the common order."""
    n = _common_order(f, g)
    a, b = f.coeffs, g.coeffs
    # full convolution then truncate; numpy convolve is fastest for our sizes
    c = np.convolve(a, b)[: n + 1]
    if c.size < n + 1:
        c = np.pad(c, (0, n + 1 - c.size))
    return TaylorSeries(c)


def div(f: TaylorSeries, g: TaylorSeries) -> TaylorSeries:
    """Series division f/g; requires g(0) != 0."""
    n = _common_order(f, g)
    a, b = f.pad(n).coeffs, g.pad(n).coeffs
    if b[0] == 0:
        raise ZeroDivisionError("series division by a series vanishing at 0")
    q = np.zeros(n + 1, dtype=np.complex128)
    inv0 = 1.0 / b[0]
    for k in range(n + 1):
        s = a[k] - np.dot(b[1 : k + 1], q[k - 1 :: -1][:k])
        q[k] = s * inv0
    return TaylorSeries(q)


def reciprocal(g: TaylorSeries) -> TaylorSeries:
    return div(TaylorSeries.constant(1.0, g.truncation_order), g)


def pow_int(f: TaylorSeries, m: int) -> TaylorSeries:
    """Integer power by repeated squaring; negative m via reciprocal."""
    if m < 0:
        return pow_int(reciprocal(f), -m)
    result = TaylorSeries.constant(1.0, f.truncation_order)
    base = f
    while m:
        if m & 1:
            result = mul(result, base)
        base = mul(base, base) if m > 1 else base
        m >>= 1
    return result


def compose(f: TaylorSeries, phi: TaylorSeries) -> TaylorSeries:
    """Taylor coefficients of f(phi(z)), truncated at the common order.

    Horner-style: one series multiplication per retained coefficient of f,
    walking from the top coefficient down. Trailing zero coefficients of f
    are skipped, so composing a degree-d polynomial costs d multiplications.
    """
    if abs(complex(phi.coeffs[0])) >= 1.0:
        raise DivergentComposition(
            f"composition point phi(0) = {complex(phi.coeffs[0]):.6g} is outside the open disk"
        )
    n = _common_order(f, phi)
    phi = phi.pad(n)
    d = f.effective_degree()
    acc = TaylorSeries.constant(f.coeffs[d], n)
    for k in range(d - 1, -1, -1):
        acc = mul(acc, phi)
        if f.coeffs[k] != 0:
            acc = add(acc, TaylorSeries.constant(f.coeffs[k], n))
    return acc


def derivative(f: TaylorSeries) -> TaylorSeries:
    """Term-by-term derivative; order drops by one (constants map to 0)."""
    if f.truncation_order == 0:
        return TaylorSeries.zero(0)
    k = np.arange(1, f.coeffs.size)
    return TaylorSeries(f.coeffs[1:] * k)


def antiderivative(f: TaylorSeries, constant=0.0) -> TaylorSeries:
    k = np.arange(1, f.coeffs.size + 1)
    c = np.empty(f.coeffs.size + 1, dtype=np.complex128)
    c[0] = constant
    c[1:] = f.coeffs / k
    return TaylorSeries(c[: f.coeffs.size])


def exp(f: TaylorSeries) -> TaylorSeries:
    """Series exponential. Works for any constant term.

    Uses the recurrence from g' = f' g, seeded with exp(f(0)).
    """
    n = f.truncation_order
    a = f.coeffs
    g = np.zeros(n + 1, dtype=np.complex128)
    g[0] = cmath.exp(complex(a[0]))
    # g_k = (1/k) * sum_{j=1..k} j * a_j * g_{k-j}
    ja = np.arange(n + 1) * a
    for k in range(1, n + 1):
        g[k] = np.dot(ja[1 : k + 1], g[k - 1 :: -1][:k]) / k
    return TaylorSeries(g)


def log(f: TaylorSeries) -> TaylorSeries:
    """Series logarithm with principal value at the origin.

    The result is the branch of log f with value Log f(0) at z = 0,
    continued through the coefficients of f'/f.
    """
    if f.coeffs[0] == 0:
        raise LogAtZero("log of a series vanishing at 0")
    n = f.truncation_order
    ratio = div(derivative(f).pad(n), f)
    out = antiderivative(ratio, cmath.log(complex(f.coeffs[0])))
    return out.pad(n).truncate(n)


def exp_log(f: TaylorSeries, which: str) -> TaylorSeries:
    """Dispatcher kept for the documented operation surface."""
    if which == "exp":
        return exp(f)
    if which == "log":
        return log(f)
    raise ValueError(f"which must be 'exp' or 'log', got {which!r}")


def affine_power(q, s, order) -> TaylorSeries:
    """Series of (1 + q z)^s via the generalized binomial recurrence.

    Exact (terminating) for nonnegative integer s; for other exponents this
    is the principal branch, single-valued on the disk whenever |q| <= 1.
    """
    q = complex(q)
    s = complex(s)
    c = np.empty(order + 1, dtype=np.complex128)
    c[0] = 1.0
    t = 1.0 + 0.0j
    for k in range(order):
        t *= (s - k) / (k + 1) * q
        c[k + 1] = t
    return TaylorSeries(c)


def fractional_power(c, s, order) -> TaylorSeries:
    """Series of (c - z)^s for |c| = 1, principal branch.

    Defined through (c - z)^s = c^s exp(s log(1 - z/c)); the principal log is
    valid since Re(1 - z/c) > 0 on the disk, and c^s = exp(s Log c).
    """
    c = complex(c)
    s = complex(s)
    lead = cmath.exp(s * cmath.log(c))
    return affine_power(-1.0 / c, s, order).scale(lead)


def spow(f: TaylorSeries, s) -> TaylorSeries:
    """General fractional power exp(s log f) for f(0) != 0."""
    return exp(log(f).scale(complex(s)))


def check_conditioning(f: TaylorSeries, where: str,
                       threshold: float = ILL_CONDITIONED_THRESHOLD) -> TaylorSeries:
    """Raise IllConditioned if any coefficient exceeds the threshold."""
    m = f.max_abs_coeff()
    if not np.isfinite(m) or m > threshold:
        raise IllConditioned(f"{where}: coefficient magnitude {m:.3e} exceeds {threshold:.1e}")
    return f
