"""Low-level q-series arithmetic: q-shifted factorials, theta functions, 3phi2 series.

Everything downstream (spectral weights, recurrence coefficients, transform
kernels) reduces to three primitives evaluated in double-precision complex
arithmetic:

* ``qpoch``       -- the q-shifted factorial (x; q)_n, finite or infinite
* ``theta``       -- the normalized Jacobi theta function (x; q)_oo (q/x; q)_oo
* ``phi32``       -- the basic hypergeometric series 3phi2

Truncation policy lives in a single immutable :class:`QContext` so that all
series in a computation share one accuracy budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "QContext",
    "SeriesError",
    "NoConvergenceError",
    "PoleError",
    "qpoch",
    "qpoch_multi",
    "qpoch_pm",
    "theta",
    "theta_multi",
    "phi32",
]

# Relative tolerance used for "is this factor exactly zero" decisions, e.g.
# detecting that an upper 3phi2 parameter q^{-m} terminates the series.  Kept
# loose enough to absorb rounding in products of ~100 double factors.
_SNAP_TOL = 1e-12


class SeriesError(ArithmeticError):
    """Base class for series evaluation failures."""


class NoConvergenceError(SeriesError):
    """The series did not meet the stopping criterion within max_terms."""


class PoleError(SeriesError):
    """A lower parameter hit q^{-j}, producing a genuine pole of the series."""


@dataclass(frozen=True)
class QContext:
    """Base q together with the truncation policy for all series and products.

    Parameters
    ----------
    q : float
        The base, strictly between 0 and 1.
    series_tol : float
        A sum is stopped once the current term is smaller than ``series_tol``
        times the running partial sum (and the terms are already decaying).
    max_terms : int
        Hard cap on the number of terms/factors; exceeded means failure.
    product_tol : float
        Infinite products over (1 - x q^k) are truncated once |x| q^k falls
        below this threshold; the dropped tail is a geometric series, so the
        relative truncation error is below ``product_tol / (1 - q)``.
    """

    q: float
    series_tol: float = 1e-15
    max_terms: int = 10000
    product_tol: float = 1e-16

    def __post_init__(self) -> None:
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"q must lie in (0,1), got {self.q}")
        if self.series_tol <= 0.0:
            raise ValueError("series_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")
        if self.product_tol <= 0.0:
            raise ValueError("product_tol must be positive")


def _require_finite(value: complex, name: str) -> complex:
    as_complex = complex(value)
    if not (math.isfinite(as_complex.real) and math.isfinite(as_complex.imag)):
        raise ValueError(f"{name} must be finite, got {value}")
    # Return the *original* value so real inputs keep real arithmetic.
    return value


def qpoch(x: complex, n: int | float, ctx: QContext) -> complex:
    """q-shifted factorial (x; q)_n = prod_{k=0}^{n-1} (1 - x q^k).

    ``n`` may be a nonnegative integer or ``math.inf``.  The empty product
    (n = 0) is 1.  For n = oo the product is truncated once the factors are
    within ``ctx.product_tol`` of 1.

    >>> ctx = QContext(0.5)
    >>> qpoch(0.25, 2, ctx)
    0.65625
    >>> abs(qpoch(0.5, math.inf, ctx) - 0.28878809508660243) < 1e-12
    True
    """
    x = _require_finite(x, "x")
    q = ctx.q
    if n == math.inf:
        if x == 0:
            return 1.0
        prod = 1.0
        qk = 1.0
        bound = abs(x)
        for _ in range(ctx.max_terms):
            if bound * qk < ctx.product_tol:
                return prod
            prod *= 1.0 - x * qk
            qk *= q
        raise NoConvergenceError(
            f"infinite q-product did not reach product_tol within {ctx.max_terms} factors"
        )
    if not isinstance(n, (int,)) or isinstance(n, bool):
        if isinstance(n, float) and n.is_integer() and n >= 0:
            n = int(n)
        else:
            raise ValueError(f"n must be a nonnegative integer or infinity, got {n!r}")
    if n < 0:
        raise ValueError(f"n must be a nonnegative integer or infinity, got {n}")
    prod = 1.0
    qk = 1.0
    for _ in range(n):
        prod *= 1.0 - x * qk
        qk *= q
    return prod


def qpoch_multi(xs: list[complex] | tuple[complex, ...], n: int | float, ctx: QContext) -> complex:
    """Product of q-shifted factorials (x_1, ..., x_m; q)_n.

    An empty argument list gives 1 by convention (empty product).
    """
    prod = 1.0
    for x in xs:
        prod *= qpoch(x, n, ctx)
    return prod


def qpoch_pm(x: complex, n: int | float, ctx: QContext) -> complex:
    """The (x^{+-1}; q)_n convention: (x; q)_n (1/x; q)_n."""
    x = _require_finite(x, "x")
    if x == 0:
        raise ValueError("x must be nonzero for the x^{+-1} convention")
    return qpoch(x, n, ctx) * qpoch(1.0 / x, n, ctx)


def theta(x: complex, ctx: QContext) -> complex:
    """Normalized Jacobi theta function theta(x; q) = (x; q)_oo (q/x; q)_oo.

    Zeros lie exactly on the lattice x = q^j, j integer.  Satisfies the
    quasi-periodicity theta(q x) = -theta(x)/x and the symmetry
    theta(x) = theta(q/x).

    >>> ctx = QContext(0.5)
    >>> abs(theta(0.5, ctx)) < 1e-15
    True
    """
    x = _require_finite(x, "x")
    if x == 0:
        raise ValueError("theta(x; q) requires x != 0")
    return qpoch(x, math.inf, ctx) * qpoch(ctx.q / x, math.inf, ctx)


def theta_multi(xs: list[complex] | tuple[complex, ...], ctx: QContext) -> complex:
    """Product of theta functions theta(x_1, ..., x_m; q)."""
    prod = 1.0
    for x in xs:
        prod *= theta(x, ctx)
    return prod


def phi32(
    a: complex,
    b: complex,
    c: complex,
    d: complex,
    e: complex,
    z: complex,
    ctx: QContext,
) -> complex:
    """Basic hypergeometric series 3phi2(a, b, c; d, e; q, z).

    Computes sum_k (a, b, c; q)_k / (q, d, e; q)_k z^k by running-term
    recursion.  If an upper parameter equals q^{-m} the series terminates
    after m + 1 terms; termination is detected by the factor (1 - a q^m)
    vanishing to within rounding.  A lower parameter of the form q^{-j}
    reached before termination is a genuine pole and raises
    :class:`PoleError`.  A non-terminating series whose terms fail to decay
    raises :class:`NoConvergenceError`.

    >>> ctx = QContext(0.5)
    >>> phi32(1.0, 0.3, 0.7, 0.2, 0.9, 0.4, ctx)
    1.0
    """
    for name, val in (("a", a), ("b", b), ("c", c), ("d", d), ("e", e), ("z", z)):
        _require_finite(val, name)
    q = ctx.q
    term = 1.0
    partial = term
    prev_mag = abs(term)
    qk = 1.0
    for k in range(ctx.max_terms):
        f_a = 1.0 - a * qk
        f_b = 1.0 - b * qk
        f_c = 1.0 - c * qk
        # Snap vanishing upper factors to exact zero: terminating series.
        if (
            abs(f_a) < _SNAP_TOL * max(1.0, abs(a) * qk)
            or abs(f_b) < _SNAP_TOL * max(1.0, abs(b) * qk)
            or abs(f_c) < _SNAP_TOL * max(1.0, abs(c) * qk)
        ):
            return partial
        numer = f_a * f_b * f_c * z
        if numer == 0:
            return partial
        f_d = 1.0 - d * qk
        f_e = 1.0 - e * qk
        if abs(f_d) < _SNAP_TOL * max(1.0, abs(d) * qk) or abs(f_e) < _SNAP_TOL * max(
            1.0, abs(e) * qk
        ):
            raise PoleError(
                f"lower parameter hit q^(-{k}): 3phi2 has a pole before termination"
            )
        qk *= q
        term = term * numer / ((1.0 - qk) * f_d * f_e)
        partial += term
        mag = abs(term)
        if mag < ctx.series_tol * abs(partial) and mag < prev_mag:
            return partial
        prev_mag = mag
    raise NoConvergenceError(
        f"3phi2 did not converge within {ctx.max_terms} terms (last |term| = {prev_mag:.3e})"
    )
