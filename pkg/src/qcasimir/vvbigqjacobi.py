"""Vector-valued orthogonality family: 2x2 circle weight plus point masses.

This module builds the two-parameter complex family whose spectral measure
lives on the unit circle (with a positive-definite 2x2 matrix weight) together
with a discrete set of scalar masses inside the disk.  It provides the matrix
weight and its square-root factorization, the scalar weight whose residues
give the discrete masses, the eigenfunctions (2-vectors on the circle, scalars
at the masses), their norms, the three-term recurrence coefficients in the
lattice index, and the mixed circle-plus-masses inner product.

Evaluation of the scalar eigenfunction switches between four series
representations (a terminating one at the finite masses, a direct one for
small lattice arguments, and two analytically-continued ones) chosen by which
series argument is inside the unit disk.

The general regime where the second parameter pair is not the complex
conjugate of the first (where an extra discrete mass can appear) is out of
scope here; all constructions assume the conjugate-pair symmetry.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple, Union

import mpmath as mp
import numpy as np

from .bigqjacobi import DomainError, NumericalConsistencyError
from .qkernel import (
    NoConvergenceError,
    QContext,
    phi32,
    qpoch,
    qpoch_multi,
    theta,
    theta_multi,
)

__all__ = [
    "FactorizationDegenerateError",
    "VVParams",
    "VVMassPoint",
    "VVGammaSet",
    "MatrixWeight",
    "dagger_params",
    "dagger",
    "matrix_weight",
    "s_factor",
    "scalar_v",
    "gamma_set",
    "b_branch",
    "weight_w_vv",
    "weight_w_vv_factored",
    "phi_vv",
    "coeff_c",
    "coeff_d",
    "psi_big",
    "norm_N_vv",
    "psi_normalized",
    "recurrence_coeffs_vv",
    "inner_product_vv",
    "psi_basis_fn",
    "gram_psi",
]

_CIRCLE_TOL = 1e-8
_V1_DEGENERATE_TOL = 1e-13


class FactorizationDegenerateError(Exception):
    """Square-root factorization undefined: off-diagonal weight entry ~ 0."""


@dataclass(frozen=True)
class VVParams:
    """Parameters of the vector-valued family.

    ``a`` and ``c`` are complex; the conjugate partners ``b = conj(a)`` and
    ``d = conj(c)`` and the scale ``s = sqrt(q)*|c/a|`` are derived.  The two
    lattice anchors satisfy ``z_plus > 0 > z_minus``.
    """

    a: complex
    c: complex
    z_plus: float
    z_minus: float
    base: QContext

    def __post_init__(self):
        if self.a == 0 or self.c == 0:
            raise DomainError("parameters a and c must be nonzero")
        if not (self.z_plus > 0.0 > self.z_minus):
            raise DomainError(
                f"need z_plus > 0 > z_minus, got z_plus={self.z_plus}, "
                f"z_minus={self.z_minus}"
            )

    @property
    def b(self) -> complex:
        return complex(self.a).conjugate()

    @property
    def d(self) -> complex:
        return complex(self.c).conjugate()

    @property
    def s(self) -> float:
        return math.sqrt(self.base.q) * abs(self.c / self.a)


@dataclass(frozen=True)
class VVMassPoint:
    """A discrete mass point, tagged by which family of poles produced it."""

    origin: str  # "fin_s" | "fin_qs" | "inf"
    index: int
    point: float

    def __post_init__(self):
        if self.origin not in ("fin_s", "fin_qs", "inf"):
            raise DomainError(f"unknown mass-point origin {self.origin!r}")


@dataclass(frozen=True)
class VVGammaSet:
    fin_s: Tuple[VVMassPoint, ...]
    fin_qs: Tuple[VVMassPoint, ...]
    inf: Tuple[VVMassPoint, ...]

    def all_points(self) -> Tuple[VVMassPoint, ...]:
        return self.fin_s + self.fin_qs + self.inf


@dataclass(frozen=True)
class MatrixWeight:
    """2x2 weight at a circle point: diagonal v2, off-diagonals v1 and v1-dagger."""

    v11: complex
    v12: complex
    v21: complex
    v22: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.v11, self.v12], [self.v21, self.v22]])


def dagger_params(p: VVParams) -> VVParams:
    """Swap the roles of the two conjugate parameter pairs (a<->b, c<->d)."""
    return VVParams(
        complex(p.a).conjugate(),
        complex(p.c).conjugate(),
        p.z_plus,
        p.z_minus,
        p.base,
    )

def dagger(func: Callable) -> Callable:
    """Wrap a function whose last positional argument is a ``VVParams`` so it
    evaluates with the conjugate-swapped parameters.  An involution."""

    def swapped(*args):
        *lead, p = args
        return func(*lead, dagger_params(p))

    return swapped


def _v1(gamma: complex, p: VVParams) -> complex:
    ctx = p.base
    q = ctx.q
    a, b, c, d = p.a, p.b, p.c, p.d
    zm, zp, s = p.z_minus, p.z_plus, p.s
    g = gamma
    front = (
        qpoch_multi([c * q / a, d * q / a], math.inf, ctx) ** 2
        * theta_multi([b * zp, b * zm], ctx)
        / (
            (1 - q) * a * b * zm ** 2 * zp ** 2
            * theta_multi([zm / zp, zp / zm, a / b, b / a], ctx)
        )
    )
    gpart = qpoch_multi([g ** 2, g ** -2], math.inf, ctx) / (
        qpoch_multi(
            [s * g, s / g, c * q * g / (a * s), c * q / (a * s * g),
             d * q * g / (a * s), d * q / (a * s * g)], math.inf, ctx)
        * theta_multi([s * g, s / g, a * b * s * zm * zp * g,
                       a * b * s * zm * zp / g], ctx)
    )
    brack = zm * theta_multi(
        [a * zp, c * zp, d * zp, b * zm, a * s * zm * g, a * s * zm / g], ctx
    ) - zp * theta_multi(
        [a * zm, c * zm, d * zm, b * zp, a * s * zp * g, a * s * zp / g], ctx
    )
    return front * gpart * brack


def _v2(gamma: complex, p: VVParams) -> complex:
    ctx = p.base
    q = ctx.q
    a, b, c, d = p.a, p.b, p.c, p.d
    zm, zp, s = p.z_minus, p.z_plus, p.s
    g = gamma
    front = (
        qpoch_multi([c * q / a, d * q / a, c * q / b, d * q / b], math.inf, ctx)
        * theta_multi([a * zp, a * zm, b * zp, b * zm, c * d * zm * zp], ctx)
        / (a * b * zm ** 2 * zp * (1 - q) * theta_multi([zp / zm, a / b, b / a], ctx))
    )
    gpart = qpoch_multi([g ** 2, g ** -2], math.inf, ctx) / (
        qpoch_multi([s * g, s / g], math.inf, ctx)
        * theta_multi([s * g, s / g, a * b * s * zm * zp * g,
                       a * b * s * zm * zp / g], ctx)
    )
    return front * gpart


def matrix_weight(gamma: complex, p: VVParams) -> MatrixWeight:
    """The 2x2 weight at a unit-circle point."""
    if abs(abs(gamma) - 1.0) > _CIRCLE_TOL:
        raise DomainError(f"matrix weight defined on the unit circle, |gamma|={abs(gamma)}")
    off = _v1(gamma, p)
    off_dag = _v1(gamma, dagger_params(p))
    diag = _v2(gamma, p)
    return MatrixWeight(v11=diag, v12=off_dag, v21=off, v22=diag)


def s_factor(gamma: complex, p: VVParams) -> np.ndarray:
    """Square-root factor S with S^dagger S equal to the matrix weight."""
    w = matrix_weight(gamma, p)
    one = w.v21
    m = abs(one)
    if m < _V1_DEGENERATE_TOL:
        raise FactorizationDegenerateError(
            f"off-diagonal entry {m:.2e} too small at gamma={gamma}: "
            "phase of the factorization is undefined"
        )
    two = complex(w.v22).real
    hi = max((two + m) / 2.0, 0.0)
    lo = max((two - m) / 2.0, 0.0)
    ph = one / m
    return np.array([
        [math.sqrt(hi) * ph, math.sqrt(hi)],
        [-math.sqrt(lo) * ph, math.sqrt(lo)],
    ])


def scalar_v(gamma: complex, p: VVParams) -> complex:
    """Scalar weight whose residues inside the disk carry the discrete masses."""
    ctx = p.base
    q = ctx.q
    a, b, c, d = p.a, p.b, p.c, p.d
    zm, zp, s = p.z_minus, p.z_plus, p.s
    g = gamma
    front = -theta_multi([c * zm, d * zm, c * zp, d * zp], ctx) / (
        zp * (1 - q) * theta(zm / zp, ctx)
    )
    gpart = qpoch_multi([g ** 2, q * g ** 2], math.inf, ctx) / (
        qpoch_multi(
            [c * q * g / (a * s), d * q * g / (a * s), c * q * g / (b * s),
             d * q * g / (b * s), s * g, q * g / s], math.inf, ctx)
        * theta(a * b * s * zm * zp / (q * g), ctx)
    )
    return front * gpart


# --- discrete support -------------------------------------------------------

def gamma_set(p: VVParams, mass_tol: float = 1e-34, max_inf: int = 400) -> VVGammaSet:
    """Enumerate the discrete mass points inside the unit disk.

    The two finite families sit at 1/(alpha*q^k) for alpha in {s, q/s} while
    alpha*q^k > 1; the infinite family sits at z_minus*z_plus*q^(k-1/2)*|a*c|
    (negative reals) while its absolute value is below 1, truncated once the
    mass weight drops below ``mass_tol`` twice in a row.
    """
    q = p.base.q
    fin_s, fin_qs, inf_pts = [], [], []
    for alpha, origin, store in ((p.s, "fin_s", fin_s), (q / p.s, "fin_qs", fin_qs)):
        k = 0
        while alpha * q ** k > 1.0:
            store.append(VVMassPoint(origin, k, 1.0 / (alpha * q ** k)))
            k += 1
    x = abs(p.a * p.c) * p.z_minus * p.z_plus  # negative
    k = 0
    while -x * q ** (k - 0.5) >= 1.0:
        k += 1
    misses = 0
    for kk in range(k, k + max_inf):
        mp_ = VVMassPoint("inf", kk, x * q ** (kk - 0.5))
        w = weight_w_vv_factored(mp_, p)
        if w < mass_tol:
            misses += 1
            if misses >= 2:
                break
            continue
        misses = 0
        inf_pts.append(mp_)
    pts = [m.point for m in fin_s + fin_qs + inf_pts]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) < 1e-9 * max(abs(pts[i]), abs(pts[j])):
                raise DomainError(
                    f"coincident mass points {pts[i]} and {pts[j]}: "
                    "degenerate parameter choice"
                )
    return VVGammaSet(tuple(fin_s), tuple(fin_qs), tuple(inf_pts))


def b_branch(mass: VVMassPoint, p: VVParams) -> float:
    """Normalizing factor dividing the residue, by mass-point family."""
    ctx = p.base
    zm, zp = p.z_minus, p.z_plus
    k = mass.index
    r = zm / zp
    if mass.origin == "inf":
        val = (zp / zm) ** (k + 1) * theta_multi([p.c * zm, p.d * zm], ctx) \
            / theta_multi([p.c * zp, p.d * zp], ctx)
    elif mass.origin == "fin_s":
        val = r ** k
    else:
        val = r ** k * theta_multi([p.a * zp, p.b * zp, p.c * zm, p.d * zm], ctx) \
            / theta_multi([p.a * zm, p.b * zm, p.c * zp, p.d * zp], ctx)
    val = complex(val)
    if abs(val) == 0.0:
        raise DomainError(f"vanishing branch factor at {mass}")
    if abs(val.imag) > 1e-10 * abs(val):
        raise NumericalConsistencyError(
            f"branch factor at {mass} not real: {val}"
        )
    return val.real


def _scalar_v_omit(gamma: complex, p: VVParams, skip_origin: str, skip_k: int) -> complex:
    """scalar_v with the single vanishing factor at a mass point removed.

    For the finite families the omitted factor is one term of an infinite
    product; for the infinite family the whole theta factor in the denominator
    is dropped (its derivative is restored by the caller).
    """
    ctx = p.base
    q = ctx.q
    a, b, c, d = p.a, p.b, p.c, p.d
    zm, zp, s = p.z_minus, p.z_plus, p.s
    g = gamma
    front = -theta_multi([c * zm, d * zm, c * zp, d * zp], ctx) / (
        zp * (1 - q) * theta(zm / zp, ctx)
    )
    denom_args = [c * q * g / (a * s), d * q * g / (a * s),
                  c * q * g / (b * s), d * q * g / (b * s)]
    if skip_origin == "fin_s":
        denom = qpoch_multi(denom_args + [q * g / s], math.inf, ctx)
        denom *= _qpoch_skip_term(s * g, skip_k, ctx)
        denom *= theta(a * b * s * zm * zp / (q * g), ctx)
    elif skip_origin == "fin_qs":
        denom = qpoch_multi(denom_args + [s * g], math.inf, ctx)
        denom *= _qpoch_skip_term(q * g / s, skip_k, ctx)
        denom *= theta(a * b * s * zm * zp / (q * g), ctx)
    else:  # inf: drop the theta factor entirely
        denom = qpoch_multi(denom_args + [s * g, q * g / s], math.inf, ctx)
    gpart = qpoch_multi([g ** 2, q * g ** 2], math.inf, ctx) / denom
    return front * gpart


def _qpoch_skip_term(x: complex, skip: int, ctx: QContext) -> complex:
    """(x;q)_infinity with the factor (1 - x*q^skip) left out."""
    q = ctx.q
    prod = 1.0 + 0.0j
    qc = 1.0
    i = 0
    big = max(1.0, abs(x))
    while True:
        if i != skip:
            prod *= 1 - x * qc
        qc *= q
        i += 1
        if qc * big < ctx.product_tol and i > skip:
            break
        if i > 100000:
            raise NoConvergenceError("infinite product did not truncate")
    return prod


def _residue_factored(mass: VVMassPoint, p: VVParams) -> float:
    """Residue of scalar_v(gamma)/gamma at the mass point, vanishing factor
    removed analytically."""
    ctx = p.base
    q = ctx.q
    g0 = mass.point
    k = mass.index
    s = p.s
    if mass.origin == "fin_s":
        deriv = -s * q ** k
    elif mass.origin == "fin_qs":
        deriv = -(q / s) * q ** k
    else:
        # the vanishing theta factor theta(X/(q*gamma)) has a simple zero at
        # X/(q*g0) = q^(-k); chain rule in gamma brings -X/g0^2 (X/q absorbed).
        x = p.a * p.b * s * p.z_minus * p.z_plus / q
        j = -k
        qq = qpoch(q, math.inf, ctx)
        theta_prime = (-1.0) ** (j + 1) * q ** (-j * (j - 1) / 2.0 - j) * qq * qq
        deriv = theta_prime * (-x / g0 ** 2)
    val = _scalar_v_omit(g0, p, mass.origin, k) / g0 / deriv
    val = complex(val)
    if abs(val.imag) > 1e-8 * max(abs(val), 1e-300):
        raise NumericalConsistencyError(
            f"residue at {mass} has stray imaginary part {val.imag:.3e}"
        )
    return val.real


def weight_w_vv_factored(mass: VVMassPoint, p: VVParams) -> float:
    """Discrete mass weight via the analytic (factor-removal) residue."""
    return _residue_factored(mass, p) / b_branch(mass, p)


def weight_w_vv(mass: VVMassPoint, p: VVParams, nodes: int = 256,
                gset: VVGammaSet = None) -> float:
    """Discrete mass weight via a small contour around the pole."""
    g0 = mass.point
    if gset is None:
        gset = gamma_set(p, mass_tol=0.0, max_inf=mass.index + 10)
    dists = [abs(m.point - g0) for m in gset.all_points()
             if abs(m.point - g0) > 1e-10 * max(1.0, abs(g0))]
    dists.append(abs(g0))          # keep away from the origin
    dists.append(1.0 - abs(g0))    # and from the unit circle
    rad = 0.5 * min(dists)
    acc = 0.0 + 0.0j
    for m in range(nodes):
        w = cmath.exp(2j * math.pi * m / nodes)
        z = g0 + rad * w
        acc += scalar_v(z, p) / z * (rad * w)
    res = acc / nodes
    if abs(res.imag) > 1e-8 * max(abs(res), 1e-300):
        raise NumericalConsistencyError(
            f"contour residue at {mass} has stray imaginary part {res.imag:.3e}"
        )
    return res.real / b_branch(mass, p)


# --- eigenfunctions ---------------------------------------------------------

def _near_neg_q_power(w: complex, q: float):
    """Return m if w is (numerically) q**(-m) for an integer m >= 0, else None."""
    aw = abs(w)
    if aw < 1.0 - 1e-9:
        return None
    m = max(int(round(math.log(aw) / -math.log(q))), 0)
    target = q ** (-m)
    if abs(w - target) <= 1e-9 * target:
        return m
    return None


def phi_vv(y: float, gamma: complex, p: VVParams) -> complex:
    """Scalar eigenfunction of the three-term lattice recurrence.

    Symmetric under gamma -> 1/gamma.  Chooses among four series
    representations by which series argument lies inside the unit disk:
    a terminating sum when s*gamma is a nonpositive power of q, the direct
    series for |b*y| < 1, and two continued forms otherwise (series arguments
    s*gamma and d*q/(a*s*gamma), tried with gamma and 1/gamma).
    """
    ctx = p.base
    q = ctx.q
    a, b, c, d, s = p.a, p.b, p.c, p.d, p.s
    g = gamma
    if y == 0:
        raise DomainError("eigenfunction undefined at y = 0")
    if g == 0:
        raise DomainError("eigenfunction undefined at gamma = 0")
    bt = abs(b * y)
    if (_near_neg_q_power(s * g, q) is not None
            or _near_neg_q_power(s / g, q) is not None):
        # terminating sum: valid and stable for any y
        return phi32(q / (a * y), s * g, s / g, c * q / a, d * q / a, b * y, ctx)
    gg = g if abs(s * g) <= abs(s / g) else 1.0 / g
    r = abs(s * gg)
    # far from the circle the direct series cancels catastrophically (one of
    # its numerator parameters is ~ 1/|gamma|); the continued form is stable
    # there and its series argument s*gg is small.
    if r >= 0.31 and bt < 0.99:
        return phi32(q / (a * y), s * g, s / g, c * q / a, d * q / a, b * y, ctx)
    if r < 0.995:
        pref = qpoch_multi([s * gg, q * b / a, s * b * y / gg], math.inf, ctx) \
            / qpoch_multi([c * q / a, d * q / a, b * y], math.inf, ctx)
        ser = phi32(c * q / (a * s * gg), d * q / (a * s * gg), b * y,
                    q * b / a, s * b * y / gg, s * gg, ctx)
        return pref * ser
    arg = abs(d * q / (a * s * gg))
    if arg >= 0.995:
        raise NoConvergenceError(
            f"no convergent series representation at y={y}, gamma={gamma}"
        )
    pref = qpoch_multi([d * q / (a * s * gg), c * d * q * y * gg / (a * s)],
                       math.inf, ctx) \
        / qpoch_multi([d * q / a, b * y], math.inf, ctx)
    ser = phi32(s * gg, c * y, c * q * gg / (a * s),
                c * q / a, c * d * q * y * gg / (a * s),
                d * q / (a * s * gg), ctx)
    return pref * ser


def coeff_d(gamma: complex, p: VVParams) -> complex:
    """Connection coefficient multiplying phi in the mass-point combination."""
    ctx = p.base
    q = ctx.q
    a, b, c, d, s, zp = p.a, p.b, p.c, p.d, p.s, p.z_plus
    g = gamma
    return (
        qpoch_multi([c * q / a, d * q / a], math.inf, ctx) * theta(b * zp, ctx)
        / theta_multi([a / b, c * zp, d * zp], ctx)
        * qpoch_multi([c * q * g / (s * b), d * q * g / (s * b)], math.inf, ctx)
        * theta(a * s * zp / (q * g), ctx)
        / qpoch_multi([q * g ** 2, s / g], math.inf, ctx)
    )


def coeff_c(gamma: complex, p: VVParams, bare_z: str = "plus") -> complex:
    """Connection coefficient on the first finite mass family.

    The formula contains a lattice anchor z that the construction leaves
    unbound; ``bare_z`` selects "plus" (default) or "minus".
    """
    ctx = p.base
    q = ctx.q
    a, b, c, d, s = p.a, p.b, p.c, p.d, p.s
    z = p.z_plus if bare_z == "plus" else p.z_minus
    g = gamma
    return (
        qpoch_multi([c * q / a, d * q / a, 1.0 / g ** 2], math.inf, ctx)
        * theta(b * z, ctx)
        / (qpoch_multi([s / g, c * q / (a * s * g), d * q / (a * s * g)],
                       math.inf, ctx)
           * theta(b * s * z * g, ctx))
    )


def _mp_theta(x, q):
    return mp.qp(x, q) * mp.qp(q / x, q)


def _mp_phi32(a1, a2, a3, b1, b2, z, q):
    acc = mp.mpc(0)
    term = mp.mpc(1)
    qj = mp.mpf(1)
    for j in range(100000):
        acc += term
        numer = (1 - a1 * qj) * (1 - a2 * qj) * (1 - a3 * qj)
        denom = (1 - q * qj) * (1 - b1 * qj) * (1 - b2 * qj)
        term = term * numer / denom * z
        qj *= q
        if abs(term) < mp.eps * max(abs(acc), mp.mpf("1e-300")) and j > 3:
            return acc + term
    raise NoConvergenceError("extended-precision series did not converge")


def _phi_vv_mp(y, g, p: VVParams):
    """Continued-form evaluation in ambient mpmath precision (series argument
    s*gg must be inside the disk; used at mass points far from the circle)."""
    q = mp.mpf(p.base.q)
    a, b, c, d = (mp.mpc(p.a), mp.mpc(p.b), mp.mpc(p.c), mp.mpc(p.d))
    s = mp.sqrt(q) * abs(c / a)
    g = mp.mpc(g)
    y = mp.mpc(y)
    gg = g if abs(s * g) <= abs(s / g) else 1 / g
    if abs(s * gg) >= mp.mpf("0.99"):
        raise NoConvergenceError("extended-precision path needs |s*gamma| < 1")
    pref = (mp.qp(s * gg, q) * mp.qp(q * b / a, q) * mp.qp(s * b * y / gg, q)
            / (mp.qp(c * q / a, q) * mp.qp(d * q / a, q) * mp.qp(b * y, q)))
    ser = _mp_phi32(c * q / (a * s * gg), d * q / (a * s * gg), b * y,
                    q * b / a, s * b * y / gg, s * gg, q)
    return pref * ser


def _coeff_d_mp(g, p: VVParams):
    q = mp.mpf(p.base.q)
    a, b, c, d = (mp.mpc(p.a), mp.mpc(p.b), mp.mpc(p.c), mp.mpc(p.d))
    s = mp.sqrt(q) * abs(c / a)
    zp = mp.mpf(p.z_plus)
    g = mp.mpc(g)
    return (
        mp.qp(c * q / a, q) * mp.qp(d * q / a, q) * _mp_theta(b * zp, q)
        / (_mp_theta(a / b, q) * _mp_theta(c * zp, q) * _mp_theta(d * zp, q))
        * mp.qp(c * q * g / (s * b), q) * mp.qp(d * q * g / (s * b), q)
        * _mp_theta(a * s * zp / (q * g), q)
        / (mp.qp(q * g ** 2, q) * mp.qp(s / g, q))
    )


def _psi_mass_mp(y: float, mass: VVMassPoint, p: VVParams) -> complex:
    """The d-combination at a mass point in extended precision, with working
    precision doubled until two consecutive evaluations agree.

    The mass point itself is rebuilt from its family and index inside the
    working precision: the cancellation between the two terms happens only at
    the exact point, and the float64 rounding of gamma alone leaks an error
    proportional to the size of the individual terms."""
    pd = dagger_params(p)

    def attempt(dps):
        with mp.workdps(dps):
            q = mp.mpf(p.base.q)
            if mass.origin == "inf":
                scale = (abs(mp.mpc(p.a) * mp.mpc(p.c))
                         * mp.mpf(p.z_minus) * mp.mpf(p.z_plus))
                g = scale * q ** (mp.mpf(mass.index) - mp.mpf("0.5"))
            elif mass.origin == "fin_qs":
                s = mp.sqrt(q) * abs(mp.mpc(p.c) / mp.mpc(p.a))
                g = (s / q) * q ** (-mass.index)
            else:
                s = mp.sqrt(q) * abs(mp.mpc(p.c) / mp.mpc(p.a))
                g = (1 / s) * q ** (-mass.index)
            val = (_coeff_d_mp(g, p) * _phi_vv_mp(y, g, p)
                   + _coeff_d_mp(g, pd) * _phi_vv_mp(y, g, pd))
            return complex(val)

    dps = 40
    prev = attempt(dps)
    for _ in range(8):
        dps *= 2
        cur = attempt(dps)
        if abs(cur - prev) <= 1e-15 * max(abs(cur), 1e-300):
            return cur
        prev = cur
    raise NoConvergenceError(
        f"mass-point eigenfunction did not stabilize at y={y}, gamma={mass.point}"
    )


def psi_big(y: float, gamma: Union[complex, VVMassPoint], p: VVParams,
            bare_z: str = "plus"):
    """Eigenfunction value: a 2-vector on the circle, a scalar at a mass.

    Circle points give (phi, phi-dagger); mass points give the scalar
    combination selected by the mass family: c*phi on the first finite family,
    d*phi + d-dagger*phi-dagger elsewhere.  The two-term combination cancels
    severely at masses deep inside the disk, so it falls back to extended
    precision when floats cannot resolve the sum.
    """
    pd = dagger_params(p)
    if isinstance(gamma, VVMassPoint):
        g = gamma.point
        if gamma.origin == "fin_s":
            return coeff_c(g, p, bare_z=bare_z) * phi_vv(y, g, p)
        t1 = coeff_d(g, p) * phi_vv(y, g, p)
        t2 = coeff_d(g, pd) * phi_vv(y, g, pd)
        tot = t1 + t2
        if abs(tot) < 1e-8 * max(abs(t1), abs(t2)):
            return _psi_mass_mp(y, gamma, p)
        return tot
    if abs(abs(gamma) - 1.0) > _CIRCLE_TOL:
        raise DomainError(
            f"gamma={gamma} is neither a tagged mass point nor on the unit circle"
        )
    return np.array([phi_vv(y, gamma, p), phi_vv(y, gamma, pd)])


def norm_N_vv(y: float, p: VVParams) -> float:
    """Squared norm of the unnormalized eigenfunction at lattice point y.

    Carries a 1/(1-q) factor so that the normalized family is orthonormal
    under the mixed inner product; without it every Gram entry comes out
    scaled by exactly 1-q (verified numerically on independent draws)."""
    if y == 0:
        raise DomainError("lattice point y must be nonzero")
    ctx = p.base
    return (1.0 / ((1.0 - ctx.q) * abs(y))) * abs(
        qpoch(p.c * y, math.inf, ctx) / qpoch(p.a * y, math.inf, ctx)
    ) ** 2


def psi_normalized(y: float, gamma, p: VVParams, bare_z: str = "plus"):
    return psi_big(y, gamma, p, bare_z=bare_z) / math.sqrt(norm_N_vv(y, p))


def recurrence_coeffs_vv(k: int, z: float, p: VVParams) -> Tuple[float, float]:
    """Three-term recurrence coefficients (a_k, b_k) on the lattice z*q^k."""
    q = p.base.q
    a, c, s = p.a, p.c, p.s
    qk = q ** (-k)
    a_k = abs((1 - qk / (a * z)) * (1 - qk / (c * z)))
    b_k = (1 / s + s
           - (1 / s) * abs(1 - q * qk / (a * z)) ** 2
           - s * abs(1 - qk / (c * z)) ** 2)
    return a_k, b_k


# --- inner product ----------------------------------------------------------

def inner_product_vv(f: Callable, g: Callable, p: VVParams, nodes: int = 512,
                     gset: VVGammaSet = None, mass_tol: float = 1e-34) -> complex:
    """Mixed inner product: circle quadrature with the matrix weight plus the
    weighted sum over the discrete masses.

    ``f`` and ``g`` take a circle point (complex, returning a 2-vector) or a
    ``VVMassPoint`` (returning a scalar).  The circle part is the uniform
    trapezoid rule for (1/4*pi) * integral of conj(g) . v . f over the angle
    (the transpose in the defining display is a conjugate transpose); the
    mass part sums f * conj(g) * weight.
    """
    acc = 0.0 + 0.0j
    for m in range(nodes):
        gam = cmath.exp(2j * math.pi * m / nodes)
        vm = matrix_weight(gam, p).as_array()
        acc += np.asarray(g(gam)).conj() @ (vm @ np.asarray(f(gam)))
    tot = acc / (2.0 * nodes)
    if gset is None:
        gset = gamma_set(p, mass_tol=mass_tol)
    for mass in gset.all_points():
        w = weight_w_vv_factored(mass, p)
        if w < mass_tol:
            continue
        tot += f(mass) * complex(g(mass)).conjugate() * w
    return tot


def psi_basis_fn(y: float, p: VVParams, bare_z: str = "plus") -> Callable:
    """The normalized eigenfunction at lattice point y as a one-argument
    callable suitable for :func:`inner_product_vv`."""
    scale = 1.0 / math.sqrt(norm_N_vv(y, p))

    def fn(gamma):
        return psi_big(y, gamma, p, bare_z=bare_z) * scale

    return fn


def gram_psi(p: VVParams, ys: Sequence[float], nodes: int = 512,
             mass_tol: float = 1e-34, gset: VVGammaSet = None,
             bare_z: str = "plus") -> np.ndarray:
    """Gram matrix of normalized eigenfunctions at the given lattice points.

    Precomputes the matrix weight once per quadrature node and each
    eigenfunction once per node/mass, so the cost is linear rather than
    quadratic in the number of lattice points."""
    ny = len(ys)
    scales = np.array([1.0 / math.sqrt(norm_N_vv(y, p)) for y in ys])
    gram = np.zeros((ny, ny), dtype=complex)
    pd = dagger_params(p)
    for m in range(nodes):
        gam = cmath.exp(2j * math.pi * m / nodes)
        vm = matrix_weight(gam, p).as_array()
        mat = np.array([
            [phi_vv(y, gam, p), phi_vv(y, gam, pd)] for y in ys
        ]) * scales[:, None]
        gram += (mat.conj() @ vm @ mat.T).T
    gram /= 2.0 * nodes
    if gset is None:
        gset = gamma_set(p, mass_tol=mass_tol)
    for mass in gset.all_points():
        w = weight_w_vv_factored(mass, p)
        if w < mass_tol:
            continue
        vals = np.array([psi_big(y, mass, p, bare_z=bare_z) for y in ys]) * scales
        gram += np.outer(vals, vals.conj()) * w
    return gram
