"""Scalar eigenfunction family for a bilateral three-term q-difference operator.

This module provides the second-kind basic hypergeometric functions that
diagonalize the doubled-lattice Jacobi operator built in :mod:`decompose`,
together with the orthogonality measure they satisfy: an absolutely
continuous part supported on the unit circle plus finitely or discretely
many point masses outside the closed unit disk.  The pieces exposed here:

* :func:`phi_big` -- the eigenfunctions, with the inversion symmetry
  ``gamma -> 1/gamma`` built in and two equivalent series forms;
* :func:`support_points`, :func:`weight_v`, :func:`weight_w`,
  :func:`spectral_measure` -- the measure (circle weight and residue
  masses);
* :func:`norm_N`, :func:`phi_normalized`, :func:`inner_product` -- the
  orthonormal lattice family and its inner product;
* :func:`recurrence_coeffs`, :func:`cdqhahn` -- the three-term recurrence
  along the spectral-parameter lattice and the terminating polynomial
  family it reduces to on the negative branch.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

import mpmath as mp

from .qkernel import (
    _SNAP_TOL,
    NoConvergenceError,
    PoleError,
    QContext,
    phi32,
    qpoch,
    qpoch_multi,
    theta,
    theta_multi,
)

__all__ = [
    "BigQJacobiParams",
    "DegenerateParameterError",
    "DomainError",
    "MassOrigin",
    "MassPoint",
    "NumericalConsistencyError",
    "SpectralMeasure",
    "YLattice",
    "cdqhahn",
    "inner_product",
    "lattice_point",
    "norm_N",
    "phi_big",
    "phi_normalized",
    "recurrence_coeffs",
    "spectral_measure",
    "support_points",
    "weight_v",
    "weight_w",
    "weight_w_factored",
]

_BRANCH_TOL = 1e-12
_EDGE_TOL = 1e-9


class DomainError(ValueError):
    """An argument lies outside the region where the operation is defined."""


class NumericalConsistencyError(ArithmeticError):
    """A value that must be real (or positive) failed its consistency check."""


class DegenerateParameterError(ValueError):
    """Two singular points collide, so a residue/mass is not well defined."""


@dataclass(frozen=True)
class BigQJacobiParams:
    """Parameter pack (a, b, c, t) with base context.

    All four parameters are positive and the pairwise products ab, ac, bc
    must exceed 1; this keeps the lattice norms positive and the circle
    weight integrable.  ``a`` itself may be smaller than 1, in which case
    the measure acquires finitely many point masses on the positive axis.
    """

    a: float
    b: float
    c: float
    t: float
    base: QContext

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "t"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        for pair in ("ab", "ac", "bc"):
            prod = getattr(self, pair[0]) * getattr(self, pair[1])
            if not prod > 1:
                raise ValueError(f"need {pair} > 1, got {prod}")

    @property
    def q(self) -> float:
        return self.base.q

    @property
    def ab(self) -> float:
        return self.a * self.b

    @property
    def ac(self) -> float:
        return self.a * self.c

    @property
    def bc(self) -> float:
        return self.b * self.c

    @property
    def abc(self) -> float:
        return self.a * self.b * self.c


class MassOrigin(Enum):
    """Which singular family a point mass descends from."""

    FinA = "fin_a"
    FinB = "fin_b"
    FinC = "fin_c"
    Inf = "inf"


@dataclass(frozen=True)
class MassPoint:
    """A discrete mass of the orthogonality measure, located off the unit disk."""

    gamma: float
    weight: float
    origin: MassOrigin

    def __post_init__(self) -> None:
        if not abs(self.gamma) > 1:
            raise ValueError(f"mass location must satisfy |gamma| > 1, got {self.gamma}")
        if not self.weight > 0:
            raise ValueError(f"mass weight must be positive, got {self.weight}")


@dataclass(frozen=True)
class YLattice:
    """A point of the doubled spectral lattice.

    ``branch == "neg"`` means ``point = -q^k`` with ``k`` a natural number;
    ``branch == "t"`` means ``point = t q^k`` with ``k`` any integer.  The
    two branches never overlap since ``t > 0``.
    """

    branch: str
    k: int
    point: float

    def __post_init__(self) -> None:
        if self.branch not in ("neg", "t"):
            raise ValueError(f"branch must be 'neg' or 't', got {self.branch!r}")
        if self.branch == "neg" and self.k < 0:
            raise ValueError("negative-branch lattice index must be a natural number")


def lattice_point(p: BigQJacobiParams, branch: str, k: int) -> YLattice:
    """Materialize the lattice point -q^k (branch 'neg') or t q^k (branch 't')."""
    q = p.q
    if branch == "neg":
        return YLattice("neg", k, -(q**k))
    if branch == "t":
        return YLattice("t", k, p.t * q**k)
    raise ValueError(f"branch must be 'neg' or 't', got {branch!r}")


def _on_excluded_ray(y: complex, p: BigQJacobiParams) -> bool:
    yc = complex(y)
    if abs(yc.imag) > 1e-13 * max(1.0, abs(yc.real)):
        return False
    return yc.real <= -p.bc * (1.0 - _BRANCH_TOL)


def _series_loss_digits(g: complex, y: complex, p: BigQJacobiParams) -> float:
    """Bound on decimal digits the single-series form can lose to cancellation.

    When the spectral point sits far outside the unit circle the series
    parameter 1/(a*g) is huge and successive terms grow by roughly
    |y/(a g bc)| per step (tempered by q powers) before decaying; the sum
    then cancels down from a peak term whose log10 this function estimates.
    """
    q = p.q
    u2 = 1.0 / (p.a * abs(g))
    u3 = 1.0 / abs(y)
    z = abs(y) / p.bc
    log_run = 0.0
    log_peak = 0.0
    qj = 1.0
    for _ in range(700):
        step = z * max(1.0, u2 * qj) * max(1.0, u3 * qj)
        if step < 1.0:
            break
        log_run += math.log10(step)
        log_peak = max(log_peak, log_run)
        qj *= q
    return log_peak


def _inf_lattice_index(gamma: complex, p: BigQJacobiParams) -> int | None:
    """Index j if ``gamma`` matches a point -(abc/t) q^j within 1e-9 relative."""
    gc = complex(gamma)
    if gc.imag != 0.0 or gc.real >= 0.0:
        return None
    r = -gc.real * p.t / p.abc
    j = round(math.log(r) / math.log(p.q))
    if abs(p.q**j - r) <= 1e-9 * r:
        return j
    return None


def _phi_transformed_mp(
    g: complex,
    y: complex,
    p: BigQJacobiParams,
    loss: float,
    inf_index: int | None = None,
) -> complex:
    """Extended-precision transformed series for sums that cancel badly.

    Mirrors the running-term loop and snap-to-zero termination of the
    double-precision series, but carries enough extra decimal digits that
    a peak term far above the final value still leaves ~15 significant
    digits; the budget is grown adaptively because the true final value is
    not known in advance.  All series parameters are derived from ``g``
    and ``y`` inside the extended precision: deriving them in double first
    would perturb each one independently by ~1e-16, and through the peak
    terms an inconsistency of that size wrecks the cancellation.

    ``inf_index = j`` reconstructs the spectral point as the exact lattice
    value -(abc/t) q^j instead of trusting the rounded double: near such
    points the function varies over relative scales far below 1e-16, so
    the double encodes *which* point is meant but not *where* it is.
    """
    real_in = complex(g).imag == 0.0 and complex(y).imag == 0.0
    ctx = p.base
    budget = loss
    for _ in range(8):
        extra = int(math.ceil(budget)) + 12
        with mp.workdps(16 + extra):
            a = mp.mpf(p.a)
            ab = a * mp.mpf(p.b)
            ac = a * mp.mpf(p.c)
            bc = mp.mpf(p.b) * mp.mpf(p.c)
            if inf_index is not None:
                gg = -mp.mpf(p.t) * mp.mpf(p.q) ** (-inf_index) / (a * mp.mpf(p.b) * mp.mpf(p.c))
            else:
                gg = mp.mpmathify(complex(g))
                if real_in:
                    gg = gg.real
            yy = mp.mpmathify(complex(y))
            if real_in:
                yy = yy.real
            av, bv, cv = gg / a, 1 / (a * gg), -1 / yy
            dv, ev = 1 / ab, 1 / ac
            zv = -yy / bc
            q = mp.mpf(p.q)
            term = partial = mp.mpf(1) if real_in else mp.mpc(1)
            peak = mp.mpf(1)
            prev_mag = mp.mpf(1)
            floor = mp.mpf(10) ** (-(budget + 18.0))
            qk = mp.mpf(1)
            for k in range(ctx.max_terms):
                f_a = 1 - av * qk
                f_b = 1 - bv * qk
                f_c = 1 - cv * qk
                if (
                    abs(f_a) < _SNAP_TOL * max(1.0, abs(av) * qk)
                    or abs(f_b) < _SNAP_TOL * max(1.0, abs(bv) * qk)
                    or abs(f_c) < _SNAP_TOL * max(1.0, abs(cv) * qk)
                ):
                    break
                numer = f_a * f_b * f_c * zv
                if numer == 0:
                    break
                f_d = 1 - dv * qk
                f_e = 1 - ev * qk
                if abs(f_d) < _SNAP_TOL * max(1.0, abs(dv) * qk) or abs(
                    f_e
                ) < _SNAP_TOL * max(1.0, abs(ev) * qk):
                    raise PoleError(
                        f"lower parameter hit q^(-{k}): 3phi2 has a pole before termination"
                    )
                qk *= q
                term = term * numer / ((1 - qk) * f_d * f_e)
                partial += term
                mag = abs(term)
                peak = max(peak, mag)
                if mag < floor * peak and mag < prev_mag:
                    break
                prev_mag = mag
            else:
                raise NoConvergenceError(
                    f"extended-precision series did not converge within {ctx.max_terms} terms"
                )
            # The result is trustworthy only if the cancellation actually
            # observed stayed within the digit budget; otherwise re-run
            # with a budget sized to what was seen.
            mag_out = abs(partial)
            if mag_out > 0 and peak / mag_out < mp.mpf(10) ** (budget + 3.0):
                out = complex(partial)
                return out.real if real_in else out
            observed = mp.log10(peak / mag_out) if mag_out > 0 else budget + 20.0
        budget = float(observed) + 6.0
    raise NoConvergenceError("cancellation kept exceeding the growing precision budget")


def phi_big(gamma: complex, y: complex, p: BigQJacobiParams, form: str = "auto") -> complex:
    """Eigenfunction value at spectral point ``gamma`` and lattice point ``y``.

    The function is symmetric under ``gamma -> 1/gamma``; whenever
    ``|gamma|`` strictly exceeds ``a`` (relative tolerance 1e-12) the
    argument is inverted first, so the series below always runs in the
    contracting regime.  Points ``y`` on the ray ``(-inf, -bc]`` are
    outside the domain.

    ``form`` selects the series: ``"defining"`` (prefactor times a
    three-by-two series in powers of ``gamma/a``), ``"transformed"``
    (a single series in powers of ``-y/bc``, valid for ``|y| < bc``), or
    ``"auto"`` which picks whichever converges.  When the spectral point
    lies far outside the unit circle the transformed series cancels down
    from a large peak term; such sums are re-run in extended precision so
    the returned double keeps its full accuracy.
    """
    ctx = p.base
    a, b, c = p.a, p.b, p.c
    ab, ac, bc, abc = p.ab, p.ac, p.bc, p.abc
    if _on_excluded_ray(y, p):
        raise DomainError(f"y = {y} lies on the excluded ray (-inf, -bc]")

    g = complex(gamma)
    if abs(g) > a * (1.0 + _BRANCH_TOL):
        g = 1.0 / g
    if g.imag == 0.0:
        g = g.real  # keep real arithmetic for real spectral points

    defining_ok = abs(g) < a * (1.0 - _EDGE_TOL)
    transformed_ok = abs(y) < bc * (1.0 - _EDGE_TOL)

    if form == "auto":
        form = "transformed" if transformed_ok else "defining"
        if form == "defining" and not defining_ok:
            raise DomainError(
                "no convergent series: |y| >= bc and the spectral point sits "
                "in the annulus where the defining series diverges"
            )
    if form == "transformed":
        if not transformed_ok:
            raise DomainError(f"transformed series needs |y| < bc, got |y| = {abs(y)}")
        loss = _series_loss_digits(g, y, p)
        if loss > 3.0:
            return _phi_transformed_mp(g, y, p, loss, _inf_lattice_index(1.0 / g, p))
        return phi32(g / a, 1.0 / (a * g), -1.0 / y, 1.0 / ab, 1.0 / ac, -y / bc, ctx)
    if form == "defining":
        if not defining_ok:
            raise DomainError(
                f"defining series needs |gamma| < a after inversion, got {abs(g)} vs a = {a}"
            )
        pref = qpoch_multi([g / a, 1.0 / bc, -y / (abc * g)], math.inf, ctx) / qpoch_multi(
            [1.0 / ab, 1.0 / ac, -y / bc], math.inf, ctx
        )
        ser = phi32(
            1.0 / (b * g),
            1.0 / (c * g),
            -y / bc,
            1.0 / bc,
            -y / (abc * g),
            g / a,
            ctx,
        )
        return pref * ser
    raise ValueError(f"form must be 'auto', 'defining' or 'transformed', got {form!r}")


@functools.lru_cache(maxsize=64)
def _v_prefactor(p: BigQJacobiParams) -> float:
    # Orientation note: with the theta-product and Pochhammer-product in the
    # numerator the measure has total mass exactly 1, which the constant
    # lattice function requires; the opposite orientation scales every Gram
    # entry by the square of this constant.
    ctx = p.base
    t = p.t
    num = theta_multi([-t / p.ab, -t / p.ac, -t / p.bc], ctx) * qpoch_multi(
        [ctx.q, 1.0 / p.ab, 1.0 / p.ac, 1.0 / p.bc], math.inf, ctx
    )
    return num / theta(-t, ctx)


def _v_complex(
    gamma: complex,
    p: BigQJacobiParams,
    omit_fin: float | None = None,
    omit_inf: bool = False,
) -> complex:
    """Raw circle-weight formula, evaluable anywhere off its singular set.

    ``omit_fin = e`` drops the factor pair member ``(1/(e gamma); q)_oo``
    from the denominator; ``omit_inf`` drops ``theta(-t gamma / abc; q)``.
    Used by the residue routines to divide out a vanishing factor.
    """
    ctx = p.base
    a, b, c, t, abc = p.a, p.b, p.c, p.t, p.abc
    num = qpoch(gamma * gamma, math.inf, ctx) * qpoch(1.0 / (gamma * gamma), math.inf, ctx)
    den: complex = 1.0
    for e in (a, b, c):
        den *= qpoch(gamma / e, math.inf, ctx)
        if omit_fin is None or e != omit_fin:
            den *= qpoch(1.0 / (e * gamma), math.inf, ctx)
    if not omit_inf:
        den *= theta(-t * gamma / abc, ctx)
    den *= theta(-t / (abc * gamma), ctx)
    return _v_prefactor(p) * num / den


def weight_v(gamma: complex, p: BigQJacobiParams) -> float:
    """Continuous weight on the unit circle; real, nonnegative, inversion-symmetric."""
    if abs(abs(gamma) - 1.0) > _BRANCH_TOL:
        raise DomainError(f"weight_v needs |gamma| = 1, got {abs(gamma)}")
    val = complex(_v_complex(gamma, p))
    scale = max(1.0, abs(val.real))
    if abs(val.imag) > 1e-12 * scale:
        raise NumericalConsistencyError(
            f"circle weight has non-real value {val} at gamma = {gamma}"
        )
    re = val.real
    if re < 0.0:
        if re < -1e-10 * scale:
            raise NumericalConsistencyError(
                f"circle weight significantly negative: {re} at gamma = {gamma}"
            )
        re = 0.0
    return re


def _pole_catalog(p: BigQJacobiParams, center: float) -> list[float]:
    """Singular points of the circle weight near |center|, one entry per factor.

    Returns real locations (the weight's poles all sit on the real axis for
    positive parameters).  Entries are duplicated when distinct factors
    vanish at the same point, which signals a genuinely degenerate
    parameter choice.
    """
    q = p.q
    mag = abs(center)
    lo, hi = min(mag, 1.0) * q**6, max(mag, 1.0) / q**6
    poles: list[float] = []
    for e in (p.a, p.b, p.c):
        # (gamma/e; q)_oo vanishes at gamma = e q^{-m}, m natural
        val = e
        while val <= hi:
            if val >= lo:
                poles.append(val)
            val /= q
        # (1/(e gamma); q)_oo vanishes at gamma = q^m / e, m natural
        val = 1.0 / e
        while val >= lo:
            if val <= hi:
                poles.append(val)
            val *= q
    ratio = p.abc / p.t
    for base_val in (ratio, 1.0 / ratio):
        # theta factors vanish along the bilateral geometric family -base q^j
        j_star = math.log(mag / base_val) / math.log(q)
        for j in range(math.floor(j_star) - 4, math.floor(j_star) + 5):
            poles.append(-base_val * q**j)
    return poles


def _half_distance_radius(gamma0: float, p: BigQJacobiParams) -> float:
    poles = _pole_catalog(p, gamma0)
    self_tol = 1e-10 * max(1.0, abs(gamma0))
    own = [z for z in poles if abs(z - gamma0) <= self_tol]
    if len(own) >= 2:
        raise DegenerateParameterError(
            f"two singular factors collide at gamma = {gamma0}; mass undefined"
        )
    others = [abs(z - gamma0) for z in poles if abs(z - gamma0) > self_tol]
    others.append(abs(gamma0))  # keep clear of the essential singularity at 0
    nearest = min(others)
    radius = 0.5 * nearest
    if radius < 1e-12 * max(1.0, abs(gamma0)):
        raise DegenerateParameterError(
            f"contour radius underflow at gamma = {gamma0}: nearest pole at distance {nearest}"
        )
    return radius


def weight_w(gamma0: float, p: BigQJacobiParams, nodes: int = 256) -> float:
    """Mass at a discrete support point: residue of v(gamma)/gamma there.

    Computed by numerical contour integration on a circle of radius half
    the distance to the nearest other singular point.
    """
    radius = _half_distance_radius(gamma0, p)
    acc_re: list[float] = []
    acc_im: list[float] = []
    for m in range(nodes):
        w = cmath.exp(2j * math.pi * m / nodes)
        z = gamma0 + radius * w
        val = _v_complex(z, p) / z * (radius * w)
        acc_re.append(val.real)
        acc_im.append(val.imag)
    res = complex(math.fsum(acc_re), math.fsum(acc_im)) / nodes
    scale = max(1.0, abs(res.real))
    if abs(res.imag) > 1e-10 * scale:
        raise NumericalConsistencyError(
            f"residue has non-real value {res} at gamma = {gamma0}"
        )
    return res.real


def _classify_mass(gamma0: float, p: BigQJacobiParams) -> tuple[str, float, int]:
    """Identify which factor vanishes at gamma0: ('fin', e, j) or ('inf', ., j)."""
    q = p.q
    if gamma0 > 0:
        for e in (p.a, p.b, p.c):
            j = round(math.log(gamma0 * e) / math.log(q))
            if j >= 0 and abs(q**j / e - gamma0) <= 1e-9 * abs(gamma0):
                return "fin", e, j
    else:
        ratio = p.abc / p.t
        j = round(math.log(-gamma0 / ratio) / math.log(q))
        if abs(-ratio * q**j - gamma0) <= 1e-9 * abs(gamma0):
            return "inf", ratio, j
    raise DomainError(f"gamma = {gamma0} is not a recognized discrete support point")


def weight_w_factored(gamma0: float, p: BigQJacobiParams) -> float:
    """Mass at a discrete support point via analytic factor removal.

    Independent of :func:`weight_w`: the vanishing factor of the weight's
    denominator is divided out and replaced by its derivative at the zero.
    """
    ctx = p.base
    q = p.q
    kind, e, j = _classify_mass(gamma0, p)
    if kind == "fin":
        # (1/(e gamma); q)_oo vanishes; d/dgamma contributes A_j / gamma0 with
        # A_j = (q; q)_oo * prod_{i=1..j} (1 - q^{-i})
        coeff = qpoch(q, math.inf, ctx)
        for i in range(1, j + 1):
            coeff *= 1.0 - q ** (-i)
        val = _v_complex(gamma0, p, omit_fin=e) / coeff
    else:
        # theta(-t gamma/abc; q) vanishes; chain rule leaves q^j * theta'(q^j)
        qq = qpoch(q, math.inf, ctx)
        theta_prime = (-1.0) ** (j + 1) * q ** (-j * (j - 1) / 2.0 - j) * qq * qq
        val = complex(_v_complex(gamma0, p, omit_inf=True)) / (q**j * theta_prime)
    val = complex(val)
    scale = max(1.0, abs(val.real))
    if abs(val.imag) > 1e-10 * scale:
        raise NumericalConsistencyError(
            f"factored residue has non-real value {val} at gamma = {gamma0}"
        )
    return val.real


def support_points(
    p: BigQJacobiParams, mass_tol: float = 1e-14
) -> tuple[list[MassPoint], list[MassPoint]]:
    """Discrete support of the measure: (finite family, truncated infinite family).

    The finite family collects the points q^k/e > 1 for e in (a, b, c); it
    is empty when a, b, c all exceed 1.  The infinite family marches down
    the negative axis and is truncated once its weights stay below
    ``mass_tol``.
    """
    q = p.q
    fin: list[MassPoint] = []
    for e, origin in ((p.a, MassOrigin.FinA), (p.b, MassOrigin.FinB), (p.c, MassOrigin.FinC)):
        k = 0
        while q**k / e > 1.0 + _BRANCH_TOL:
            loc = q**k / e
            fin.append(MassPoint(loc, weight_w(loc, p), origin))
            k += 1
    inf_pts: list[MassPoint] = []
    ratio = p.abc / p.t
    k_float = math.log(p.t / p.abc) / math.log(q)
    k_max = math.ceil(k_float - _BRANCH_TOL) - 1
    misses = 0
    k = k_max
    while misses < 2 and k > k_max - 200:
        loc = -ratio * q**k
        w = weight_w(loc, p)
        if w < mass_tol:
            misses += 1
        else:
            misses = 0
            inf_pts.append(MassPoint(loc, w, MassOrigin.Inf))
        k -= 1
    locs = [m.gamma for m in fin + inf_pts]
    for i in range(len(locs)):
        for jj in range(i + 1, len(locs)):
            if abs(locs[i] - locs[jj]) <= 1e-9 * max(abs(locs[i]), abs(locs[jj])):
                raise DegenerateParameterError(
                    f"coincident mass locations {locs[i]} and {locs[jj]}"
                )
    return fin, inf_pts


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """Immutable circle-plus-masses measure, with precomputed quadrature data."""

    continuous_weight: Callable[[complex], float]
    masses: tuple[MassPoint, ...]
    quadrature_nodes: int = 512
    mass_tol: float = 1e-14
    params: BigQJacobiParams | None = None
    nodes: np.ndarray | None = None
    node_weights: np.ndarray | None = None


def spectral_measure(
    p: BigQJacobiParams, quadrature_nodes: int = 512, mass_tol: float = 1e-14
) -> SpectralMeasure:
    """Build the orthogonality measure for the given parameter pack."""
    fin, inf_pts = support_points(p, mass_tol)
    masses = tuple(fin + inf_pts)
    angles = 2.0 * math.pi * np.arange(quadrature_nodes) / quadrature_nodes
    nodes = np.exp(1j * angles)
    vals = np.array([weight_v(z, p) for z in nodes])
    if np.any(vals < 0):
        raise NumericalConsistencyError("negative circle weight at a quadrature node")
    return SpectralMeasure(
        continuous_weight=lambda z: weight_v(z, p),
        masses=masses,
        quadrature_nodes=quadrature_nodes,
        mass_tol=mass_tol,
        params=p,
        nodes=nodes,
        node_weights=vals,
    )


def _assert_inversion_symmetric(vals: np.ndarray, label: str) -> None:
    n = len(vals)
    flipped = np.concatenate(([vals[0]], vals[1:][::-1]))
    scale = max(1.0, float(np.max(np.abs(vals))))
    worst = float(np.max(np.abs(vals - flipped)))
    if worst > 1e-8 * scale:
        raise DomainError(
            f"function {label} is not symmetric under gamma -> 1/gamma "
            f"(max deviation {worst:.3e} on {n} nodes)"
        )


def inner_product(
    f: Callable[[complex], complex],
    g: Callable[[complex], complex],
    measure: SpectralMeasure,
) -> complex:
    """Inner product against the measure: circle quadrature plus mass sum.

    The circle contribution is the periodic trapezoid rule, exact up to
    spectral accuracy for smooth integrands; both arguments must satisfy
    f(gamma) = f(1/gamma) on the circle, which is checked on the nodes.
    """
    if measure.nodes is None or measure.node_weights is None:
        raise ValueError("measure lacks quadrature data; build it with spectral_measure()")
    nodes = measure.nodes
    n = len(nodes)
    fv = np.array([f(z) for z in nodes])
    gv = np.array([g(z) for z in nodes])
    _assert_inversion_symmetric(fv, "f")
    _assert_inversion_symmetric(gv, "g")
    integrand = fv * np.conj(gv) * measure.node_weights
    circ_re = math.fsum(integrand.real)
    circ_im = math.fsum(integrand.imag)
    total = complex(circ_re, circ_im) / (2.0 * n)
    mass_re = [total.real]
    mass_im = [total.imag]
    for m in measure.masses:
        term = f(m.gamma) * complex(g(m.gamma)).conjugate() * m.weight
        term = complex(term)
        mass_re.append(term.real)
        mass_im.append(term.imag)
    return complex(math.fsum(mass_re), math.fsum(mass_im))


def norm_N(y: YLattice, p: BigQJacobiParams) -> float:
    """Squared norm of the unnormalized eigenfunction at a lattice point.

    >>> from .qkernel import QContext
    >>> pars = BigQJacobiParams(2.0, 2.0, 2.0, 1.0, QContext(0.5))
    >>> norm_N(lattice_point(pars, "neg", 0), pars)
    1.0
    """
    ctx = p.base
    q = p.q
    k = y.k
    if y.branch == "neg":
        num = qpoch_multi([q, 1.0 / p.bc], k, ctx)
        den = qpoch_multi([1.0 / p.ab, 1.0 / p.ac], k, ctx)
        return float(num / den * q ** (-k))
    tqk = p.t * q**k
    num = qpoch_multi(
        [q, 1.0 / p.bc, -tqk / p.ab, -tqk / p.ac], math.inf, ctx
    )
    den = qpoch_multi(
        [1.0 / p.ab, 1.0 / p.ac, -tqk / p.bc, -tqk * q], math.inf, ctx
    )
    return float(num / den * q ** (-k) / p.t)


def phi_normalized(gamma: complex, y: YLattice, p: BigQJacobiParams, form: str = "auto") -> complex:
    """Orthonormal-family value: eigenfunction divided by its lattice norm."""
    return phi_big(gamma, y.point, p, form) / math.sqrt(norm_N(y, p))


def recurrence_coeffs(k: int, z: float, p: BigQJacobiParams) -> tuple[float, float]:
    """Three-term recurrence coefficients (a_k, b_k) along the lattice z q^k.

    ``z`` must equal -1 (natural-number branch) or t (integer branch).  The
    boundary convention a_{-1} = 0 closes the natural-number branch.

    >>> from .qkernel import QContext
    >>> pars = BigQJacobiParams(2.0, 2.0, 2.0, 1.0, QContext(0.5))
    >>> recurrence_coeffs(-1, -1.0, pars)[0]
    0.0
    """
    q = p.q
    abc = p.abc
    neg_branch = abs(z + 1.0) <= 1e-9
    t_branch = abs(z - p.t) <= 1e-9 * max(1.0, p.t)
    if not (neg_branch or t_branch):
        raise DomainError(f"z must be -1 or t = {p.t}, got {z}")
    if neg_branch:
        z = -1.0
        if k < -1:
            raise DomainError("natural-number branch needs k >= -1")
    else:
        z = p.t
    if neg_branch and k == -1:
        a_k = 0.0
    else:
        rad = (
            (1.0 + z * q ** (k + 1))
            * (1.0 + z * q**k / p.ab)
            * (1.0 + z * q**k / p.ac)
            * (1.0 + z * q**k / p.bc)
        )
        a_k = abc * q ** (-0.5 - 2 * k) / (z * z) * math.sqrt(rad)
    b_k = (
        p.a
        + 1.0 / p.a
        - abc * q ** (-2 * k) / (z * z) * (1.0 + z * q**k / p.ab) * (1.0 + z * q**k / p.ac)
        - abc * q ** (1 - 2 * k) / (z * z) * (1.0 + z * q**k) * (1.0 + z * q ** (k - 1) / p.bc)
    )
    return a_k, b_k


def _finite_poch(x: complex, r: float, n: int) -> complex:
    prod: complex = 1.0
    for i in range(n):
        prod *= 1.0 - x * r**i
    return prod


def cdqhahn(k: int, x: complex, p: BigQJacobiParams) -> complex:
    """Normalized terminating polynomial family on the negative lattice branch.

    These are the degree-k orthonormal polynomials whose recurrence the
    natural-number branch of :func:`recurrence_coeffs` reproduces; the base
    of their finite products is 1/q.

    >>> from .qkernel import QContext
    >>> pars = BigQJacobiParams(2.0, 2.0, 2.0, 1.0, QContext(0.5))
    >>> cdqhahn(0, 0.3 + 0.1j, pars)
    1.0
    """
    if k < 0:
        raise DomainError("polynomial degree must be a natural number")
    q = p.q
    r = 1.0 / q
    a = p.a
    norm_sq = (
        _finite_poch(p.ab, r, k)
        * _finite_poch(p.ac, r, k)
        / (_finite_poch(r, r, k) * _finite_poch(p.bc, r, k))
    )
    norm = a ** (-k) * math.sqrt(norm_sq)
    total: complex = 0.0
    term: complex = 1.0
    for j in range(k + 1):
        total += term
        term *= (
            (1.0 - q**k * r**j)
            * (1.0 - a * x * r**j)
            * (1.0 - (a / x) * r**j)
            / ((1.0 - r ** (j + 1)) * (1.0 - p.ab * r**j) * (1.0 - p.ac * r**j))
            * r
        )
    return norm * total
