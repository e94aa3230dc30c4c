"""Decomposition engines for coupled pairs of unitary series.

A coupled pair is a direct sum of two tensor-product factors sharing a
multiplier grading.  On each graded subspace the coupled Casimir action is a
symmetric tridiagonal (Jacobi) matrix with respect to a gauged chain basis.
This module builds those matrices three independent ways and compares them:

* composition of single-factor generator actions (`jacobi_operator`),
* closed-form chain coefficients (`predicted_coeffs`),
* the recurrence satisfied by the mapped orthogonal systems from
  :mod:`.bigqjacobi`, :mod:`.bigqjacobipoly` and :mod:`.vvbigqjacobi`
  (`theta_map` plus the per-family parameter maps).

It also produces the catalog of irreducible constituents (`spectrum_catalog`)
and numerical diagnostics comparing truncated-matrix spectra against the
catalog (`truncated_spectrum_check`).

Three operator families carry chains: `Tmix` (one highest-weight and one
lowest-weight factor, completed by a pair of two-sided factors), `Tprime`
(the complementary completion of the same pair, whose spectrum is a pure
tower), and `TPP` (two continuous-series factors and their half-period
shifts).  `Catalog5` packs describe four further families for which only the
constituent catalog is implemented; their chain operators raise
:class:`~.bigqjacobi.DomainError`.

Chain entries grow like ``q**(-4n)`` toward the lattice-origin end, so
windows are capped: `jacobi_operator` drops rows whose entries would exceed
``entry_cap`` and records the effective window.  Eigenvalues of the graded
windows are located by inertia-count bisection carried in 80-bit extended
precision (`truncated_spectrum_check`), which keeps high *relative*
accuracy across the entry scales where a double-precision dense solve
would bury every band-scale eigenvalue in rounding noise from the big
rows.  `tridiagonal_eigenvalues_mp` is an independent arbitrary-precision
fallback used to cross-check that machinery.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from mpmath import mp

from .qkernel import QContext
from .repcore import (
    Complementary,
    Generator,
    NegDiscrete,
    PosDiscrete,
    Principal,
    RepLabel,
    Strange,
    delta_omega_action,
    generator_action,
    normalize_label,
    scaled_casimir,
)
from .bigqjacobi import (
    BigQJacobiParams,
    DomainError,
    lattice_point,
    phi_normalized,
)
from .bigqjacobipoly import PolyParams, r_func, x_lattice_point
from .vvbigqjacobi import VVParams, psi_normalized

__all__ = [
    "Tmix",
    "Tprime",
    "TPP",
    "Catalog5",
    "TensorAnalog",
    "ChainStructureError",
    "GradedBasisVector",
    "TridiagonalBlock",
    "TridiagonalOperator",
    "ContinuousEntry",
    "DiscreteEntry",
    "DecompositionSpectrum",
    "EigenRecord",
    "SpectrumDiagnostics",
    "basis_resolve",
    "chain_support",
    "summand_factors",
    "jacobi_operator",
    "predicted_coeffs",
    "theta_map",
    "tmix_measure_params",
    "tprime_poly_params",
    "tpp_vv_params",
    "k_grading",
    "k_grading_printed",
    "spectrum_catalog",
    "casimir_crosscheck",
    "spectral_point",
    "rho_ceiling",
    "truncated_spectrum_check",
    "tridiagonal_eigenvalues_mp",
    "ENTRY_CAP",
]

#: Construction-time bound on chain entries; beyond this the window is closed.
ENTRY_CAP = 1e120

_BAND = (-4.0, 0.0)


class ChainStructureError(AssertionError):
    """A composed action violated the expected chain structure.

    Raised when a composed Casimir action produces a target off the graded
    chain (the graded subspaces would not be invariant), when the composed
    matrix fails to be symmetric, or when an entry that must be real carries
    a non-negligible imaginary part.
    """


def rho_ceiling(ctx: QContext) -> float:
    """Upper endpoint of the continuous spectral label, -pi / (2 ln q)."""
    return -math.pi / (2.0 * math.log(ctx.q))


# --------------------------------------------------------------------------
# coupled-pair parameter packs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Tmix:
    """Coupled pair of a highest-weight and a lowest-weight factor.

    The first summand tensors a highest-weight factor with weight ``k1``
    and a lowest-weight factor with weight ``k2``; the second summand
    tensors the two two-sided factors that complete it to an honest tensor
    product.  ``eps`` shifts the two-sided labels.
    """

    k1: float
    k2: float
    eps: float

    def __post_init__(self) -> None:
        if not (self.k1 > 0 and self.k2 > 0):
            raise ValueError("weights k1, k2 must be positive")


@dataclass(frozen=True)
class Tprime:
    """The complementary coupling of the same factors as :class:`Tmix`.

    Tensors the highest-weight factor with a two-sided factor and vice
    versa.  The shift ``eps`` must be a half-integer so that the two-sided
    chain can be relabeled consistently.
    """

    k1: float
    k2: float
    eps: float

    def __post_init__(self) -> None:
        if not (self.k1 > 0 and self.k2 > 0):
            raise ValueError("weights k1, k2 must be positive")
        if abs(2.0 * self.eps - round(2.0 * self.eps)) > 1e-12:
            raise ValueError("eps must be a half-integer for this coupling")

    @property
    def two_eps(self) -> int:
        return int(round(2.0 * self.eps))


@dataclass(frozen=True)
class TPP:
    """Coupled pair of two continuous-series factors.

    The first summand uses labels ``(rho1, eps1+eps)`` and
    ``(rho2, eps2-eps)``; the second uses the half-period shifted labels
    ``rho + rho_ceiling`` with ``eps`` reflected.  Both chains are
    two-sided.
    """

    rho1: float
    rho2: float
    eps1: float
    eps2: float
    eps: float

    def __post_init__(self) -> None:
        if not (self.rho1 > 0 and self.rho2 > 0):
            raise ValueError("continuous labels rho1, rho2 must be positive")


_CATALOG_KEYS = {
    "CC": ("lam1", "lam2", "eps1", "eps2", "eps"),
    "PC": ("rho", "lam", "eps1", "eps2", "eps"),
    "PplusDisc": ("rho", "k", "eps1", "eps"),
    "CplusDisc": ("lam", "k", "eps1", "eps"),
}


@dataclass(frozen=True)
class Catalog5:
    """Catalog-only coupled pair: constituents are known, chains are not built.

    ``variant`` selects the factor types: ``"CC"`` two complementary-series
    factors, ``"PC"`` continuous with complementary, ``"PplusDisc"``
    continuous with lowest-weight, ``"CplusDisc"`` complementary with
    lowest-weight.  ``params`` maps the keys listed in ``_CATALOG_KEYS``.
    Only :func:`spectrum_catalog` accepts these packs.
    """

    variant: str
    params: dict

    def __post_init__(self) -> None:
        if self.variant not in _CATALOG_KEYS:
            raise ValueError(
                f"unknown variant {self.variant!r}; expected one of {sorted(_CATALOG_KEYS)}"
            )
        required = _CATALOG_KEYS[self.variant]
        missing = [k for k in required if k not in self.params]
        extra = [k for k in self.params if k not in required]
        if missing or extra:
            raise ValueError(
                f"variant {self.variant!r} needs parameters {required}; "
                f"missing {missing}, unexpected {extra}"
            )
        for key in ("lam", "lam1", "lam2"):
            if key in self.params and not (-0.5 < self.params[key] < 0.0):
                raise ValueError(f"{key} must lie in (-1/2, 0)")
        if "k" in self.params and not self.params["k"] > 0:
            raise ValueError("weight k must be positive")
        if "rho" in self.params and not self.params["rho"] > 0:
            raise ValueError("continuous label rho must be positive")


TensorAnalog = Union[Tmix, Tprime, TPP, Catalog5]


def _require_chains(analog: TensorAnalog) -> None:
    if isinstance(analog, Catalog5):
        raise DomainError(
            "catalog-only family: chain operators are not defined for Catalog5 packs"
        )


# --------------------------------------------------------------------------
# graded chain basis
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedBasisVector:
    """One gauged basis vector of a graded chain.

    ``pair`` holds the factor indices of the underlying product vector and
    ``sign`` the gauge (+1 or -1) making all chain couplings nonnegative.
    The zero vector (an index below the closed end of a one-sided chain) is
    encoded with ``pair=None`` and ``sign=0``.
    """

    p: int
    n: int
    sigma: str
    factors: Optional[tuple]
    pair: Optional[tuple]
    sign: int

    @property
    def is_zero(self) -> bool:
        return self.pair is None


def chain_support(analog: TensorAnalog, sigma: str) -> str:
    """Index support of the chain: "natural" (closed at 0) or "integer"."""
    _require_chains(analog)
    if sigma not in ("-", "+"):
        raise ValueError(f"sigma must be '-' or '+', got {sigma!r}")
    if isinstance(analog, Tmix):
        return "natural" if sigma == "-" else "integer"
    if isinstance(analog, Tprime):
        return "natural"
    return "integer"


def summand_factors(analog: TensorAnalog, ctx: QContext) -> dict:
    """The two irreducible factors of each summand, keyed by chain tag."""
    _require_chains(analog)
    if isinstance(analog, (Tmix, Tprime)):
        k1, k2, eps = analog.k1, analog.k2, analog.eps
        for k in (k1, k2):
            if abs(k - 0.5) < 1e-12:
                raise DomainError(
                    "two-sided factor label vanishes at weight 1/2; the chain degenerates"
                )
        s1 = Strange(abs(k1 - 0.5), -eps - k1)
        s2 = Strange(abs(k2 - 0.5), eps + k2)
        if isinstance(analog, Tmix):
            return {"-": (NegDiscrete(k1), PosDiscrete(k2)), "+": (s1, s2)}
        return {"-": (NegDiscrete(k1), s2), "+": (s1, PosDiscrete(k2))}
    shift = rho_ceiling(ctx)
    a = analog
    return {
        "+": (
            Principal(a.rho1, a.eps1 + a.eps),
            Principal(a.rho2, a.eps2 - a.eps),
        ),
        "-": (
            Principal(a.rho1 + shift, a.eps1 - a.eps),
            Principal(a.rho2 + shift, a.eps2 + a.eps),
        ),
    }


def basis_resolve(analog: TensorAnalog, p: int, n: int, sigma: str,
                  ctx: QContext) -> GradedBasisVector:
    """Resolve chain index ``n`` of the grade-``p`` chain tagged ``sigma``.

    >>> v = basis_resolve(Tmix(0.3, 0.4, 0.1), 2, 1, "-", QContext(0.5))
    >>> v.pair, v.sign
    ((3, 1), 1)
    """
    _require_chains(analog)
    if sigma not in ("-", "+"):
        raise ValueError(f"sigma must be '-' or '+', got {sigma!r}")
    factors = summand_factors(analog, ctx)[sigma]

    def zero() -> GradedBasisVector:
        return GradedBasisVector(p, n, sigma, None, None, 0)

    if isinstance(analog, Tmix):
        if sigma == "-":
            if n < 0:
                return zero()
            pair = (n + p, n) if p >= 0 else (n, n - p)
            sign = 1
        else:
            if p >= 0:
                pair = (-n - p, n)
                sign = -1 if (n + p) % 2 else 1
            else:
                pair = (-n, n - p)
                sign = -1 if n % 2 else 1
    elif isinstance(analog, Tprime):
        if n < 0:
            return zero()
        if sigma == "-":
            pair = (n, n + p)
            sign = 1
        else:
            pair = (analog.two_eps - n + p, n)
            sign = -1 if n % 2 else 1
    else:
        pair = (-n, p + n)
        sign = -1 if n % 2 else 1
    return GradedBasisVector(p, n, sigma, factors, pair, sign)


# --------------------------------------------------------------------------
# composed chain rows
# --------------------------------------------------------------------------


def _composed_row(analog: TensorAnalog, p: int, n: int, sigma: str,
                  ctx: QContext) -> dict:
    """Row ``n`` of (1/q - q)^2 * [coupled Casimir] + 2 in the gauged basis.

    Composes the two single-factor actions, folds in the gauge, checks that
    every target stays on the chain and that entries are real.
    """
    v = basis_resolve(analog, p, n, sigma, ctx)
    if v.is_zero:
        raise ValueError(f"chain index {n} resolves to the zero vector")
    r1, r2 = v.factors
    scale2 = (1.0 / ctx.q - ctx.q) ** 2

    cand = {}
    for m in (n - 1, n, n + 1):
        w = basis_resolve(analog, p, m, sigma, ctx)
        if not w.is_zero:
            cand[w.pair] = (m, w.sign)

    acc: dict = {}
    for tgt, coeff in delta_omega_action(r1, r2, v.pair, ctx):
        if coeff == 0:
            continue
        if tgt not in cand:
            raise ChainStructureError(
                f"composed action leaves the chain: {v.pair} -> {tgt} "
                f"(grade {p}, tag {sigma})"
            )
        m, sign_m = cand[tgt]
        acc[m] = acc.get(m, 0.0 + 0.0j) + complex(coeff) * v.sign * sign_m

    row: dict = {}
    for m, cval in acc.items():
        if abs(cval.imag) > 1e-12 * max(1.0, abs(cval)):
            raise ChainStructureError(
                f"non-real chain entry at n={n}, m={m}: {cval}"
            )
        row[m] = cval.real * scale2
    row[n] = row.get(n, 0.0) + 2.0
    return row


# --------------------------------------------------------------------------
# tridiagonal operator windows
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TridiagonalBlock:
    """Symmetric tridiagonal window of one chain.

    ``lo`` is the chain index of the first row; ``offdiag[i]`` couples rows
    ``lo+i`` and ``lo+i+1``.  Couplings are nonnegative by gauge.
    """

    sigma: str
    lo: int
    diag: tuple
    offdiag: tuple

    def __post_init__(self) -> None:
        if len(self.offdiag) != max(len(self.diag) - 1, 0):
            raise ValueError("offdiag length must be len(diag) - 1")
        for a in self.offdiag:
            if a < 0:
                raise ValueError(f"negative chain coupling {a}")

    @property
    def size(self) -> int:
        return len(self.diag)

    @property
    def hi(self) -> int:
        return self.lo + self.size - 1

    def dense(self) -> np.ndarray:
        m = np.diag(np.asarray(self.diag, dtype=float))
        off = np.asarray(self.offdiag, dtype=float)
        if off.size:
            m += np.diag(off, 1) + np.diag(off, -1)
        return m


@dataclass(frozen=True)
class TridiagonalOperator:
    """All chain windows of one grade, with the construction entry cap."""

    p: int
    blocks: tuple
    entry_cap: float

    def block(self, sigma: str) -> TridiagonalBlock:
        for b in self.blocks:
            if b.sigma == sigma:
                return b
        raise KeyError(sigma)


def jacobi_operator(analog: TensorAnalog, p: int, N: int, ctx: QContext,
                    entry_cap: float = ENTRY_CAP) -> TridiagonalOperator:
    """Window of the graded chain operator built by composing factor actions.

    The matrix is (1/q - q)^2 times the coupled Casimir action plus twice
    the identity, so the free end of a two-sided chain approaches couplings
    (1, 0) and the essential band is [-2, 2].  One-sided chains span rows
    0..N, two-sided chains -N..N; a chain is closed early when an entry
    would exceed ``entry_cap`` (entries grow like ``q**(-4n)``), and the
    effective window is recorded in the returned blocks.
    """
    _require_chains(analog)
    if N < 1:
        raise ValueError("window half-width N must be at least 1")
    blocks = []
    for sigma in ("-", "+"):
        lo = 0 if chain_support(analog, sigma) == "natural" else -N
        lo_eff = lo
        diag: list = []
        off: list = []
        prev_up: Optional[float] = None
        for n in range(lo, N + 1):
            try:
                row = _composed_row(analog, p, n, sigma, ctx)
                down = row.get(n - 1, 0.0)
                here = row.get(n, 0.0)
                up = row.get(n + 1, 0.0)
                usable = all(math.isfinite(v) for v in (down, here, up)) \
                    and max(abs(down), abs(here), abs(up)) <= entry_cap
            except OverflowError:
                usable = False
            if not usable:
                if not diag:
                    # two-sided chains grow at both ends; skip over-cap rows
                    # until the window reaches representable entries
                    lo_eff = n + 1
                    prev_up = None
                    continue
                break
            if diag:
                scale = max(1.0, abs(down), abs(prev_up))
                if abs(down - prev_up) > 1e-10 * scale:
                    raise ChainStructureError(
                        f"asymmetric coupling between rows {n - 1} and {n}: "
                        f"{prev_up} vs {down}"
                    )
                a = 0.5 * (down + prev_up)
                if a < 0:
                    if a < -1e-10 * scale:
                        raise ChainStructureError(
                            f"negative coupling {a} after gauge at row {n}"
                        )
                    a = 0.0
                off.append(a)
            diag.append(here)
            prev_up = up
        if not diag:
            raise DomainError(
                f"no chain entries below the cap in the requested window "
                f"(grade {p}, tag {sigma})"
            )
        blocks.append(TridiagonalBlock(sigma, lo_eff, tuple(diag), tuple(off)))
    return TridiagonalOperator(p, tuple(blocks), entry_cap)


# --------------------------------------------------------------------------
# closed-form chain coefficients
# --------------------------------------------------------------------------


def predicted_coeffs(analog: TensorAnalog, p: int, n: int, sigma: str,
                     ctx: QContext) -> tuple:
    """Closed-form chain coefficients (a_n, b_n) of the grade-``p`` chain.

    ``a_n`` couples rows ``n`` and ``n+1``; ``b_n`` is the diagonal entry of
    the operator built by :func:`jacobi_operator` (band convention [-2, 2]).
    These formulas are evaluated directly from the parameter pack and are
    independent of both the composition route and the mapped orthogonal
    systems.
    """
    _require_chains(analog)
    if sigma not in ("-", "+"):
        raise ValueError(f"sigma must be '-' or '+', got {sigma!r}")
    q = ctx.q

    if isinstance(analog, Tmix):
        if chain_support(analog, sigma) == "natural" and n < 0:
            raise ValueError("one-sided chain has no rows below 0")
        if p >= 0:
            kk1, kk2, P = analog.k1, analog.k2, p
        else:
            kk1, kk2, P = analog.k2, analog.k1, -p
        t = -1.0 if sigma == "-" else q ** (2.0 * analog.eps)
        s = 2.0 * kk1 + 2.0 * kk2 + 2.0 * P
        rad = (
            (1.0 + t * q ** (4.0 * kk1 + 2.0 * P + 2 * n))
            * (1.0 + t * q ** (2.0 * P + 2 * n + 2))
            * (1.0 + t * q ** (4.0 * kk2 + 2 * n))
            * (1.0 + t * q ** (2 * n + 2))
        )
        a = t ** -2 * q ** (-2.0 - s - 4 * n) * math.sqrt(max(rad, 0.0))
        b = (
            q ** (2.0 * kk2 - 2.0 * kk1 - 2.0 * P - 1.0)
            + q ** (2.0 * kk1 - 2.0 * kk2 + 2.0 * P + 1.0)
            - t ** -2
            * q ** (1.0 - s - 4 * n)
            * (1.0 + t * q ** (2 * n + 4.0 * kk2 - 2.0))
            * (1.0 + t * q ** (2 * n))
            - t ** -2
            * q ** (-1.0 - s - 4 * n)
            * (1.0 + t * q ** (4.0 * kk1 + 2.0 * P + 2 * n))
            * (1.0 + t * q ** (2.0 * P + 2 * n + 2))
        )
        return a, b

    if isinstance(analog, Tprime):
        if n < 0:
            raise ValueError("one-sided chain has no rows below 0")
        qt = q * q
        aa = q ** (4.0 * analog.k1 - 2.0)
        bb = q ** (4.0 * analog.k2 - 2.0)
        cc = -(q ** (4.0 * analog.k1 - 2.0 * p - 2.0 * analog.eps - 2.0))
        x = (aa if sigma == "-" else cc) * qt ** (n + 1)
        rad = (1.0 - x) * (1.0 - x / aa) * (1.0 - x / cc) * (1.0 - bb * x / cc)
        a = -(cc * math.sqrt(aa) / (x * x * math.sqrt(bb))) * math.sqrt(max(rad, 0.0))
        b = (
            cc
            * math.sqrt(aa * qt)
            / (x * x * math.sqrt(bb))
            * (
                (1.0 - x) * (1.0 - x / aa)
                + qt * (1.0 - bb * x / (cc * qt)) * (1.0 - x / (cc * qt))
            )
            - cc * math.sqrt(qt / (aa * bb))
            - math.sqrt(aa * bb / qt) / cc
        )
        return a, b

    # two continuous factors
    sgn = -1.0 if sigma == "-" else 1.0
    lnq = math.log(q)

    def cpow(re: float, rho: float) -> complex:
        return q ** re * cmath.exp(2j * rho * lnq)

    e1, e2, ev = analog.eps1, analog.eps2, analog.eps
    f1 = 1.0 - sgn * cpow(-2 * n + 2 * e1 + 2 * sgn * ev - 1.0, analog.rho1)
    f2 = 1.0 - sgn * cpow(-2 * n - 2 * p - 2 * e2 + 2 * sgn * ev - 1.0, analog.rho2)
    a = abs(f1 * f2)
    s = q ** (1.0 - 2 * e1 - 2 * e2 - 2 * p)
    g2 = 1.0 - sgn * cpow(-2 * n - 2 * p - 2 * e2 + 2 * sgn * ev + 1.0, analog.rho2)
    b = s + 1.0 / s - s * abs(f1) ** 2 - abs(g2) ** 2 / s
    return a, b


# --------------------------------------------------------------------------
# maps onto the orthogonal systems
# --------------------------------------------------------------------------


def tmix_measure_params(analog: Tmix, p: int, ctx: QContext) -> BigQJacobiParams:
    """Parameters of the scalar spectral measure carrying the Tmix chains."""
    q = ctx.q
    k1, k2 = analog.k1, analog.k2
    if p >= 0:
        a = q ** (2.0 * k2 - 2.0 * k1 - 2.0 * p - 1.0)
        c = q ** (2.0 * k1 - 2.0 * k2 - 1.0)
    else:
        a = q ** (2.0 * k1 - 2.0 * k2 + 2.0 * p - 1.0)
        c = q ** (2.0 * k2 - 2.0 * k1 - 1.0)
    b = q ** (1.0 - 2.0 * k1 - 2.0 * k2)
    return BigQJacobiParams(a, b, c, q ** (2.0 * analog.eps), QContext(q * q))


def tprime_poly_params(analog: Tprime, p: int, ctx: QContext) -> PolyParams:
    """Parameters of the polynomial system carrying the Tprime chains."""
    q = ctx.q
    return PolyParams(
        q ** (4.0 * analog.k1 - 2.0),
        q ** (4.0 * analog.k2 - 2.0),
        -(q ** (4.0 * analog.k1 - 2.0 * p - 2.0 * analog.eps - 2.0)),
        QContext(q * q),
    )


def tpp_vv_params(analog: TPP, p: int, ctx: QContext) -> VVParams:
    """Parameters of the two-component spectral system for the TPP chains."""
    q = ctx.q
    ceiling = rho_ceiling(ctx)
    if not (analog.rho1 < ceiling and analog.rho2 < ceiling):
        raise DomainError(
            f"continuous labels must lie below {ceiling}; "
            f"got {analog.rho1}, {analog.rho2}"
        )
    lnq = math.log(q)
    a = q ** (2.0 * analog.eps2 + 2.0 * p + 1.0) * cmath.exp(2j * analog.rho2 * lnq)
    c = q ** (1.0 - 2.0 * analog.eps1) * cmath.exp(2j * analog.rho1 * lnq)
    z_plus = q ** (-2.0 * analog.eps)
    z_minus = -(q ** (2.0 * analog.eps))
    return VVParams(a, c, z_plus, z_minus, QContext(q * q))


def theta_map(analog: TensorAnalog, p: int, n: int, sigma: str,
              ctx: QContext) -> Callable:
    """Normalized eigenfunction attached to chain index ``n``.

    Returns a callable of the spectral variable.  The gauge of
    :func:`basis_resolve` is already absorbed, so applying the chain matrix
    to the sequence of returned functions reproduces the three-term
    recurrence with the nonnegative couplings of :func:`predicted_coeffs`.
    Indices below a closed chain end yield the zero function.
    """
    _require_chains(analog)
    if sigma not in ("-", "+"):
        raise ValueError(f"sigma must be '-' or '+', got {sigma!r}")

    if isinstance(analog, Tmix):
        pars = tmix_measure_params(analog, p, ctx)
        if sigma == "-":
            if n < 0:
                return lambda gamma: 0.0
            y = lattice_point(pars, "neg", n)
        else:
            y = lattice_point(pars, "t", n)
        return lambda gamma, _y=y, _p=pars: phi_normalized(gamma, _y, _p)

    if isinstance(analog, Tprime):
        if n < 0:
            return lambda m: 0.0
        pars = tprime_poly_params(analog, p, ctx)
        x = x_lattice_point(pars, "a" if sigma == "-" else "c", n)
        return lambda m, _x=x, _p=pars: r_func(_x, m, _p)

    pars = tpp_vv_params(analog, p, ctx)
    z = pars.z_minus if sigma == "-" else pars.z_plus
    y = z * (ctx.q * ctx.q) ** n
    return lambda gamma, _y=y, _p=pars: psi_normalized(_y, gamma, _p)


# --------------------------------------------------------------------------
# multiplier grading
# --------------------------------------------------------------------------


def k_grading(analog: TensorAnalog, p: int, ctx: QContext) -> float:
    """Composed multiplier eigenvalue on the grade-``p`` subspace.

    Evaluated by composing the factor actions at several chain positions;
    a disagreement between positions means the grading is broken and raises
    :class:`ChainStructureError`.
    """
    _require_chains(analog)
    vals = []
    for sigma in ("-", "+"):
        for n in (1, 2):
            v = basis_resolve(analog, p, n, sigma, ctx)
            if v.is_zero:
                continue
            r1, r2 = v.factors
            ((t1, c1),) = generator_action(r1, Generator.K, v.pair[0], ctx)
            ((t2, c2),) = generator_action(r2, Generator.K, v.pair[1], ctx)
            if t1 != v.pair[0] or t2 != v.pair[1]:
                raise ChainStructureError("multiplier action is not diagonal")
            prod = complex(c1) * complex(c2)
            if abs(prod.imag) > 1e-12 * abs(prod):
                raise ChainStructureError(f"non-real multiplier value {prod}")
            vals.append(prod.real)
    for v in vals[1:]:
        if abs(v - vals[0]) > 1e-12 * max(1.0, abs(vals[0])):
            raise ChainStructureError(
                f"multiplier value varies along the grade: {vals}"
            )
    return vals[0]


def k_grading_printed(analog: TensorAnalog, p: int, ctx: QContext) -> float:
    """Displayed closed-form multiplier value for the grade-``p`` subspace.

    For :class:`Tmix` the displayed value uses a squared-exponent
    convention and differs from the composed eigenvalue; both are reported
    in :class:`SpectrumDiagnostics` rather than reconciled.  For
    :class:`Tprime` no closed form is displayed and the composed-value
    formula is returned.
    """
    _require_chains(analog)
    q = ctx.q
    if isinstance(analog, Tmix):
        return q ** (-2.0 * p + 2.0 * analog.k2 - 2.0 * analog.k1)
    if isinstance(analog, Tprime):
        return q ** (p + analog.eps + analog.k2 - analog.k1)
    return q ** (p + analog.eps1 + analog.eps2)


# --------------------------------------------------------------------------
# constituent catalogs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ContinuousEntry:
    """A continuous-series band in a decomposition, with its multiplicity."""

    eps: float
    multiplicity: int
    rho_min: float
    rho_max: float
    family: str = "principal"


@dataclass(frozen=True)
class DiscreteEntry:
    """One discrete constituent.

    ``value`` is the label produced by the tower formula before
    canonicalization (two-sided labels are folded to positive values,
    complementary labels into (-1/2, 0)); ``label`` is the canonical
    admissible label.  ``index`` is the tower index, None for singletons.
    """

    family: str
    index: Optional[int]
    value: float
    eps: Optional[float]
    label: RepLabel
    condition: str
    multiplicity: int = 1


@dataclass(frozen=True)
class DecompositionSpectrum:
    """Catalog of irreducible constituents of a coupled pair."""

    continuous: tuple
    discrete: tuple
    notes: tuple
    max_labels: int

    def discrete_labels(self) -> list:
        return [e.label for e in self.discrete]


def _int_above(x: float) -> int:
    """Smallest integer strictly greater than x."""
    return math.floor(x) + 1


def _strange_integer_tower(base: float, epsv: float, ctx: QContext,
                           max_labels: int, out: list) -> None:
    j = _int_above(-base)
    for _ in range(max_labels):
        sig = base + j
        lab = normalize_label(Strange(sig, epsv), ctx)
        out.append(
            DiscreteEntry("strange", j, sig, epsv, lab, "series label positive")
        )
        j += 1


def _strange_natural_tower(base: float, epsv: float, ctx: QContext,
                           max_labels: int, out: list, notes: list) -> None:
    for m in range(max_labels):
        sig = base + m
        folded = abs(sig)
        if folded < 1e-12:
            notes.append(
                f"tower index {m} lands on the vanishing two-sided label and is omitted"
            )
            continue
        lab = normalize_label(Strange(folded, epsv), ctx)
        out.append(DiscreteEntry("strange", m, sig, epsv, lab, "all indices"))


def _discrete_integer_tower(family: str, start: float, ctx: QContext,
                            max_labels: int, out: list) -> None:
    ctor = PosDiscrete if family == "pos" else NegDiscrete
    j = _int_above(0.5 - start)
    for _ in range(max_labels):
        k = start + j
        lab = normalize_label(ctor(k), ctx)
        out.append(DiscreteEntry(family, j, k, None, lab, "weight above 1/2"))
        j += 1


def _discrete_finite_tower(family: str, diff: float, ctx: QContext,
                           max_labels: int, out: list, notes: list) -> None:
    ctor = PosDiscrete if family == "pos" else NegDiscrete
    count = 0
    j = 0
    while diff - j > 0.5:
        if count >= max_labels:
            notes.append(f"finite {family} tower truncated at {max_labels} entries")
            break
        k = diff - j
        lab = normalize_label(ctor(k), ctx)
        out.append(DiscreteEntry(family, j, k, None, lab, "weight above 1/2"))
        j += 1
        count += 1


def _try_complementary(lam_raw: float, eps_raw: float, ctx: QContext,
                       condition: str, out: list, notes: list) -> None:
    lam = lam_raw if lam_raw > -0.5 else -1.0 - lam_raw
    try:
        lab = normalize_label(Complementary(lam, eps_raw % 1.0), ctx)
    except ValueError as exc:
        notes.append(f"complementary constituent omitted (inadmissible): {exc}")
        return
    out.append(
        DiscreteEntry("complementary", None, lam_raw, eps_raw, lab, condition)
    )


def spectrum_catalog(analog: TensorAnalog, ctx: QContext,
                     max_labels: int = 12) -> DecompositionSpectrum:
    """Catalog the irreducible constituents of a coupled pair.

    Infinite towers are truncated to ``max_labels`` entries per family, in
    increasing distance from the band; a note records the truncation.
    Families that cannot occur for the given parameters are simply absent.
    """
    ceiling = rho_ceiling(ctx)
    cont: list = []
    disc: list = []
    notes: list = []

    if isinstance(analog, Tmix):
        epsp = analog.k2 - analog.k1
        cont.append(ContinuousEntry(epsp, 1, 0.0, ceiling))
        _strange_integer_tower(
            analog.k1 + analog.k2 + analog.eps + 0.5, epsp, ctx, max_labels, disc
        )
        notes.append("two-sided tower truncated; it continues upward")
        if analog.k1 + analog.k2 < 0.5:
            _try_complementary(
                -(analog.k1 + analog.k2), epsp, ctx,
                "sum of weights below 1/2", disc, notes,
            )
        if analog.k2 - analog.k1 > 0.5:
            _discrete_finite_tower(
                "pos", analog.k2 - analog.k1, ctx, max_labels, disc, notes
            )
        if analog.k1 - analog.k2 > 0.5:
            _discrete_finite_tower(
                "neg", analog.k1 - analog.k2, ctx, max_labels, disc, notes
            )
    elif isinstance(analog, Tprime):
        _strange_natural_tower(
            analog.k1 + analog.k2 - 0.5,
            analog.eps - analog.k1 + analog.k2,
            ctx, max_labels, disc, notes,
        )
        notes.append("two-sided tower truncated; it continues upward")
    elif isinstance(analog, TPP):
        epsp = analog.eps1 + analog.eps2
        if not (analog.rho1 < ceiling and analog.rho2 < ceiling):
            raise DomainError(f"continuous labels must lie below {ceiling}")
        cont.append(ContinuousEntry(epsp, 2, 0.0, ceiling))
        _strange_integer_tower(
            analog.eps2 - analog.eps1 - 0.5, epsp, ctx, max_labels, disc
        )
        _discrete_integer_tower("pos", epsp, ctx, max_labels, disc)
        _discrete_integer_tower("neg", -epsp, ctx, max_labels, disc)
        notes.append("all three towers truncated; they continue upward")
    else:
        pr = analog.params
        if analog.variant in ("CC", "PC"):
            epsp = pr["eps1"] + pr["eps2"]
            cont.append(ContinuousEntry(epsp, 2, 0.0, ceiling))
            _strange_integer_tower(
                pr["eps2"] - pr["eps1"] - 0.5, epsp, ctx, max_labels, disc
            )
            _discrete_integer_tower("pos", epsp, ctx, max_labels, disc)
            _discrete_integer_tower("neg", -epsp, ctx, max_labels, disc)
            notes.append("all three towers truncated; they continue upward")
            notes.append(
                "kernel parameters leave the conjugate-pair regime here; one "
                "extra discrete mass point can occur and is not cataloged"
            )
            if analog.variant == "CC" and pr["lam1"] + pr["lam2"] < -0.5:
                _try_complementary(
                    pr["lam1"] + pr["lam2"], epsp, ctx,
                    "sum of labels below -1/2", disc, notes,
                )
            if analog.variant == "PC" and not pr["rho"] < ceiling:
                raise DomainError(f"continuous label must lie below {ceiling}")
        else:
            if "rho" in pr and not pr["rho"] < ceiling:
                raise DomainError(f"continuous label must lie below {ceiling}")
            epsp = pr["eps1"] + pr["k"]
            cont.append(ContinuousEntry(epsp, 1, 0.0, ceiling))
            _strange_integer_tower(
                pr["k"] - pr["eps1"] + pr["eps"] + 0.5, epsp, ctx, max_labels, disc
            )
            _discrete_integer_tower("pos", pr["k"] + pr["eps1"], ctx, max_labels, disc)
            notes.append("both towers truncated; they continue upward")
            if analog.variant == "CplusDisc" and pr["lam"] + pr["k"] < -0.5:
                _try_complementary(
                    -(pr["lam"] + pr["k"]), epsp, ctx,
                    "label plus weight below -1/2", disc, notes,
                )

    return DecompositionSpectrum(tuple(cont), tuple(disc), tuple(notes), max_labels)


# --------------------------------------------------------------------------
# eigenvalue consistency across routes
# --------------------------------------------------------------------------


def spectral_point(label: RepLabel, ctx: QContext) -> complex:
    """Point x with x + 1/x - 2 equal to the scaled Casimir value of a label."""
    q = ctx.q
    if isinstance(label, (PosDiscrete, NegDiscrete)):
        return complex(q ** (2.0 * label.k - 1.0))
    if isinstance(label, Strange):
        return complex(-(q ** (2.0 * label.sigma)))
    if isinstance(label, Complementary):
        return complex(q ** (2.0 * label.lam + 1.0))
    if isinstance(label, Principal):
        return cmath.exp(2j * label.rho * math.log(q))
    raise TypeError(f"unsupported label {label!r}")


def casimir_crosscheck(spectrum: DecompositionSpectrum, ctx: QContext,
                       rho_fracs: tuple = (0.25, 0.6)) -> float:
    """Largest deviation between three eigenvalue routes over a catalog.

    For every cataloged constituent (continuous bands sampled at
    ``rho_fracs`` of their length) the closed-form scaled Casimir value is
    compared against the composed generator action and against
    x + 1/x - 2 at the label's spectral point.  Returns the worst
    deviation, relative for values larger than one in magnitude.
    """
    labels = [e.label for e in spectrum.discrete]
    for entry in spectrum.continuous:
        for f in rho_fracs:
            rho = entry.rho_min + f * (entry.rho_max - entry.rho_min)
            labels.append(normalize_label(Principal(rho, entry.eps), ctx))
    worst = 0.0
    scale2 = (1.0 / ctx.q - ctx.q) ** 2
    for lab in labels:
        closed = scaled_casimir(lab, ctx.q)
        ((tgt, coeff),) = generator_action(lab, Generator.Omega, 1, ctx)
        if tgt != 1:
            raise ChainStructureError("Casimir action is not diagonal")
        composed = complex(coeff).real * scale2
        x = spectral_point(lab, ctx)
        mapped = (x + 1.0 / x - 2.0).real
        rel = max(1.0, abs(closed))
        worst = max(worst, abs(closed - composed) / rel, abs(closed - mapped) / rel)
    return worst


# --------------------------------------------------------------------------
# truncated-spectrum diagnostics
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenRecord:
    """One eigenvalue of a truncated chain window, already shifted by -2 so
    that it is comparable with scaled Casimir values (band [-4, 0])."""

    value: float
    sigma: str
    kind: str  # "band" | "bound" | "edge"
    boundary_mass: float
    match_family: Optional[str] = None
    match_index: Optional[int] = None
    match_value: Optional[float] = None
    gap: Optional[float] = None


@dataclass(frozen=True)
class SpectrumDiagnostics:
    """Comparison of a truncated chain spectrum against the catalog.

    ``windows`` lists the effective rows per chain after capping.  Records
    tagged "edge" carry significant eigenvector mass at artificial window
    ends and are truncation artifacts, not spectral claims.  Both the
    composed multiplier value and the displayed closed form are reported;
    for some families the two use different exponent conventions.
    """

    p: int
    requested_halfwidth: int
    windows: tuple
    band: tuple
    band_pad: float
    records: tuple
    catalog: DecompositionSpectrum
    k_value: float
    k_value_printed: float

    def bound(self) -> list:
        return [r for r in self.records if r.kind == "bound"]

    def band_excess(self) -> float:
        lo, hi = self.band
        worst = 0.0
        for r in self.records:
            if r.kind == "band":
                worst = max(worst, lo - r.value, r.value - hi)
        return max(worst, 0.0)


_LD = np.longdouble
# 80-bit extended precision carries ~1e4932 of range, enough to run pivot
# sweeps over windows whose entries span a couple hundred decades.  On
# platforms where long double is plain double the sweeps still work but
# only for windows within double range; the entry cap keeps us there.
_LD_PIVMIN = _LD(np.finfo(_LD).tiny) * _LD(2.0) ** 64


def _sturm_counts(d: np.ndarray, e2: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Number of eigenvalues strictly below each shift in ``xs``.

    Inertia count via the pivots of the shifted LDL^T factorization,
    vectorized over shifts and carried in extended precision so that
    windows with steeply graded entries still produce exact counts.  A
    vanishing pivot is nudged negative, the usual tie-break.
    """
    cnt = np.zeros(xs.shape, dtype=np.intp)
    with np.errstate(over="ignore", divide="ignore"):
        piv = d[0] - xs
        piv = np.where(piv == 0, -_LD_PIVMIN, piv)
        cnt = cnt + (piv < 0)
        for i in range(1, d.shape[0]):
            piv = (d[i] - xs) - e2[i - 1] / piv
            piv = np.where(piv == 0, -_LD_PIVMIN, piv)
            cnt = cnt + (piv < 0)
    return cnt


def _bisect_eigenvalues(d: np.ndarray, e2: np.ndarray,
                        rel_tol: float = 5e-14) -> np.ndarray:
    """All eigenvalues of a symmetric tridiagonal window, ascending.

    Rank-targeted bisection on the inertia count; every eigenvalue is
    bracketed simultaneously, so the cost is one pivot sweep per bisection
    step regardless of how many eigenvalues are wanted.
    """
    m = d.shape[0]
    e = np.sqrt(e2)
    radius = np.zeros(m, dtype=_LD)
    if m > 1:
        radius[:-1] += e
        radius[1:] += e
    glo = np.min(d - radius) - _LD(1.0)
    ghi = np.max(d + radius) + _LD(1.0)
    ranks = np.arange(1, m + 1)
    lo = np.full(m, glo, dtype=_LD)
    hi = np.full(m, ghi, dtype=_LD)
    tol = _LD(rel_tol)
    for _ in range(700):
        mid = 0.5 * (lo + hi)
        above = _sturm_counts(d, e2, mid) >= ranks
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
        if np.all(hi - lo <= tol * np.maximum(_LD(1.0), np.abs(mid))):
            break
    return 0.5 * (lo + hi)


def _twisted_vectors(d: np.ndarray, e: np.ndarray, e2: np.ndarray,
                     lams: np.ndarray) -> np.ndarray:
    """Eigenvector estimates for isolated eigenvalues of a tridiagonal window.

    Twisted factorization: pivot sweeps from both ends meet at the row
    where the residual pivot is smallest, the vector is seeded there and
    recursed outward.  Columns that lose normalizability to rounding fall
    back to a delta at the twist row; only the coarse mass profile is
    consumed downstream, not the fine components.
    """
    m = d.shape[0]
    k = lams.shape[0]
    if m == 1:
        return np.ones((1, k), dtype=_LD)
    dp = np.empty((m, k), dtype=_LD)
    dm = np.empty((m, k), dtype=_LD)
    piv = d[0] - lams
    dp[0] = np.where(piv == 0, -_LD_PIVMIN, piv)
    for i in range(1, m):
        piv = (d[i] - lams) - e2[i - 1] / dp[i - 1]
        dp[i] = np.where(piv == 0, -_LD_PIVMIN, piv)
    piv = d[m - 1] - lams
    dm[m - 1] = np.where(piv == 0, -_LD_PIVMIN, piv)
    for i in range(m - 2, -1, -1):
        piv = (d[i] - lams) - e2[i] / dm[i + 1]
        dm[i] = np.where(piv == 0, -_LD_PIVMIN, piv)
    gamma = dp + dm - (d[:, None] - lams[None, :])
    twist = np.argmin(np.abs(gamma), axis=0)
    rows = np.arange(m)[:, None]
    v = np.zeros((m, k), dtype=_LD)
    v[twist, np.arange(k)] = _LD(1.0)
    for i in range(m - 2, -1, -1):
        below = i < twist
        v[i] = np.where(below, -e[i] * v[i + 1] / dp[i], v[i])
    for i in range(1, m):
        above = i > twist
        v[i] = np.where(above, -e[i - 1] * v[i - 1] / dm[i], v[i])
    norm2 = np.sum(v * v, axis=0)
    bad = ~np.isfinite(norm2) | (norm2 == 0)
    if np.any(bad):
        v[:, bad] = np.where(rows == twist[None, bad], _LD(1.0), _LD(0.0))
        norm2 = np.sum(v * v, axis=0)
    return v / np.sqrt(norm2)


def truncated_spectrum_check(analog: TensorAnalog, p: int, N: int,
                             ctx: QContext, *, entry_cap: float = ENTRY_CAP,
                             band_pad: float = 5e-3,
                             boundary_mass_tol: float = 1e-8,
                             outer_frac: float = 0.10,
                             catalog_depth: int = 64) -> SpectrumDiagnostics:
    """Diagnose a truncated chain window against the constituent catalog.

    Chain entries grow geometrically along the graded direction, so a
    plain double-precision dense eigensolve would drown every band-scale
    eigenvalue in rounding noise from the big rows.  All eigenvalues are
    instead located by inertia bisection in extended precision - graded
    symmetric matrices determine their small eigenvalues to high relative
    accuracy, and the pivot sweeps preserve exactly that - then shifted by
    -2 and classified: inside the padded band, a bound state (matched to
    the nearest cataloged discrete value), or an artifact localized at an
    artificial window end.  Point-spectrum positions of a truncated window
    are only trustworthy when the eigenvector is well clear of the window
    ends; interpret "bound" records through their ``gap`` and everything
    else as band mass.
    """
    op = jacobi_operator(analog, p, N, ctx, entry_cap=entry_cap)
    catalog = spectrum_catalog(analog, ctx, max_labels=catalog_depth)
    preds = [
        (e.family, e.index, scaled_casimir(e.label, ctx.q)) for e in catalog.discrete
    ]
    lo_band, hi_band = _BAND
    records: list = []
    windows: list = []
    for block in op.blocks:
        m = block.size
        windows.append((block.sigma, block.lo, block.hi))
        d = np.asarray(block.diag, dtype=_LD)
        e = np.asarray(block.offdiag, dtype=_LD)
        e2 = e * e
        vals = _bisect_eigenvalues(d, e2)
        vecs = _twisted_vectors(d, e, e2, vals)
        artificial_low = chain_support(analog, block.sigma) == "integer"
        nout = max(1, int(round(outer_frac * m)))
        for i in range(m):
            value = float(vals[i]) - 2.0
            u = vecs[:, i]
            bmass = float(np.sum(u[m - nout:] ** 2))
            if artificial_low:
                bmass += float(np.sum(u[:nout] ** 2))
            if lo_band - band_pad <= value <= hi_band + band_pad:
                records.append(EigenRecord(value, block.sigma, "band", bmass))
            elif bmass > boundary_mass_tol:
                records.append(EigenRecord(value, block.sigma, "edge", bmass))
            else:
                if preds:
                    fam, idx, pv = min(preds, key=lambda t: abs(t[2] - value))
                    records.append(
                        EigenRecord(
                            value, block.sigma, "bound", bmass,
                            fam, idx, pv, value - pv,
                        )
                    )
                else:
                    records.append(EigenRecord(value, block.sigma, "bound", bmass))
    return SpectrumDiagnostics(
        p=p,
        requested_halfwidth=N,
        windows=tuple(windows),
        band=_BAND,
        band_pad=band_pad,
        records=tuple(records),
        catalog=catalog,
        k_value=k_grading(analog, p, ctx),
        k_value_printed=k_grading_printed(analog, p, ctx),
    )


# --------------------------------------------------------------------------
# extended-precision eigenvalues for huge-entry chains
# --------------------------------------------------------------------------


def tridiagonal_eigenvalues_mp(diag, offdiag, count: int, *,
                               below: float = 0.0,
                               rel_tol: float = 1e-13) -> list:
    """The ``count`` eigenvalues closest below ``below``, by inertia bisection.

    Entries of a chain window can span hundreds of orders of magnitude, far
    beyond what dense float eigensolvers resolve; the triangular-pivot
    eigenvalue count is instead evaluated in extended precision, with the
    working precision scaled to the squared entry range.  Eigenvalues are
    returned in decreasing order (the first is the closest to ``below``).
    """
    n = len(diag)
    if len(offdiag) != n - 1:
        raise ValueError("offdiag length must be len(diag) - 1")
    if not 1 <= count <= n:
        raise ValueError(f"count must be in 1..{n}")
    biggest = max(
        [abs(float(x)) for x in diag] + [abs(float(x)) for x in offdiag] + [1.0]
    )
    dps = max(50, int(2.2 * math.log10(biggest)) + 40)
    with mp.workdps(dps):
        d = [mp.mpf(float(x)) for x in diag]
        e = [mp.mpf(float(x)) for x in offdiag]
        tiny = mp.mpf(10) ** (-dps)

        def n_below(x):
            cnt = 0
            piv = mp.mpf(1)
            for i in range(n):
                piv = (d[i] - x) - (e[i - 1] ** 2 / piv if i else mp.mpf(0))
                if piv == 0:
                    piv = -tiny
                if piv < 0:
                    cnt += 1
            return cnt

        radius = [abs(e[i - 1]) if i else mp.mpf(0) for i in range(n)]
        for i in range(n - 1):
            radius[i] += abs(e[i])
        glo = min(d[i] - radius[i] for i in range(n))
        cut = mp.mpf(below)
        base = n_below(cut)
        if base < count:
            raise ValueError(
                f"only {base} eigenvalues lie below {below}; requested {count}"
            )
        out = []
        for m in range(count):
            target = base - m  # want the target-th eigenvalue (1-based from below)
            a, b = glo, cut
            while (b - a) > mp.mpf(rel_tol) * max(mp.mpf(1), abs(a), abs(b)):
                mid = (a + b) / 2
                if n_below(mid) >= target:
                    b = mid
                else:
                    a = mid
            out.append(float((a + b) / 2))
        return out
