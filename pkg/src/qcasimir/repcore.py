"""The five irreducible *-representation families of quantized su(1,1).

Each family acts on l2(N) or l2(Z) by unbounded operators; we expose the
generator actions on basis vectors as sparse coefficient lists and as
truncated dense matrices on index windows.  The star structure is
K* = K, E* = -F, F* = -E, and the Casimir element

    Omega = (q^{-1} K^2 + q K^{-2} - 2)/(q^{-1}-q)^2 + EF

acts as a scalar in each irreducible family.  The coproduct sends
K -> K (x) K and E -> K (x) E + E (x) K^{-1} (same for F), which yields the
two-factor Casimir action implemented in :func:`delta_omega_action`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .qkernel import QContext

__all__ = [
    "Generator",
    "PosDiscrete",
    "NegDiscrete",
    "Principal",
    "Complementary",
    "Strange",
    "RepLabel",
    "SparseAction",
    "is_half_line",
    "generator_action",
    "truncated_matrix",
    "delta_omega_action",
    "normalize_label",
    "scaled_casimir",
]


class Generator(Enum):
    K = "K"
    Kinv = "Kinv"
    E = "E"
    F = "F"
    Omega = "Omega"


@dataclass(frozen=True)
class PosDiscrete:
    """Lowest-weight family on l2(N); K acts by q^{k+n}, label k > 0."""

    k: float

    def __post_init__(self) -> None:
        if not self.k > 0:
            raise ValueError(f"discrete-series label k must be positive, got {self.k}")


@dataclass(frozen=True)
class NegDiscrete:
    """Highest-weight family on l2(N); K acts by q^{-(k+n)}, label k > 0."""

    k: float

    def __post_init__(self) -> None:
        if not self.k > 0:
            raise ValueError(f"discrete-series label k must be positive, got {self.k}")


@dataclass(frozen=True)
class Principal:
    """Continuous family on l2(Z) with Casimir 2 cos(2 rho ln q) - 2 (scaled).

    The pair (rho, eps) = (0, 1/2) is reducible: it splits into the two
    discrete families with label 1/2 across the index sets {n >= 0} and
    {n < 0}.  Construction is permitted so the splitting can be observed on
    truncated matrices, but the label is excluded from irreducible catalogs.
    """

    rho: float
    eps: float


@dataclass(frozen=True)
class Complementary:
    """l2(Z) family with real Casimir label lam; requires, after reducing
    eps mod 1, either eps in [0,1/2) and lam in (-1/2,-eps), or
    eps in (1/2,1) and lam in (-1/2,eps-1)."""

    lam: float
    eps: float

    def __post_init__(self) -> None:
        e = self.eps % 1.0
        ok = (0.0 <= e < 0.5 and -0.5 < self.lam < -e) or (
            0.5 < e < 1.0 and -0.5 < self.lam < e - 1.0
        )
        if not ok:
            raise ValueError(
                f"complementary label (lam={self.lam}, eps={self.eps}) outside the "
                "admissible range"
            )


@dataclass(frozen=True)
class Strange:
    """l2(Z) family with scaled Casimir -(q^{2 sigma}+q^{-2 sigma}+2) < -4;
    has no classical counterpart."""

    sigma: float
    eps: float

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ValueError(f"label sigma must be positive, got {self.sigma}")


RepLabel = Union[PosDiscrete, NegDiscrete, Principal, Complementary, Strange]

#: Sparse action of a generator on a basis vector: [(target_index, coefficient)].
SparseAction = list[tuple[int, complex]]


def is_half_line(rep: RepLabel) -> bool:
    """True if the representation space is l2(N) rather than l2(Z)."""
    return isinstance(rep, (PosDiscrete, NegDiscrete))


def _check_index(rep: RepLabel, n: int) -> None:
    if is_half_line(rep) and n < 0:
        raise IndexError(f"index {n} is negative but {type(rep).__name__} acts on l2(N)")


def _k_exponent(rep: RepLabel, n: int) -> float:
    """Exponent x in K e_n = q^x e_n."""
    if isinstance(rep, PosDiscrete):
        return rep.k + n
    if isinstance(rep, NegDiscrete):
        return -(rep.k + n)
    return n + rep.eps


def _ef_factors(rep: RepLabel, u: float, q: float) -> float:
    """The radicand product appearing in the raising/lowering coefficients.

    ``u`` is the doubled weight exponent of the step (2n + 2 eps + 1 for a
    raising step from e_n on a Z-type family, and the analogous quantity on
    the discrete families).  Returns the nonnegative real product.
    """
    if isinstance(rep, Principal):
        w = 1.0 - q**u * complex(math.cos(2.0 * rep.rho * math.log(q)),
                                 math.sin(2.0 * rep.rho * math.log(q)))
        return abs(w) ** 2
    if isinstance(rep, Complementary):
        val = (1.0 - q ** (u + 2.0 * rep.lam + 1.0)) * (1.0 - q ** (u - 2.0 * rep.lam - 1.0))
        return val
    if isinstance(rep, Strange):
        return (1.0 + q ** (u + 2.0 * rep.sigma)) * (1.0 + q ** (u - 2.0 * rep.sigma))
    raise TypeError(f"unsupported family {type(rep).__name__}")


def _z_step_coeff(rep: RepLabel, u: float, lead: float, q: float) -> float:
    """Magnitude q**lead * sqrt(rad(u)) of a step coefficient, overflow-safe.

    Deep in an l2(Z) chain the radicand carries q to a large negative power
    and overflows double precision even though the coefficient itself is
    representable.  All three families satisfy rad(u) = q**(2u) * rad(-u)
    exactly, so the reflected radicand (tiny q-powers) is used there and the
    q**(2u) factor is absorbed into the leading exponent.
    """
    if u * math.log10(q) > 140.0:
        rad = _ef_factors(rep, -u, q)
        return q ** (lead + u) * math.sqrt(max(rad, 0.0))
    rad = _ef_factors(rep, u, q)
    return q ** lead * math.sqrt(max(rad, 0.0))


def generator_action(rep: RepLabel, g: Generator, n: int, ctx: QContext) -> SparseAction:
    """Action of a generator on basis vector e_n as [(target, coefficient)].

    Coefficients carry the true operator normalization (the displayed
    square-root coefficients divided by (q^{-1} - q), and the Casimir scalar
    divided by (q^{-1} - q)^2).  Vanishing boundary terms are dropped, which
    encodes the convention e_{-m} = 0 on l2(N).
    """
    _check_index(rep, n)
    q = ctx.q
    scale = 1.0 / (1.0 / q - q)

    if g is Generator.K:
        return [(n, q ** _k_exponent(rep, n))]
    if g is Generator.Kinv:
        return [(n, q ** (-_k_exponent(rep, n)))]
    if g is Generator.Omega:
        return [(n, scaled_casimir(rep, q) * scale**2)]

    if isinstance(rep, PosDiscrete):
        k = rep.k
        if g is Generator.E:
            coeff = q ** (-0.5 - k - n) * math.sqrt(
                (1.0 - q ** (2 * n + 2)) * (1.0 - q ** (4 * k + 2 * n))
            )
            return [(n + 1, coeff * scale)]
        # F annihilates the lowest-weight vector.
        if n == 0:
            return []
        coeff = -(q ** (0.5 - k - n)) * math.sqrt(
            (1.0 - q ** (2 * n)) * (1.0 - q ** (4 * k + 2 * n - 2))
        )
        return [(n - 1, coeff * scale)]

    if isinstance(rep, NegDiscrete):
        k = rep.k
        if g is Generator.E:
            if n == 0:
                return []
            coeff = -(q ** (0.5 - k - n)) * math.sqrt(
                (1.0 - q ** (2 * n)) * (1.0 - q ** (4 * k + 2 * n - 2))
            )
            return [(n - 1, coeff * scale)]
        coeff = q ** (-0.5 - k - n) * math.sqrt(
            (1.0 - q ** (2 * n + 2)) * (1.0 - q ** (4 * k + 2 * n))
        )
        return [(n + 1, coeff * scale)]

    # The three l2(Z) families share the raising/lowering pattern.
    eps = rep.eps
    if g is Generator.E:
        coeff = _z_step_coeff(rep, 2 * n + 2 * eps + 1, -0.5 - n - eps, q)
        return [(n + 1, coeff * scale)]
    coeff = -_z_step_coeff(rep, 2 * n + 2 * eps - 1, 0.5 - n - eps, q)
    return [(n - 1, coeff * scale)]


def scaled_casimir(rep: RepLabel, q: float) -> float:
    """Casimir eigenvalue multiplied by (q^{-1} - q)^2.

    Positive/negative discrete: q^{2k-1} + q^{1-2k} - 2 (positive).
    Principal: 2 cos(2 rho ln q) - 2, sweeping the band [-4, 0].
    Complementary: q^{2 lam + 1} + q^{-1-2 lam} - 2 (positive).
    Strange: -(q^{2 sigma} + q^{-2 sigma} + 2), below -4.
    """
    if isinstance(rep, (PosDiscrete, NegDiscrete)):
        return q ** (2 * rep.k - 1) + q ** (1 - 2 * rep.k) - 2.0
    if isinstance(rep, Principal):
        return 2.0 * math.cos(2.0 * rep.rho * math.log(q)) - 2.0
    if isinstance(rep, Complementary):
        return q ** (2 * rep.lam + 1) + q ** (-1 - 2 * rep.lam) - 2.0
    if isinstance(rep, Strange):
        return -(q ** (2 * rep.sigma) + q ** (-2 * rep.sigma) + 2.0)
    raise TypeError(f"unsupported family {type(rep).__name__}")


def truncated_matrix(
    rep: RepLabel, g: Generator, window: tuple[int, int], ctx: QContext
) -> np.ndarray:
    """Dense matrix of a generator on the index window [lo, hi] (inclusive).

    The window must be [0, N] for l2(N) families and [-N, N] otherwise.
    Targets outside the window are dropped, so E/F rows touching the edges
    are truncation artifacts; property checks should stay >= 2 indices away
    from the edges.
    """
    lo, hi = window
    if hi < lo:
        raise ValueError(f"empty window {window}")
    if is_half_line(rep):
        if lo != 0:
            raise ValueError(f"window for an l2(N) family must start at 0, got {window}")
    elif lo != -hi:
        raise ValueError(f"window for an l2(Z) family must be symmetric, got {window}")
    dim = hi - lo + 1
    mat = np.zeros((dim, dim), dtype=complex)
    for j, n in enumerate(range(lo, hi + 1)):
        for target, coeff in generator_action(rep, g, n, ctx):
            if lo <= target <= hi:
                mat[target - lo, j] = coeff
    return mat


def delta_omega_action(
    rep1: RepLabel,
    rep2: RepLabel,
    basis: tuple[int, int],
    ctx: QContext,
) -> list[tuple[tuple[int, int], complex]]:
    """Two-factor Casimir action on e_{n1} (x) e_{n2} under the coproduct.

    Expands

        (q^{-1} K^2 (x) K^2 + q K^{-2} (x) K^{-2} - 2)/(q^{-1}-q)^2
        + K^2 (x) EF + KF (x) EK^{-1} + EK (x) K^{-1}F + EF (x) K^{-2}

    by composing single-factor actions.  Possible targets are (n1, n2) and
    (n1 -+ 1, n2 +- 1); vanishing boundary terms are omitted.
    """
    n1, n2 = basis
    _check_index(rep1, n1)
    _check_index(rep2, n2)
    q = ctx.q
    out: dict[tuple[int, int], complex] = {}

    def add(target: tuple[int, int], coeff: complex) -> None:
        if coeff != 0:
            out[target] = out.get(target, 0.0 + 0.0j) + coeff

    def single(rep: RepLabel, g: Generator, n: int) -> tuple[int, complex] | None:
        act = generator_action(rep, g, n, ctx)
        if not act:
            return None
        return act[0]

    k1 = q ** _k_exponent(rep1, n1)
    k2 = q ** _k_exponent(rep2, n2)

    # Scalar part.
    scalar = ((k1 * k2) ** 2 / q + q / (k1 * k2) ** 2 - 2.0) / (1.0 / q - q) ** 2
    add((n1, n2), scalar)

    def ef_diag(rep: RepLabel, n: int) -> complex:
        down = single(rep, Generator.F, n)
        if down is None:
            return 0.0 + 0.0j
        m, f_coeff = down
        up = single(rep, Generator.E, m)
        if up is None:
            return 0.0 + 0.0j
        _, e_coeff = up
        return e_coeff * f_coeff

    # K^2 (x) EF and EF (x) K^{-2}.
    add((n1, n2), k1**2 * ef_diag(rep2, n2))
    add((n1, n2), ef_diag(rep1, n1) / k2**2)

    # KF (x) EK^{-1}: lower the first factor, raise the second.
    down1 = single(rep1, Generator.F, n1)
    up2 = single(rep2, Generator.E, n2)
    if down1 is not None and up2 is not None:
        m1, f1 = down1
        m2, e2 = up2
        coeff = (q ** _k_exponent(rep1, m1)) * f1 * e2 / k2
        add((m1, m2), coeff)

    # EK (x) K^{-1}F: raise the first factor, lower the second.
    up1 = single(rep1, Generator.E, n1)
    down2 = single(rep2, Generator.F, n2)
    if up1 is not None and down2 is not None:
        m1, e1 = up1
        m2, f2 = down2
        coeff = e1 * k1 * f2 / (q ** _k_exponent(rep2, m2))
        add((m1, m2), coeff)

    return sorted(out.items())


def normalize_label(rep: RepLabel, ctx: QContext) -> RepLabel:
    """Reduce a label to its canonical fundamental domain.

    eps is reduced mod 1 for the l2(Z) families; the continuous label rho is
    folded into [0, -pi/(2 ln q)) using the reflection and periodicity
    equivalences; a complementary label lam is replaced by -lam - 1 when that
    representative lies in the canonical range.  Discrete labels are already
    canonical.
    """
    if isinstance(rep, (PosDiscrete, NegDiscrete)):
        return rep
    eps = rep.eps % 1.0
    if isinstance(rep, Strange):
        return Strange(rep.sigma, eps)
    if isinstance(rep, Complementary):
        lam = rep.lam
        if lam <= -0.5:
            lam = -lam - 1.0
        return Complementary(lam, eps)
    period = -math.pi / math.log(ctx.q)
    rho = rep.rho % period
    if rho > period / 2.0:
        rho = period - rho
    return Principal(rho, eps)
