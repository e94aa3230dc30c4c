"""Smoke probes for qkernel + repcore before the higher modules land.

Checks:
  1. frozen infinite-product constant at q=0.5
  2. theta quasi-periodicity + reflection
  3. the two three-term contiguous relations used later
  4. coproduct Casimir action vs the predicted tridiagonal closed forms
     (mixed-sign analog), p=0 and p=2, both sigma chains, q=0.8
"""
from __future__ import annotations

import math

from qcasimir.qkernel import QContext, phi32, qpoch, theta
from qcasimir.repcore import (
    NegDiscrete,
    PosDiscrete,
    Strange,
    delta_omega_action,
)

ctx = QContext(0.5)

# --- 1. frozen constant ------------------------------------------------
v = qpoch(0.5, math.inf, ctx)
print("qpoch(1/2;1/2)_inf =", repr(v), "ref 0.2887880950866024")
assert abs(v - 0.2887880950866024) < 1e-15

# --- 2. theta identities ----------------------------------------------
for x in (0.3, 1.7, -2.2, 0.9):
    lhs = theta(ctx.q * x, ctx)
    rhs = -theta(x, ctx) / x
    assert abs(lhs - rhs) < 1e-13 * max(1.0, abs(rhs)), (x, lhs, rhs)
    refl = theta(ctx.q / x, ctx)
    assert abs(theta(x, ctx) - refl) < 1e-13 * max(1.0, abs(refl))
print("theta quasi-periodicity + reflection OK")

# --- 3. contiguous relations ------------------------------------------
def f32(A, B, C, D, E, z, c=ctx):
    return phi32(A, B, C, D, E, z, c)

q = ctx.q
A, B, C, D, E = 0.31, -0.42, 0.55, 0.12, -0.2
z0 = D * E / (A * B * C)          # argument at the balanced point; |z0| < 1 here
# R1
lhs = f32(A * q, B, C, D, E, z0 / q) - f32(A, B, C, D, E, z0)
rhs = (D * E * (1 - B) * (1 - C) / (A * B * C * q * (1 - D) * (1 - E))) * f32(
    A * q, B * q, C * q, D * q, E * q, z0 / q
)
print("R1 residual", abs(lhs - rhs))
assert abs(lhs - rhs) < 1e-13 * max(1.0, abs(rhs))
# R2
lhs = (1 - D / A) * (1 - E / A) * f32(A / q, B, C, D, E, z0 * q) - (
    1 - q / A
) * (1 - D * E / (A * B * C)) * f32(A, B, C, D, E, z0)
rhs = (q / A) * (1 - D / q) * (1 - E / q) * f32(
    A / q, B / q, C / q, D / q, E / q, z0 * q
)
print("R2 residual", abs(lhs - rhs))
assert abs(lhs - rhs) < 1e-13 * max(1.0, abs(rhs))

# --- 4. coupled Casimir vs predicted closed forms ----------------------
def predicted(qv, k1, k2, eps, p, sigma, n):
    """Closed-form tridiagonal coefficients (a_n couples n,n+1; b_n diagonal)."""
    P = abs(p)
    k1p, k2p = (k1, k2) if p >= 0 else (k2, k1)
    t = -1.0 if sigma < 0 else qv ** (2 * eps)
    s = 2 * k1 + 2 * k2 + 2 * P
    rad = (
        (1 + t * qv ** (4 * k1p + 2 * P + 2 * n))
        * (1 + t * qv ** (2 * P + 2 * n + 2))
        * (1 + t * qv ** (4 * k2p + 2 * n))
        * (1 + t * qv ** (2 * n + 2))
    )
    a = t ** (-2) * qv ** (-2 - s - 4 * n) * math.sqrt(rad)
    b = (
        qv ** (2 * k2p - 2 * k1p - 2 * P - 1)
        + qv ** (2 * k1p - 2 * k2p + 2 * P + 1)
        - t ** (-2)
        * qv ** (1 - s - 4 * n)
        * (1 + t * qv ** (2 * n + 4 * k2p - 2))
        * (1 + t * qv ** (2 * n))
        - t ** (-2)
        * qv ** (-1 - s - 4 * n)
        * (1 + t * qv ** (4 * k1p + 2 * P + 2 * n))
        * (1 + t * qv ** (2 * P + 2 * n + 2))
    )
    return a, b


def composed_entries(qv, k1, k2, eps, p, sigma, n):
    """Scaled-and-shifted coupled Casimir row at f_{p,n}^sigma, via repcore."""
    c = QContext(qv)
    scale = (1 / qv - qv) ** 2
    if sigma < 0:
        r1, r2 = NegDiscrete(k1), PosDiscrete(k2)
        if p <= 0:
            pair = (n, n - p)
        else:
            pair = (n + p, n)
        sgn = lambda m: 1.0  # noqa: E731
    else:
        # The strange-series label is even in its first parameter; the
        # construction value k - 1/2 may be negative, so pass |k - 1/2|.
        r1 = Strange(abs(k1 - 0.5), -eps - k1)
        r2 = Strange(abs(k2 - 0.5), eps + k2)
        if p <= 0:
            pair = (-n, p + n)
            sgn = lambda m: (-1.0) ** m  # noqa: E731
        else:
            pair = (-n - p, n)
            sgn = lambda m: (-1.0) ** (m + p)  # noqa: E731
    out = {}
    for (m1, m2), coeff in delta_omega_action(r1, r2, pair, c):
        # map back (m1,m2) -> basis index n'
        if sigma < 0:
            npr = m1 if p <= 0 else m2
            par = 1.0
        else:
            npr = -m1 if p <= 0 else m2
            par = sgn(npr) / sgn(n)
        val = scale * coeff * par
        out[npr] = out.get(npr, 0.0) + val
    out[n] = out.get(n, 0.0) + 2.0  # the +2 shift
    return out


qv, k1, k2, eps = 0.8, 0.3, 0.7, 0.37
bad = 0
for p in (0, 2, -1):
    for sigma in (-1, 1):
        for n in (0, 1, 3):
            if sigma < 0 and n < 0:
                continue
            got = composed_entries(qv, k1, k2, eps, p, sigma, n)
            a_n, b_n = predicted(qv, k1, k2, eps, p, sigma, n)
            a_prev, _ = predicted(qv, k1, k2, eps, p, sigma, n - 1)
            if sigma < 0 and n == 0:
                a_prev = 0.0
            want = {n: b_n, n + 1: a_n}
            if a_prev != 0.0:
                want[n - 1] = a_prev
            keys = set(got) | set(want)
            for kk in sorted(keys):
                g = got.get(kk, 0.0)
                w = want.get(kk, 0.0)
                err = abs(complex(g) - w)
                tol = 1e-12 * max(1.0, abs(w))
                tag = "OK " if err < tol else "BAD"
                if err >= tol:
                    bad += 1
                    print(
                        f"{tag} p={p} sig={sigma:+d} n={n} -> {kk}: got {g} want {w}"
                    )
print("coupled-Casimir closed-form mismatches:", bad)
assert bad == 0
print("ALL PROBE-01 CHECKS PASSED")
