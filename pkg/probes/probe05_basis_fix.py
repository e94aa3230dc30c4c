"""Corrected mixed-block pairing: for p<=0 the flip-block vector must pair
index -n with n-p (K-eigenvalue consistency across the block), not p+n.
Verify the closed-form chain now matches the composed operator for both
chain types at all p signs.
"""
import math
import sys

sys.path.insert(0, "/root/pkg/src")

from qcasimir.qkernel import QContext
from qcasimir.repcore import (
    Generator,
    NegDiscrete,
    PosDiscrete,
    Strange,
    delta_omega_action,
    generator_action,
)


def predicted(qv, k1, k2, eps, p, sigma, n):
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
    c = QContext(qv)
    scale = (1 / qv - qv) ** 2
    if sigma < 0:
        r1, r2 = NegDiscrete(k1), PosDiscrete(k2)
        pair = (n, n - p) if p <= 0 else (n + p, n)
        sgn = lambda m: 1.0  # noqa: E731
    else:
        r1 = Strange(abs(k1 - 0.5), -eps - k1)
        r2 = Strange(abs(k2 - 0.5), eps + k2)
        # CORRECTED: slot-2 index n-p for p<=0 (K-eigenvalue match with the
        # half-line block); previously p+n.
        pair = (-n, n - p) if p <= 0 else (-n - p, n)
        sgn = lambda m: (-1.0) ** (m if p <= 0 else m + p)  # noqa: E731
    out = {}
    for (m1, m2), coeff in delta_omega_action(r1, r2, pair, c):
        if sigma < 0:
            npr = m1 if p <= 0 else m2
            par = 1.0
        else:
            npr = -m1 if p <= 0 else m2
            par = sgn(npr) / sgn(n)
        out[npr] = out.get(npr, 0.0) + scale * coeff * par
    out[n] = out.get(n, 0.0) + 2.0
    return out


def kgrading(qv, k1, k2, eps, p, sigma, n):
    """Composed K-eigenvalue exponent for the block vector."""
    if sigma < 0:
        r1, r2 = NegDiscrete(k1), PosDiscrete(k2)
        pair = (n, n - p) if p <= 0 else (n + p, n)
    else:
        r1 = Strange(abs(k1 - 0.5), -eps - k1)
        r2 = Strange(abs(k2 - 0.5), eps + k2)
        pair = (-n, n - p) if p <= 0 else (-n - p, n)
    c = QContext(qv)
    a1 = generator_action(r1, Generator.K, pair[0], c)
    a2 = generator_action(r2, Generator.K, pair[1], c)
    assert len(a1) == 1 and len(a2) == 1
    return a1[0][1] * a2[0][1]


bad = 0
for (qv, k1, k2, eps) in [(0.8, 0.29, 0.61, 0.37), (0.55, 0.8, 1.33, 0.12)]:
    for p in (0, 1, 2, -1, -2, -3, -5):
        for sigma in (-1, 1):
            nvals = range(0, 6) if sigma < 0 else range(-3, 4)
            worst = 0.0
            for n in nvals:
                row = composed_entries(qv, k1, k2, eps, p, sigma, n)
                an, bn = predicted(qv, k1, k2, eps, p, sigma, n)
                am, bm = predicted(qv, k1, k2, eps, p, sigma, n - 1)
                exp = {n: bn, n + 1: an, n - 1: am}
                if sigma < 0 and n == 0:
                    exp.pop(-1)
                keys = set(row) | set(exp)
                for kk in keys:
                    d = abs(row.get(kk, 0.0) - exp.get(kk, 0.0))
                    sc = max(1.0, abs(exp.get(kk, 0.0)))
                    worst = max(worst, d / sc)
            ok = worst < 1e-10
            bad += 0 if ok else 1
            tag = "ok " if ok else "BAD"
            print(f"q={qv} p={p:+d} s={'+' if sigma>0 else '-'}  {tag} {worst:.2e}")
        # K-grading must be block-constant and equal q^(k2-k1-p)
        kl = kgrading(qv, k1, k2, eps, p, -1, 2)
        kr = kgrading(qv, k1, k2, eps, p, 1, -1)
        tgt = qv ** (k2 - k1 - p)
        okk = abs(kl - tgt) < 1e-12 and abs(kr - tgt) < 1e-12
        bad += 0 if okk else 1
        print(f"      K-grading {'ok' if okk else 'BAD'}  {kl:.6f} {kr:.6f} {tgt:.6f}")

print("TOTAL BAD:", bad)
