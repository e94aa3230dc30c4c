"""Fit (u1,u2,u3,z) of a three-term chain to the composed p<0 sigma=+ rows.

Chain model (base Q), with U = ABC = sqrt(1/(u1 u2 u3)), A = sqrt(u3/(u1 u2)):
  a_k = U Q^{-1/2-2k} / z^2 sqrt((1+zQ^{k+1})(1+zQ^k u1)(1+zQ^k u2)(1+zQ^k u3))
  b_k = A + 1/A - U Q^{-2k}/z^2 (1+zQ^k u1)(1+zQ^k u2)
        - U Q^{1-2k}/z^2 (1+zQ^k)(1+zQ^{k-1} u3)
Solve for Q-exponents of u1,u2,u3,z from composed rows, then report.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import fsolve

from qcasimir.qkernel import QContext
from qcasimir.repcore import Strange, delta_omega_action

qv, k1, k2, eps = 0.8, 0.29, 0.61, 0.37
Q = qv * qv


def composed_rows(p, nmax=4):
    c = QContext(qv)
    scale = (1 / qv - qv) ** 2
    r1 = Strange(abs(k1 - 0.5), -eps - k1)
    r2 = Strange(abs(k2 - 0.5), eps + k2)
    rows = {}
    for n in range(-nmax, nmax + 1):
        pair = (-n, p + n)
        out = {}
        for (m1, m2), coeff in delta_omega_action(r1, r2, pair, c):
            npr = -m1
            par = (-1.0) ** (npr - n)
            out[npr] = out.get(npr, 0.0) + scale * coeff.real * par
        out[n] = out.get(n, 0.0) + 2.0
        rows[n] = out
    return rows


def chain(expo, k):
    e1, e2, e3, ez = expo
    u1, u2, u3, z = Q**e1, Q**e2, Q**e3, Q**ez
    U = math.sqrt(1.0 / (u1 * u2 * u3))
    A = math.sqrt(u3 / (u1 * u2))
    rad = (1 + z * Q ** (k + 1)) * (1 + z * Q**k * u1) * (1 + z * Q**k * u2) * (1 + z * Q**k * u3)
    ak = U * Q ** (-0.5 - 2 * k) / z**2 * math.sqrt(max(rad, 0.0))
    bk = (
        A
        + 1 / A
        - U * Q ** (-2 * k) / z**2 * (1 + z * Q**k * u1) * (1 + z * Q**k * u2)
        - U * Q ** (1 - 2 * k) / z**2 * (1 + z * Q**k) * (1 + z * Q ** (k - 1) * u3)
    )
    return ak, bk


for p in (-1, -2, -3):
    rows = composed_rows(p)
    a_data = {n: rows[n][n + 1] for n in range(-3, 4)}
    b_data = {n: rows[n][n] for n in range(-3, 4)}

    def eqs(expo):
        out = []
        for n in (-1, 0, 1):
            ak, bk = chain(expo, n)
            out.append(ak - a_data[n])
        _, b0 = chain(expo, 0)
        out.append(b0 - b_data[0])
        return out

    best = None
    for guess in ([1, 1, 1, 0.5], [2, 0.5, 1.5, 0.3], [0.5, 2, 2.5, 0.8], [1.5, 2.5, 0.8, 0.2]):
        sol, info, ier, _ = fsolve(eqs, guess, full_output=True)
        if ier != 1:
            continue
        # verify on all rows
        err = 0.0
        for n in range(-3, 4):
            ak, bk = chain(sol, n)
            err = max(err, abs(ak - a_data[n]), abs(bk - b_data[n]))
        if best is None or err < best[1]:
            best = (sol, err)
    sol, err = best
    e1, e2, e3, ez = sol
    print(f"p={p}: residual {err:.2e}")
    print(f"  1/AB = Q^{e1:.6f}  1/AC = Q^{e2:.6f}  1/BC = Q^{e3:.6f}  z = Q^{ez:.6f}")
    # reference combos, in Q-exponents
    P = -p
    print(f"  [k1={k1} k2={k2} eps={eps} P={P}]")
    print(f"  candidates: 2k1+P={2*k1+P}  2k2+P={2*k2+P}  P+1={P+1}  2k1={2*k1}  2k2={2*k2}")
    print(f"  eps={eps}, eps+P={eps+P}, eps-P={eps-P}, -eps={-eps}, -eps+P={-eps+P}")
