"""Standalone oracle for the terminating polynomial family.

Decides the B(x) grouping (which printed line carries the trailing
constants), then checks both orthogonality relations, the difference
equation, and dual sums at the map parameters before the module is
frozen.
"""

import math
from itertools import product

# map: base Q = q^2 = 0.25, k1 = k2 = 0.4, p = 1, eps = 0.5
Q = 0.25
qq = math.sqrt(Q)  # the underlying q, only for building the map exponents
k1 = k2 = 0.4
pp = 1
eps = 0.5
A_par = qq ** (4 * k1 - 2)
B_par = qq ** (4 * k2 - 2)
C_par = -(qq ** (4 * k1 - 2 * pp - 2 * eps - 2))
print(f"a={A_par}, b={B_par}, c={C_par}  (base {Q})")
print(f"bounds: 0<a,b<{1/Q}, c<0 -> ok={0 < A_par < 1/Q and 0 < B_par < 1/Q and C_par < 0}")


def qpoch(x, n, q):
    out = 1.0
    if n == math.inf:
        f = 1.0
        k = 0
        while True:
            t = x * q**k
            if abs(t) < 1e-22:
                break
            f *= 1.0 - t
            k += 1
            if k > 5000:
                break
        return f
    for j in range(n):
        out *= 1.0 - x * q**j
    return out


def bigP(m, x, a, b, c, q):
    # terminating 3phi2: sum_{j=0..m}
    tot = 0.0
    term = 1.0
    for j in range(m + 1):
        tot += term
        # ratio to next term
        num = (1 - q**-m * q**j) * (1 - a * b * q ** (m + 1) * q**j) * (1 - x * q**j)
        den = (1 - q ** (j + 1)) * (1 - a * q * q**j) * (1 - c * q * q**j)
        term = term * num * q / den
    return tot


def theta(x, q):
    return qpoch(x, math.inf, q) * qpoch(q / x, math.inf, q)


def u_w(x, a, b, c, q):
    return (qpoch(x / a, math.inf, q) * qpoch(x / c, math.inf, q)) / (
        qpoch(x, math.inf, q) * qpoch(b * x / c, math.inf, q)
    )


def v_dual(m, a, b, c, q):
    pref = (1 - a * b * q ** (2 * m + 1)) / (a * q * (1 - a * b * q))
    const = (
        qpoch(a * q, math.inf, q)
        * qpoch(b * q, math.inf, q)
        * qpoch(c * q, math.inf, q)
        * qpoch(a * b * q / c, math.inf, q)
    ) / (qpoch(q, math.inf, q) * qpoch(a * b * q * q, math.inf, q) * theta(c / a, q))
    mpart = (qpoch(a * q, m, q) * qpoch(a * b * q, m, q) * qpoch(c * q, m, q)) / (
        qpoch(q, m, q) * qpoch(b * q, m, q) * qpoch(a * b * q / c, m, q)
    )
    geom = (-a * c * q * q) ** (-m) * q ** (-0.5 * m * (m - 1))
    return pref * const * mpart * geom


def r_f(x, m, a, b, c, q):
    return math.sqrt(abs(x) * u_w(x, a, b, c, q) * v_dual(m, a, b, c, q)) * bigP(m, x, a, b, c, q)


a, b, c, q = A_par, B_par, C_par, Q

# ---- orthogonality via Jackson integral
def jackson(f):
    s = 0.0
    for k in range(300):
        s += f(a * q ** (k + 1)) * a * q ** (k + 1)
        s -= f(c * q ** (k + 1)) * c * q ** (k + 1)
    return (1 - q) * s

print("\n[orthogonality] integral P_m1 P_m2 u  vs  delta/v_dual:")
worst = 0.0
for m1, m2 in product(range(5), repeat=2):
    val = jackson(lambda x: bigP(m1, x, a, b, c, q) * bigP(m2, x, a, b, c, q) * u_w(x, a, b, c, q))
    expect = (1.0 / v_dual(m1, a, b, c, q)) if m1 == m2 else 0.0
    scale = max(1.0, abs(expect))
    worst = max(worst, abs(val - expect) / scale)
print(f"  worst = {worst:.3e}  (need < 1e-8)")

print("[row sums] sum_m r_x(m)^2 = 1:")
worst = 0.0
for br, kk in product(("a", "c"), range(3)):
    x = (a if br == "a" else c) * q ** (kk + 1)
    s = sum(r_f(x, m, a, b, c, q) ** 2 for m in range(200))
    worst = max(worst, abs(s - 1))
print(f"  worst = {worst:.3e}")

print("[dual sums] sum over both branches r(m1) r(m2) = delta:")
worst = 0.0
for m1, m2 in product(range(4), repeat=2):
    s = 0.0
    for kk in range(300):
        for base_v in (a, c):
            x = base_v * q ** (kk + 1)
            s += r_f(x, m1, a, b, c, q) * r_f(x, m2, a, b, c, q)
    worst = max(worst, abs(s - (1.0 if m1 == m2 else 0.0)))
print(f"  worst = {worst:.3e}")

# ---- B(x) grouping candidates
sq = math.sqrt
def A_c(x):
    rad = (1 - x) * (1 - x / a) * (1 - x / c) * (1 - b * x / c)
    return -(c * sq(a) / (x * x * sq(b))) * sq(max(rad, 0.0))

consts = sq(a * b * q) + 1 / sq(a * b * q) - c * sq(q / (a * b)) - (1 / c) * sq(a * b / q)
def B1(x):
    return (c * sq(a * q) / (x * x * sq(b))) * ((1 - x) * (1 - b * x / c) + q * (1 - x / (a * q)) * (1 - x / (c * q)))
def B2(x):
    return (c * sq(a * q) / (x * x * sq(b))) * ((1 - x) * (1 - x / a) + q * (1 - b * x / (c * q)) * (1 - x / (c * q)))

print("\n[B grouping] candidates on 5 x values:")
for x in (a * q, c * q, a * q**2, c * q**3, 0.37):
    print(f"  x={x:9.4f}: B1={B1(x):12.6f} B1+K={B1(x)+consts:12.6f} B2={B2(x):12.6f} B2+K={B2(x)+consts:12.6f}")

# difference equation residual with each candidate
print("[diffeq residual] per candidate, m<=3, lattice x:")
for name, Bc in (("B1", B1), ("B1+K", lambda x: B1(x) + consts), ("B2", B2), ("B2+K", lambda x: B2(x) + consts)):
    worst = 0.0
    for m in range(4):
        lam = (1 / sq(a * b * q)) * (1 - q**-m) * (1 - a * b * q ** (m + 1))
        for br, kk in product(("a", "c"), range(4)):
            x = (a if br == "a" else c) * q ** (kk + 1)
            r0 = r_f(x, m, a, b, c, q)
            rqx = r_f(q * x, m, a, b, c, q)
            rxq = r_f(x / q, m, a, b, c, q) if kk > 0 else 0.0
            lhs = lam * r0
            rhs = A_c(x) * rqx + Bc(x) * r0 + A_c(x / q) * rxq
            scalev = max(1.0, abs(lhs), abs(A_c(x) * rqx), abs(Bc(x) * r0), abs(A_c(x / q) * rxq))
            worst = max(worst, abs(lhs - rhs) / scalev)
    print(f"  {name:5s}: worst residual = {worst:.3e}")
