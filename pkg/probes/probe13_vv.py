# Standalone verification of the 2x2-weight (vector-valued) spectral family:
# Hermitian/posdef weight, S^T S = v, residue weights two ways, psi values,
# norms/Gram, recurrence, and the fin-mass polynomial reduction.
import cmath
import math

import numpy as np

import sys
sys.path.insert(0, "src")
from qcasimir.qkernel import QContext, phi32, qpoch, qpoch_multi, theta, theta_multi

CTX = QContext(0.25)
Q = CTX.q


class P:
    def __init__(self, a, c, zm, zp):
        self.a, self.c, self.zm, self.zp = a, c, zm, zp
        self.b, self.d = np.conj(a), np.conj(c)
        self.s = math.sqrt(Q) * abs(c / a)


def v1(g, p):
    a, b, c, d, zm, zp, s = p.a, p.b, p.c, p.d, p.zm, p.zp, p.s
    front = (
        qpoch_multi([c * Q / a, d * Q / a], math.inf, CTX) ** 2
        * theta_multi([b * zp, b * zm], CTX)
        / (
            (1 - Q) * a * b * zm**2 * zp**2
            * theta_multi([zm / zp, zp / zm, a / b, b / a], CTX)
        )
    )
    gpart = qpoch_multi([g**2, g**-2], math.inf, CTX) / (
        qpoch_multi(
            [s * g, s / g, c * Q * g / (a * s), c * Q / (a * s * g),
             d * Q * g / (a * s), d * Q / (a * s * g)], math.inf, CTX)
        * theta_multi([s * g, s / g, a * b * s * zm * zp * g, a * b * s * zm * zp / g], CTX)
    )
    brack = zm * theta_multi([a * zp, c * zp, d * zp, b * zm, a * s * zm * g, a * s * zm / g], CTX) \
        - zp * theta_multi([a * zm, c * zm, d * zm, b * zp, a * s * zp * g, a * s * zp / g], CTX)
    return front * gpart * brack


def v2(g, p):
    a, b, c, d, zm, zp, s = p.a, p.b, p.c, p.d, p.zm, p.zp, p.s
    front = (
        qpoch_multi([c * Q / a, d * Q / a, c * Q / b, d * Q / b], math.inf, CTX)
        * theta_multi([a * zp, a * zm, b * zp, b * zm, c * d * zm * zp], CTX)
        / (a * b * zm**2 * zp * (1 - Q) * theta_multi([zp / zm, a / b, b / a], CTX))
    )
    gpart = qpoch_multi([g**2, g**-2], math.inf, CTX) / (
        qpoch_multi([s * g, s / g], math.inf, CTX)
        * theta_multi([s * g, s / g, a * b * s * zm * zp * g, a * b * s * zm * zp / g], CTX)
    )
    return front * gpart


def dag(p):
    return P(np.conj(p.a), np.conj(p.c), p.zm, p.zp)


def matw(g, p):
    return np.array([[v2(g, p), v1(g, dag(p))], [v1(g, p), v2(g, p)]])


def sfac(g, p):
    one = v1(g, p)
    two = v2(g, p).real
    m = abs(one)
    ph = one / m
    return np.array([
        [math.sqrt((two + m) / 2) * ph, math.sqrt((two + m) / 2)],
        [-math.sqrt((two - m) / 2) * ph, math.sqrt((two - m) / 2)],
    ])


def scalar_v(g, p):
    a, b, c, d, zm, zp, s = p.a, p.b, p.c, p.d, p.zm, p.zp, p.s
    front = -theta_multi([c * zm, d * zm, c * zp, d * zp], CTX) / (
        zp * (1 - Q) * theta(zm / zp, CTX)
    )
    gpart = qpoch_multi([g**2, Q * g**2], math.inf, CTX) / (
        qpoch_multi(
            [c * Q * g / (a * s), d * Q * g / (a * s), c * Q * g / (b * s),
             d * Q * g / (b * s), s * g, Q * g / s], math.inf, CTX)
        * theta(a * b * s * zm * zp / (Q * g), CTX)
    )
    return front * gpart


def gamma_sets(p, wtol=1e-16):
    fin_s, fin_qs, inf = [], [], []
    for alpha, store in ((p.s, fin_s), (Q / p.s, fin_qs)):
        k = 0
        while alpha * Q**k > 1.0:
            store.append((k, 1.0 / (alpha * Q**k)))
            k += 1
    X = abs(p.a * p.c) * p.zm * p.zp  # negative
    k = 0
    while -X * Q ** (k - 0.5) >= 1.0:
        k += 1
    for kk in range(k, k + 80):
        pt = X * Q ** (kk - 0.5)
        inf.append((kk, pt))
        if abs(pt) < 1e-30:
            break
    return fin_s, fin_qs, inf


def b_of_gamma(kind, k, p):
    r = p.zm / p.zp
    if kind == "inf":
        return (p.zp / p.zm) ** (k + 1) * theta_multi([p.c * p.zm, p.d * p.zm], CTX) / theta_multi([p.c * p.zp, p.d * p.zp], CTX)
    if kind == "fin_s":
        return r**k
    return r**k * theta_multi([p.a * p.zp, p.b * p.zp, p.c * p.zm, p.d * p.zm], CTX) / theta_multi([p.a * p.zm, p.b * p.zm, p.c * p.zp, p.d * p.zp], CTX)


def res_contour(g0, p, poles, nodes=256):
    others = [abs(z - g0) for z in poles if abs(z - g0) > 1e-10 * max(1, abs(g0))]
    others.append(abs(g0))
    rad = 0.5 * min(others)
    acc = 0.0 + 0.0j
    for m in range(nodes):
        w = cmath.exp(2j * math.pi * m / nodes)
        z = g0 + rad * w
        acc += scalar_v(z, p) / z * (rad * w)
    return (acc / nodes).real, (acc / nodes).imag


def all_poles(p):
    fs, fq, inf = gamma_sets(p)
    return [pt for _, pt in fs + fq + inf]


def res_factored(kind, k, g0, p):
    # remove the vanishing factor analytically
    a, b, s = p.a, p.b, p.s
    if kind == "fin_s":
        # (s*g;q)_oo vanishes: factor (1 - s g Q^k), d/dg = -s Q^k
        def v_omit(g):
            prod = 1.0
            qc = 1.0
            for i in range(600):
                if i != k:
                    prod *= 1 - s * g * qc
                qc *= Q
                if qc < CTX.product_tol:
                    break
            return scalar_v_omit_fins(g, p, prod)
        return v_omit(g0) / g0 / (-s * Q**k)
    if kind == "fin_qs":
        def v_omit(g):
            prod = 1.0
            qc = 1.0
            for i in range(600):
                if i != k:
                    prod *= 1 - (Q * g / s) * qc
                qc *= Q
                if qc < CTX.product_tol:
                    break
            return scalar_v_omit_finqs(g, p, prod)
        return v_omit(g0) / g0 / (-(Q / s) * Q**k)
    # inf: theta(X/(Q g)) vanishes at X/(Q g0) = Q^(-k) -> j = -k
    X = p.a * p.b * s * p.zm * p.zp / Q
    j = -k
    qq = qpoch(Q, math.inf, CTX)
    theta_prime = (-1.0) ** (j + 1) * Q ** (-j * (j - 1) / 2.0 - j) * qq * qq
    dfac = theta_prime * (-X / g0**2)
    return scalar_v_omit_inf(g0, p) / g0 / dfac


def scalar_v_omit_fins(g, p, replaced):
    a, b, c, d, zm, zp, s = p.a, p.b, p.c, p.d, p.zm, p.zp, p.s
    front = -theta_multi([c * zm, d * zm, c * zp, d * zp], CTX) / (zp * (1 - Q) * theta(zm / zp, CTX))
    gpart = qpoch_multi([g**2, Q * g**2], math.inf, CTX) / (
        qpoch_multi([c * Q * g / (a * s), d * Q * g / (a * s), c * Q * g / (b * s), d * Q * g / (b * s), Q * g / s], math.inf, CTX)
        * replaced * theta(a * b * s * zm * zp / (Q * g), CTX)
    )
    return front * gpart


def scalar_v_omit_finqs(g, p, replaced):
    a, b, c, d, zm, zp, s = p.a, p.b, p.c, p.d, p.zm, p.zp, p.s
    front = -theta_multi([c * zm, d * zm, c * zp, d * zp], CTX) / (zp * (1 - Q) * theta(zm / zp, CTX))
    gpart = qpoch_multi([g**2, Q * g**2], math.inf, CTX) / (
        qpoch_multi([c * Q * g / (a * s), d * Q * g / (a * s), c * Q * g / (b * s), d * Q * g / (b * s), s * g], math.inf, CTX)
        * replaced * theta(a * b * s * zm * zp / (Q * g), CTX)
    )
    return front * gpart


def scalar_v_omit_inf(g, p):
    a, b, c, d, zm, zp, s = p.a, p.b, p.c, p.d, p.zm, p.zp, p.s
    front = -theta_multi([c * zm, d * zm, c * zp, d * zp], CTX) / (zp * (1 - Q) * theta(zm / zp, CTX))
    gpart = qpoch_multi([g**2, Q * g**2], math.inf, CTX) / qpoch_multi(
        [c * Q * g / (a * s), d * Q * g / (a * s), c * Q * g / (b * s), d * Q * g / (b * s), s * g, Q * g / s], math.inf, CTX)
    return front * gpart


def phi(g, y, p):
    """Two complementary series; switch at |y| = sqrtature(Q)/|a|."""
    a, b, c, d, s = p.a, p.b, p.c, p.d, p.s
    if abs(b * y) < math.sqrt(Q):
        return phi32(Q / (a * y), s * g, s / g, c * Q / a, d * Q / a, b * y, CTX)
    return phi32(s * g, s / g, b * y, c * Q / a, d * Q / a, Q / (a * y), CTX)


def dfun(g, p):
    a, b, c, d, zp, s = p.a, p.b, p.c, p.d, p.zp, p.s
    return (
        qpoch_multi([c * Q / a, d * Q / a], math.inf, CTX) * theta(b * zp, CTX)
        / theta_multi([a / b, c * zp, d * zp], CTX)
        * qpoch_multi([c * Q * g / (s * b), d * Q * g / (s * b)], math.inf, CTX)
        * theta(a * s * zp / (Q * g), CTX)
        / qpoch_multi([Q * g**2, s / g], math.inf, CTX)
    )


def cfun(g, p, z=None):
    a, b, c, d, s = p.a, p.b, p.c, p.d, p.s
    if z is None:
        z = p.zp
    return (
        qpoch_multi([c * Q / a, d * Q / a, 1.0 / g**2], math.inf, CTX) * theta(b * z, CTX)
        / (qpoch_multi([s / g, c * Q / (a * s * g), d * Q / (a * s * g)], math.inf, CTX)
           * theta(b * s * z * g, CTX))
    )


def psi(y, gamma, p, kind):
    if kind == "circle":
        return np.array([phi(gamma, y, p), phi(gamma, y, dag(p))])
    if kind == "fin_s":
        return cfun(gamma, p) * phi(gamma, y, p)
    return dfun(gamma, p) * phi(gamma, y, p) + dfun(gamma, dag(p)) * phi(gamma, y, dag(p))


def norm_N(y, p):
    return (1.0 / abs(y)) * abs(
        qpoch(p.c * y, math.inf, CTX) / qpoch(p.a * y, math.inf, CTX)
    ) ** 2


def inner(f, g_, p, nodes=512, wtol=1e-22):
    # circle part: (1/4pi) int_0^2pi g^T v f dtheta
    acc = 0.0 + 0.0j
    for m in range(nodes):
        gam = cmath.exp(2j * math.pi * m / nodes)
        acc += g_(gam, "circle") @ (matw(gam, p) @ f(gam, "circle"))
    tot = acc / (2.0 * nodes)
    # mass part
    fs, fq, inf = gamma_sets(p)
    poles = all_poles(p)
    for kind, lst in (("fin_s", fs), ("fin_qs", fq), ("inf", inf)):
        for k, pt in lst:
            w = res_factored(kind, k, pt, p) / b_of_gamma(kind, k, p)
            w = complex(w).real
            if abs(w) < wtol:
                continue
            tot += f(pt, kind) * np.conj(g_(pt, kind)) * w
    return tot


def run_draw(tag, p):
    print(f"--- draw {tag}: a={p.a:.4f}, c={p.c:.4f}, z-={p.zm}, z+={p.zp}, s={p.s:.4f}")
    fs, fq, inf = gamma_sets(p)
    print(f"    fin_s: {[f'{pt:.4f}' for _, pt in fs]}  fin_qs: {[f'{pt:.4f}' for _, pt in fq]}  inf[:4]: {[f'{pt:.5f}' for _, pt in inf[:4]]}")
    # Hermitian + posdef + S
    worst_h = worst_s = 0.0
    mineig = 1e9
    for m in range(64):
        gam = cmath.exp(2j * math.pi * (m + 0.31) / 64)
        V = matw(gam, p)
        worst_h = max(worst_h, abs(V[0, 1] - np.conj(V[1, 0])))
        ev = np.linalg.eigvalsh(0.5 * (V + V.conj().T))
        mineig = min(mineig, ev.min())
        S = sfac(gam, p)
        worst_s = max(worst_s, np.abs(S.conj().T @ S - V).max())
    print(f"    Hermitian dev={worst_h:.2e}  min eig={mineig:.4e}  |S^TS-v|={worst_s:.2e}")
    # dagger on circle: v1_dag = conj(v1)
    gam = cmath.exp(0.7j)
    print(f"    v1dag-conj(v1) = {abs(v1(gam, dag(p)) - np.conj(v1(gam, p))):.2e}")
    # residues two ways at 3 points
    poles = all_poles(p)
    pts = (fs + fq + inf)[:3] if fs or fq else inf[:3]
    kinds = (["fin_s"] * len(fs) + ["fin_qs"] * len(fq) + ["inf"] * len(inf))[:3]
    for (k, pt), kind in zip(pts, kinds):
        rc, ic = res_contour(pt, p, poles)
        rf = res_factored(kind, k, pt, p)
        rf = complex(rf).real
        print(f"    res@{kind}[{k}] {pt:.5f}: contour={rc:.6e} (im {ic:.1e}) factored={rf:.6e} rel={abs(rc-rf)/abs(rf):.2e}")
        w = rf / b_of_gamma(kind, k, p)
        print(f"      w = {complex(w).real:.6e} (positive: {complex(w).real > 0})")
    # explicit vs transformed phi in overlap annulus
    worst = 0.0
    for yy in (0.9 * math.sqrt(Q) / abs(p.a), -1.1 * math.sqrt(Q) / abs(p.a)):
        for gam in (cmath.exp(1.1j), 0.3, -0.44):
            e1 = phi32(Q / (p.a * yy), p.s * gam, p.s / gam, p.c * Q / p.a, p.d * Q / p.a, p.b * yy, CTX)
            e2 = phi32(p.s * gam, p.s / gam, p.b * yy, p.c * Q / p.a, p.d * Q / p.a, Q / (p.a * yy), CTX)
            worst = max(worst, abs(e1 - e2) / abs(e2))
    print(f"    series overlap agreement: {worst:.2e}")
    return fs, fq, inf


# draw A: generic, s slightly > 1 so fin_s nonempty
pA = P(0.25 ** 0.9 * cmath.exp(1.3j), 0.25 ** 0.3 * cmath.exp(0.5j), -0.9, 1.4)
# draw B: s < Q so fin_qs nonempty
pB = P(0.25 ** 0.2 * cmath.exp(0.9j), 0.25 ** 1.1 * cmath.exp(0.35j), -1.2, 0.8)

for tag, p in (("A", pA), ("B", pB)):
    run_draw(tag, p)
