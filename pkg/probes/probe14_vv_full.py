# Full structural verification of the vector-valued module:
# Gram/norms, recurrence on circle + masses, polynomial reduction on the
# finite mass family, series-representation agreement, weight decay.
import cmath
import math
import sys

import numpy as np

sys.path.insert(0, "src")
from qcasimir.qkernel import QContext, phi32
from qcasimir.vvbigqjacobi import (
    VVParams, dagger_params, gamma_set, gram_psi, matrix_weight, norm_N_vv,
    phi_vv, psi_big, psi_normalized, recurrence_coeffs_vv, s_factor,
    weight_w_vv, weight_w_vv_factored,
)

CTX = QContext(0.25)
Q = CTX.q

pA = VVParams(0.25 ** 0.9 * cmath.exp(1.3j), 0.25 ** 0.3 * cmath.exp(0.5j), 1.4, -0.9, CTX)
pB = VVParams(0.25 ** 0.2 * cmath.exp(0.9j), 0.25 ** 1.1 * cmath.exp(0.35j), 0.8, -1.2, CTX)


def check_weights(tag, p):
    gs = gamma_set(p)
    print(f"[{tag}] masses: fin_s={len(gs.fin_s)} fin_qs={len(gs.fin_qs)} inf={len(gs.inf)}")
    ws = [(m.origin, m.index, m.point, weight_w_vv_factored(m, p)) for m in gs.all_points()]
    for o, k, pt, w in ws[:6]:
        print(f"    {o}[{k}] gamma={pt:+.6f}  w={w:.6e}")
    if len(ws) > 6:
        o, k, pt, w = ws[-1]
        print(f"    ... last {o}[{k}] gamma={pt:+.3e}  w={w:.3e}")
    assert all(w > 0 for _, _, _, w in ws), "negative mass weight"
    # contour cross-check on up to 3 points
    for m in gs.all_points()[:3]:
        wc = weight_w_vv(m, p, gset=gs)
        wf = weight_w_vv_factored(m, p)
        print(f"    contour vs factored @ {m.origin}[{m.index}]: rel {abs(wc - wf) / abs(wf):.2e}")
    return gs


def check_recurrence(tag, p, gs):
    worst_c = 0.0
    pd = dagger_params(p)
    for z in (p.z_plus, p.z_minus):
        for k in range(-2, 3):
            ak, bk = recurrence_coeffs_vv(k, z, p)
            akm, _ = recurrence_coeffs_vv(k - 1, z, p)
            y0, yp_, ym_ = z * Q ** k, z * Q ** (k + 1), z * Q ** (k - 1)
            for gam in (cmath.exp(0.8j), cmath.exp(2.4j)):
                lam = gam + 1 / gam
                for pp in (p, pd):
                    lhs = lam * psi_normalized(y0, gam, pp)[0]
                    r1 = ak * psi_normalized(yp_, gam, pp)[0]
                    r2 = bk * psi_normalized(y0, gam, pp)[0]
                    r3 = akm * psi_normalized(ym_, gam, pp)[0]
                    sc = max(1.0, abs(lhs), abs(r1), abs(r2), abs(r3))
                    worst_c = max(worst_c, abs(lhs - r1 - r2 - r3) / sc)
    print(f"[{tag}] recurrence on circle (both z, k=-2..2, both components): {worst_c:.2e}")
    worst_m = 0.0
    picks = list(gs.all_points())[:3]
    for z in (p.z_plus, p.z_minus):
        for k in range(-2, 3):
            ak, bk = recurrence_coeffs_vv(k, z, p)
            akm, _ = recurrence_coeffs_vv(k - 1, z, p)
            y0, yp_, ym_ = z * Q ** k, z * Q ** (k + 1), z * Q ** (k - 1)
            for mass in picks:
                lam = mass.point + 1 / mass.point
                lhs = lam * psi_normalized(y0, mass, p)
                r1 = ak * psi_normalized(yp_, mass, p)
                r2 = bk * psi_normalized(y0, mass, p)
                r3 = akm * psi_normalized(ym_, mass, p)
                sc = max(1.0, abs(lhs), abs(r1), abs(r2), abs(r3))
                worst_m = max(worst_m, abs(lhs - r1 - r2 - r3) / sc)
    print(f"[{tag}] recurrence at masses ({[m.origin for m in picks]}): {worst_m:.2e}")


def check_gram(tag, p, gs, nodes=512):
    ys = [p.z_plus * Q ** k for k in range(3)] + [p.z_minus * Q ** k for k in range(3)]
    g = gram_psi(p, ys, nodes=nodes, gset=gs)
    dev = np.abs(g - np.eye(len(ys))).max()
    print(f"[{tag}] 6-point Gram vs identity ({nodes} nodes): {dev:.3e}")
    print("    diag:", " ".join(f"{g[i, i].real:.8f}" for i in range(len(ys))))
    return dev


def check_poly_reduction(tag, p, gs):
    # on the first finite family gamma = 1/(s q^m) the eigenfunction should be
    # a degree-m polynomial: ratio against the terminating hypergeometric sum
    # with the matched complex parameter set must be y-independent.
    a, b, c, d, s = p.a, p.b, p.c, p.d, p.s
    for mass in gs.fin_s:
        m = mass.index
        ys = [p.z_plus * Q ** k for k in range(3)] + [p.z_minus * Q ** k for k in range(2)] + [7.7]
        ratios = []
        for y in ys:
            lhs = phi_vv(y, mass.point, p)
            # terminating sum: upper q^-m, s^2 q^m, c*y; lower cq/a, cq/b; arg q
            rhs = phi32(Q ** (-m), s * s * Q ** m, c * y, c * Q / a, c * Q / b, Q, CTX)
            ratios.append(lhs / rhs)
        ratios = np.array(ratios)
        spread = np.abs(ratios - ratios[0]).max() / abs(ratios[0])
        print(f"[{tag}] fin_s[{m}] polynomial-reduction ratio spread over 6 y: {spread:.2e}")


def check_series_agreement(tag, p):
    # direct vs continued forms in overlap regions
    a, b, c, d, s = p.a, p.b, p.c, p.d, p.s
    worst = 0.0
    for gam in (cmath.exp(0.9j), cmath.exp(2.1j)):
        for y in (0.5 / abs(b), -0.8 / abs(b)):
            direct = phi32(Q / (a * y), s * gam, s / gam, c * Q / a, d * Q / a, b * y, CTX)
            import qcasimir.vvbigqjacobi as vv
            # force the thomae-style form by calling with the same machinery
            pref = (vv.qpoch_multi([d * Q / (a * s * gam), c * d * Q * y * gam / (a * s)], math.inf, CTX)
                    / vv.qpoch_multi([d * Q / a, b * y], math.inf, CTX))
            ser = phi32(s * gam, c * y, c * Q * gam / (a * s), c * Q / a,
                        c * d * Q * y * gam / (a * s), d * Q / (a * s * gam), CTX)
            worst = max(worst, abs(direct - pref * ser) / max(1.0, abs(direct)))
    print(f"[{tag}] direct vs continued series in overlap: {worst:.2e}")


def check_misc(tag, p):
    # N invariance under conjugate swap; dagger pair = conj on circle for real y
    pd = dagger_params(p)
    y = 0.7 * p.z_plus
    assert abs(norm_N_vv(y, p) - norm_N_vv(y, pd)) < 1e-14 * norm_N_vv(y, p)
    gam = cmath.exp(1.234j)
    pair = psi_big(y, gam, p)
    print(f"[{tag}] second component vs conj(first) on circle: {abs(pair[1] - pair[0].conjugate()):.2e}")
    S = s_factor(gam, p)
    V = matrix_weight(gam, p).as_array()
    print(f"[{tag}] |S^dag S - v| at one node: {np.abs(S.conj().T @ S - V).max():.2e}")


for tag, p in (("A", pA), ("B", pB)):
    gs = check_weights(tag, p)
    check_series_agreement(tag, p)
    check_misc(tag, p)
    check_poly_reduction(tag, p, gs)
    check_recurrence(tag, p, gs)
    check_gram(tag, p, gs, nodes=512)
    print()
