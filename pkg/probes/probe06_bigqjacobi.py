"""Verification probe for the scalar spectral family, at the parameter map
q^2 = 0.25, k1 = k2 = 0.4, eps = 0.3, p = 0 (a = c = 2, b = 2^0.6, t = 2^-0.6)
plus generic draws.  Outcomes freeze into tests only after this passes.
"""
import math
import sys
import time

sys.path.insert(0, "/root/pkg/src")

import numpy as np

from qcasimir.qkernel import QContext
from qcasimir.bigqjacobi import (
    BigQJacobiParams,
    MassOrigin,
    cdqhahn,
    inner_product,
    lattice_point,
    norm_N,
    phi_big,
    phi_normalized,
    recurrence_coeffs,
    spectral_measure,
    support_points,
    weight_v,
    weight_w,
    weight_w_factored,
)

Q = 0.25
q = 0.5
pars = BigQJacobiParams(2.0, 2.0**0.6, 2.0, 2.0**-0.6, QContext(Q))
print("params: a=%.6f b=%.6f c=%.6f t=%.6f  ab=%.4f ac=%.4f bc=%.4f" % (
    pars.a, pars.b, pars.c, pars.t, pars.ab, pars.ac, pars.bc))

t0 = time.time()
fin, inf_pts = support_points(pars)
print(f"[support] fin={len(fin)} (expect 0), inf={len(inf_pts)}  ({time.time()-t0:.2f}s)")
for m in inf_pts:
    print(f"   gamma={m.gamma:+.8f}  w={m.weight:.6e}  {m.origin}")

# residue cross-check
worst = 0.0
for m in inf_pts[:5]:
    w2 = weight_w_factored(m.gamma, pars)
    rel = abs(m.weight - w2) / abs(w2)
    worst = max(worst, rel)
print(f"[residue two-ways] worst rel = {worst:.3e}  (need < 1e-8)")

# circle weight sanity
print(f"[v(+1)] = {weight_v(1.0, pars):.3e}   [v(-1)] = {weight_v(-1.0, pars):.3e}")
rng = np.random.default_rng(7)
worst = 0.0
for _ in range(10):
    th = rng.uniform(0, 2 * math.pi)
    g = complex(math.cos(th), math.sin(th))
    v1 = weight_v(g, pars)
    v2 = weight_v(1.0 / g, pars)
    v3 = weight_v(g.conjugate(), pars)
    worst = max(worst, abs(v1 - v2), abs(v1 - v3))
print(f"[v symmetry] worst = {worst:.3e}")

# norms
y0 = lattice_point(pars, "neg", 0)
y1 = lattice_point(pars, "neg", 1)
n1_expect = (1 - Q) * (1 - 1 / pars.bc) / ((1 - 1 / pars.ab) * (1 - 1 / pars.ac)) / Q
print(f"[norm neg k=0] {norm_N(y0, pars):.12f} (expect 1)")
print(f"[norm neg k=1] {norm_N(y1, pars):.12f} vs {n1_expect:.12f}")

t0 = time.time()
meas = spectral_measure(pars)
print(f"[measure] built in {time.time()-t0:.2f}s, masses={len(meas.masses)}")

yt0 = lattice_point(pars, "t", 0)
f_un = lambda g: phi_big(g, yt0.point, pars)  # noqa: E731
nt_quad = inner_product(f_un, f_un, meas)
print(f"[norm t k=0] display={norm_N(yt0, pars):.10f}  quadrature={nt_quad.real:.10f}  "
      f"rel={abs(norm_N(yt0, pars)-nt_quad.real)/norm_N(yt0, pars):.2e}")

# Gram matrix on the acceptance 4-set and on an 8-point set
ys = [lattice_point(pars, "neg", 0), lattice_point(pars, "neg", 1),
      lattice_point(pars, "t", 0), lattice_point(pars, "t", 1)]
ys8 = ys + [lattice_point(pars, "neg", 2), lattice_point(pars, "neg", 3),
            lattice_point(pars, "t", 2), lattice_point(pars, "t", -1)]

def gram(ylist):
    fns = [(lambda g, yy=yy: phi_normalized(g, yy, pars)) for yy in ylist]
    G = np.zeros((len(ylist), len(ylist)), dtype=complex)
    for i in range(len(ylist)):
        for j in range(i, len(ylist)):
            G[i, j] = inner_product(fns[i], fns[j], meas)
            G[j, i] = np.conj(G[i, j])
    return G

t0 = time.time()
G4 = gram(ys)
err4 = np.max(np.abs(G4 - np.eye(4)))
print(f"[gram 4x4] max|G-I| = {err4:.3e}  ({time.time()-t0:.2f}s)  (need < 1e-6)")
t0 = time.time()
G8 = gram(ys8)
err8 = np.max(np.abs(G8 - np.eye(8)))
print(f"[gram 8x8] max|G-I| = {err8:.3e}  ({time.time()-t0:.2f}s)")
if err8 > 1e-6:
    print(np.array_str(np.abs(G8), precision=2))

# recurrence residuals, both branches, x on and off circle
worst = 0.0
for _ in range(20):
    if rng.uniform() < 0.5:
        x = complex(math.cos(th := rng.uniform(0, 2 * math.pi)), math.sin(th))
    else:
        x = rng.uniform(0.3, 3.0) * (1 if rng.uniform() < 0.5 else -1) + 0j
        if abs(x.real) < 1e-2:
            continue
    for z, ks in ((-1.0, range(0, 7)), (pars.t, range(-3, 4))):
        branch = "neg" if z < 0 else "t"
        for k in ks:
            yk = lattice_point(pars, branch, k)
            ykp = lattice_point(pars, branch, k + 1)
            ak, bk = recurrence_coeffs(k, z, pars)
            akm, _ = recurrence_coeffs(k - 1, z, pars)
            lhs = (x + 1 / x) * phi_normalized(x, yk, pars)
            rhs = ak * phi_normalized(x, ykp, pars) + bk * phi_normalized(x, yk, pars)
            if not (branch == "neg" and k == 0):
                ykm = lattice_point(pars, branch, k - 1)
                rhs += akm * phi_normalized(x, ykm, pars)
            scale = max(1.0, abs(lhs))
            worst = max(worst, abs(lhs - rhs) / scale)
print(f"[recurrence] worst residual = {worst:.3e}  (need < 1e-10)")

# recurrence symmetry in (a,b,c)
import itertools
worst = 0.0
for perm in itertools.permutations((pars.a, pars.b, pars.c)):
    pp = BigQJacobiParams(*perm, pars.t, pars.base)
    for k, z in ((0, -1.0), (3, -1.0), (-2, pars.t), (2, pars.t)):
        a1, b1 = recurrence_coeffs(k, z, pars)
        a2, b2 = recurrence_coeffs(k, z, pp)
        worst = max(worst, abs(a1 - a2) / max(1, abs(a1)), abs(b1 - b2) / max(1, abs(b1)))
print(f"[abc symmetry] worst rel = {worst:.3e}  (need < 1e-13)")

# two forms agree; gamma <-> 1/gamma
worst_f = 0.0
worst_s = 0.0
for _ in range(12):
    g = rng.uniform(0.15, 0.95) * pars.a * complex(math.cos(th := rng.uniform(0, 6.28)), math.sin(th))
    y = rng.uniform(-0.99, 0.99) * pars.bc
    if abs(y) < 1e-3:
        continue
    d = phi_big(g, y, pars, form="defining")
    tr = phi_big(g, y, pars, form="transformed")
    worst_f = max(worst_f, abs(d - tr) / max(1.0, abs(d)))
    s1 = phi_big(g, y, pars)
    s2 = phi_big(1.0 / g, y, pars)
    worst_s = max(worst_s, abs(s1 - s2) / max(1.0, abs(s1)))
print(f"[two forms] worst rel = {worst_f:.3e}  (need < 1e-10)")
print(f"[inversion symmetry] worst = {worst_s:.3e}")

# polynomial reduction on the neg branch
worst = 0.0
for k in (0, 1, 2, 4):
    yk = lattice_point(pars, "neg", k)
    vals = []
    for _ in range(10):
        x = complex(rng.uniform(0.4, 2.5), rng.uniform(-1, 1))
        pk = cdqhahn(k, x, pars)
        ph = phi_big(x, yk.point, pars)
        vals.append(ph / pk)
    spread = max(abs(v - vals[0]) for v in vals) / max(1.0, abs(vals[0]))
    worst = max(worst, spread)
    if k == 0:
        print(f"[cdqhahn k=0] ratio = {vals[0]:.8f}")
print(f"[poly proportionality] worst spread = {worst:.3e}  (need < 1e-8)")
