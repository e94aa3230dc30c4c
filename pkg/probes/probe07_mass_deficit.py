"""Where is the missing 6.1% of measure mass?  Candidates: the poles of the
second theta factor outside the unit disk, at gamma = -(t/abc) q^j.
"""
import cmath
import math
import sys

sys.path.insert(0, "/root/pkg/src")

from qcasimir.qkernel import QContext
from qcasimir.bigqjacobi import (
    BigQJacobiParams,
    _v_complex,
    inner_product,
    spectral_measure,
)

Q = 0.25
pars = BigQJacobiParams(2.0, 2.0**0.6, 2.0, 2.0**-0.6, QContext(Q))

meas = spectral_measure(pars)
one = lambda g: 1.0  # noqa: E731
total = inner_product(one, one, meas)
print(f"total mass with printed support: {total.real:.12f}  deficit {1-total.real:.12f}")

# residues at the other theta family's outside-disk points
ratio2 = pars.t / pars.abc  # = Q^{1.6}
extra = 0.0
j = -2
while j > -40:
    g0 = -ratio2 * Q**j
    if abs(g0) <= 1.0:
        break
    # bare contour, radius = half distance to nearest of the combined lattice
    # (coarse: use 0.2 * |g0| which separates the interlaced families here)
    r = 0.2 * abs(g0)
    acc = 0.0 + 0.0j
    M = 256
    for m in range(M):
        w = cmath.exp(2j * math.pi * m / M)
        z = g0 + r * w
        acc += _v_complex(z, pars) / z * (r * w)
    res = acc / M
    print(f"  j={j}: gamma={g0:+.6f}  res={res.real:+.6e}  imag={abs(res.imag):.1e}")
    extra += res.real
    j -= 1
    if abs(res) < 1e-16:
        break
print(f"sum of second-family residues: {extra:.12f}")
print(f"printed-support total + extra = {total.real + extra:.12f}")
