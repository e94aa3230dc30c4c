"""Test alternative global normalizations of the circle weight: as-printed,
inverted prefactor, and bare gamma-part.  The true one gives total mass 1
(the y = -1 eigenfunction is identically 1 and has unit norm).
"""
import cmath
import math
import sys

sys.path.insert(0, "/root/pkg/src")

import numpy as np

from qcasimir.qkernel import QContext, qpoch, qpoch_multi, theta, theta_multi
from qcasimir.bigqjacobi import BigQJacobiParams, _v_complex, _v_prefactor, support_points

Q = 0.25
pars = BigQJacobiParams(2.0, 2.0**0.6, 2.0, 2.0**-0.6, QContext(Q))
C = _v_prefactor(pars)
print(f"prefactor C = {C:.12f}   1/C = {1/C:.6f}   C^2 = {C*C:.8f}")

fin, inf_pts = support_points(pars)
masses = fin + inf_pts
mass_sum = sum(m.weight for m in masses)

N = 1024
nodes = np.exp(2j * math.pi * np.arange(N) / N)
vvals = np.array([complex(_v_complex(z, pars)).real for z in nodes])
circ = float(np.sum(vvals)) / (2 * N)
total = circ + mass_sum
print(f"as printed:   circle={circ:.10f}  masses={mass_sum:.10f}  total={total:.10f}")
for scale, name in ((1 / C**2, "x 1/C^2 (inverted prefactor)"), (1 / C, "x 1/C (no prefactor)")):
    print(f"{name}: total = {total * scale:.12f}")
