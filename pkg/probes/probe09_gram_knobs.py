"""Which knob controls the residual Gram error: mass-tail truncation or
quadrature nodes?  Rebuild the measure with each knob tightened.
"""
import sys

sys.path.insert(0, "/root/pkg/src")

import numpy as np

from qcasimir.qkernel import QContext
from qcasimir.bigqjacobi import (
    BigQJacobiParams,
    inner_product,
    lattice_point,
    phi_normalized,
    spectral_measure,
)

Q = 0.25
pars = BigQJacobiParams(2.0, 2.0**0.6, 2.0, 2.0**-0.6, QContext(Q))

ys4 = [lattice_point(pars, "neg", 0), lattice_point(pars, "neg", 1),
       lattice_point(pars, "t", 0), lattice_point(pars, "t", 1)]
ys8 = ys4 + [lattice_point(pars, "neg", 2), lattice_point(pars, "neg", 3),
             lattice_point(pars, "t", 2), lattice_point(pars, "t", -1)]


def gram(ylist, meas):
    fns = [(lambda g, yy=yy: phi_normalized(g, yy, pars)) for yy in ylist]
    G = np.zeros((len(ylist), len(ylist)), dtype=complex)
    for i in range(len(ylist)):
        for j in range(i, len(ylist)):
            G[i, j] = inner_product(fns[i], fns[j], meas)
            G[j, i] = np.conj(G[i, j])
    return G


for nodes, tol in ((512, 1e-14), (1024, 1e-14), (512, 1e-30), (512, 1e-40), (1024, 1e-40)):
    meas = spectral_measure(pars, quadrature_nodes=nodes, mass_tol=tol)
    G4 = gram(ys4, meas)
    G8 = gram(ys8, meas)
    e4 = np.max(np.abs(G4 - np.eye(4)))
    e8 = np.max(np.abs(G8 - np.eye(8)))
    print(f"nodes={nodes:5d} mass_tol={tol:.0e}  masses={len(meas.masses):2d}  "
          f"|G4-I|={e4:.3e}  |G8-I|={e8:.3e}")
meas = spectral_measure(pars, quadrature_nodes=512, mass_tol=1e-40)
G4 = gram(ys4, meas)
print("worst 4x4 entry:", np.unravel_index(np.argmax(np.abs(G4 - np.eye(4))), (4, 4)))
print(np.array_str(np.abs(G4 - np.eye(4)), precision=2))
