"""Check far-mass phi values against a brute-force high-precision reference."""

import math

import mpmath as mp

from qcasimir.qkernel import QContext
from qcasimir.bigqjacobi import (
    BigQJacobiParams,
    lattice_point,
    norm_N,
    phi_big,
    spectral_measure,
    _series_loss_digits,
)

Q = 0.25
pars = BigQJacobiParams(2.0, 2.0**0.6, 2.0, 2.0**-0.6, QContext(Q))


def phi_ref(gamma, y, dps=300):
    """Transformed series at dps digits, parameters all derived in mp."""
    with mp.workdps(dps):
        gg = mp.mpf(1) / mp.mpf(gamma) if abs(gamma) > pars.a else mp.mpf(gamma)
        yy = mp.mpf(y)
        a = mp.mpf(pars.a)
        b = mp.mpf(pars.b)
        c = mp.mpf(pars.c)
        av, bv, cv = gg / a, 1 / (a * gg), -1 / yy
        dv, ev = 1 / (a * b), 1 / (a * c)
        zv = -yy / (b * c)
        q = mp.mpf(Q)
        term = partial = mp.mpf(1)
        peak = mp.mpf(1)
        qk = mp.mpf(1)
        for k in range(5000):
            f_a = (1 - av * qk) * (1 - bv * qk) * (1 - cv * qk)
            if abs(f_a) < mp.mpf(10) ** (-dps + 30):
                break
            qk *= q
            term = term * f_a * zv / ((1 - qk) * (1 - dv * qk / q * q) * (1 - ev * qk))
            # careful: denominator factors at previous qk
            partial += term
            peak = max(peak, abs(term))
            if abs(term) < mp.mpf(10) ** (-dps + 30) * peak:
                break
        return partial, peak


# redo reference more carefully (factor bookkeeping)
def phi_ref2(gamma, y, dps=300):
    with mp.workdps(dps):
        g0 = mp.mpf(gamma)
        gg = 1 / g0 if abs(g0) > pars.a else g0
        yy = mp.mpf(y)
        a, b, c = mp.mpf(pars.a), mp.mpf(pars.b), mp.mpf(pars.c)
        av, bv, cv = gg / a, 1 / (a * gg), -1 / yy
        dv, ev = 1 / (a * b), 1 / (a * c)
        zv = -yy / (b * c)
        q = mp.mpf(Q)
        term = partial = mp.mpf(1)
        peak = mp.mpf(1)
        qk = mp.mpf(1)
        for k in range(5000):
            numer = (1 - av * qk) * (1 - bv * qk) * (1 - cv * qk) * zv
            den = (1 - dv * qk) * (1 - ev * qk)
            qk *= q
            term = term * numer / (den * (1 - qk))
            partial += term
            peak = max(peak, abs(term))
            if abs(term) < mp.mpf(10) ** (-(dps - 30)) * peak and abs(term) < 1:
                break
        return float(partial), float(mp.log10(peak / max(abs(partial), mp.mpf(10) ** -200)))


meas = spectral_measure(pars, mass_tol=1e-40)
y0 = lattice_point(pars, "t", 0)
N0 = math.sqrt(norm_N(y0, pars))

print("per-mass contributions to <phi_t0, phi_t0>:")
for m in meas.masses:
    val = phi_big(m.gamma, y0.point, pars) / N0
    ref, lost = phi_ref2(m.gamma, y0.point)
    refn = ref / N0
    est = _series_loss_digits(m.gamma if abs(m.gamma) <= pars.a else 1.0 / m.gamma, y0.point, pars)
    rel = abs(val - refn) / max(abs(refn), 1e-300)
    print(
        f"gamma={m.gamma:14.4e} w={m.weight:9.3e}  w*phi^2={m.weight * val * val:10.3e}"
        f"  [ref {m.weight * refn * refn:10.3e}]  rel_err={rel:8.1e}"
        f"  lost_actual={lost:5.1f} est={est:5.1f}"
    )
