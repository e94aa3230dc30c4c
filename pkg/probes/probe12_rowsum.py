# Row sums sum_m r_x(m)^2 with stabilization-based precision:
# raise dps until two consecutive evaluations agree, so extreme cancellation
# in P_m at large m cannot masquerade as a nonzero value.
import mpmath as mp

Q = 0.25
A = 0.5 ** (-0.4)
B = 0.5 ** (-0.4)
C = -(0.5 ** (-3.4))


def r_at_dps(branch_end, k, m, dps):
    with mp.workdps(dps):
        q = mp.mpf(Q)
        a = mp.mpf(2) ** (mp.mpf(4) * mp.mpf("0.4") / 2)  # exact reconstruction 0.5^-0.4
        b = a
        c = -(mp.mpf(2) ** (mp.mpf("3.4")))
        x = mp.mpf(branch_end and 0) # placeholder
        end = a if branch_end == "a" else c
        x = end * q ** (k + 1)
        u = (mp.qp(x / a, q) * mp.qp(x / c, q)) / (mp.qp(x, q) * mp.qp(b * x / c, q))
        th = mp.qp(c / a, q) * mp.qp(q * a / c, q)
        const = (mp.qp(a * q, q) * mp.qp(b * q, q) * mp.qp(c * q, q) * mp.qp(a * b * q / c, q)) / (
            mp.qp(q, q) * mp.qp(a * b * q * q, q) * th
        )
        pref = (1 - a * b * q ** (2 * m + 1)) / (a * q * (1 - a * b * q))
        mpart = (mp.qp(a * q, q, m) * mp.qp(a * b * q, q, m) * mp.qp(c * q, q, m)) / (
            mp.qp(q, q, m) * mp.qp(b * q, q, m) * mp.qp(a * b * q / c, q, m)
        )
        geom = (-a * c * q * q) ** (-m) * q ** (mp.mpf(-m) * (m - 1) / 2)
        v = pref * const * mpart * geom
        u1 = q ** (-m)
        u2 = a * b * q ** (m + 1)
        tot = term = mp.mpf(1)
        qj = mp.mpf(1)
        for j in range(m):
            term = term * (1 - u1 * qj) * (1 - u2 * qj) * (1 - x * qj) * q / (
                (1 - q * qj) * (1 - a * q * qj) * (1 - c * q * qj)
            )
            qj *= q
            tot += term
        return mp.sqrt(abs(x) * u * v) * tot, tot


def r_stable(branch, k, m):
    prev = None
    for dps in (40, 80, 160, 320, 640, 1280, 2560):
        val, praw = r_at_dps(branch, k, m, dps)
        if prev is not None:
            num = abs(val - prev)
            den = max(abs(val), mp.mpf("1e-300"))
            if num / den < mp.mpf("1e-25") or (abs(val) < 1e-200 and abs(prev) < 1e-200):
                return float(val), dps
        prev = val
    raise RuntimeError(f"no stabilization at m={m}")


for branch, k in (("a", 0), ("c", 0), ("a", 3)):
    tot = 0.0
    print(f"[branch {branch}, k={k}]")
    for m in range(0, 26):
        rv, dps = r_stable(branch, k, m)
        tot += rv * rv
        if m <= 12 or m % 4 == 0:
            print(f"  m={m:2d}: r = {rv: .6e}  (dps {dps:4d})  partial = {tot:.15f}")
    print(f"  sum(m<=25) = {tot:.15f}  dev from 1: {tot-1.0:.3e}")
