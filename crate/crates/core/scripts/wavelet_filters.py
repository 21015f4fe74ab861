"""Generates src/wavelet/filters.rs.

Starts from the PyWavelets decomposition low-pass filters and refines each
one with Newton's method (50 digits) on the defining equations of an
order-p Daubechies-type filter h of length 2p:

    sum_k h[k] h[k + 2m] = delta_m          m = 0 .. p-1
    sum_k (-1)^k (k/n)^j h[k] = 0           j = 0 .. p-1

The tabulated symlets satisfy these only to ~1e-12; the refined filters
satisfy them to the last bit, which is what perfect reconstruction needs.
The refined root is the one nearest the tabulated filter, so the family
(extremal phase or least asymmetric) is preserved.
"""
import sys

import pywt
from mpmath import mp, mpf, matrix, lu_solve

mp.dps = 50


def equations(h):
    n = len(h)
    p = n // 2
    eqs = []
    for m in range(p):
        s = sum(h[k] * h[k + 2 * m] for k in range(n - 2 * m))
        eqs.append(s - (1 if m == 0 else 0))
    for j in range(p):
        eqs.append(sum((-1) ** k * (mpf(k) / n) ** j * h[k] for k in range(n)))
    return eqs


def jacobian(h):
    n = len(h)
    p = n // 2
    jac = matrix(n, n)
    for m in range(p):
        for k in range(n):
            v = 0
            if k + 2 * m < n:
                v += h[k + 2 * m]
            if k - 2 * m >= 0:
                v += h[k - 2 * m]
            jac[m, k] = v
    for j in range(p):
        for k in range(n):
            jac[p + j, k] = (-1) ** k * (mpf(k) / n) ** j
    return jac


def refine(h0):
    h = [mpf(repr(v)) for v in h0]
    for _ in range(30):
        f = equations(h)
        step = lu_solve(jacobian(h), matrix([-v for v in f]))
        h = [h[k] + step[k] for k in range(len(h))]
        if max(abs(v) for v in f) < mpf(10) ** -45:
            break
    assert max(abs(v) for v in equations(h)) < mpf(10) ** -40
    return h


def emit(name, h):
    out = [f"pub(crate) const {name}: [f64; {len(h)}] = ["]
    out += [f"    {float(v)!r}," for v in h]
    out.append("];\n")
    return "\n".join(out)


def main():
    tail = open(sys.argv[1]).read() if len(sys.argv) > 1 else ""
    parts = [
        "// Orthonormal decomposition low-pass filters (analysis side), in the\n"
        "// convolution order used by `transform`.\n"
    ]
    for family, orders in (("db", range(1, 11)), ("sym", range(2, 11))):
        for p in orders:
            tab = pywt.Wavelet(f"{family}{p}").dec_lo
            h = refine(tab)
            drift = max(abs(float(a) - b) for a, b in zip(h, tab))
            print(f"{family}{p}: max change {drift:.1e}", file=sys.stderr)
            parts.append(emit(f"{family.upper()}{p}", h))
    sys.stdout.write("\n".join(parts) + "\n" + tail)


if __name__ == "__main__":
    main()
