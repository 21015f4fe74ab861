"""Brute-force maximisation of Q = S - lam * (chi2 - chi0^2) on small
instances with a generic bound-constrained optimiser (scipy L-BFGS-B).

    S    = sum(f - m - f * log(f / m))
    chi2 = mean((f - d)^2) / sigma^2

Prints Rust constants for tests/mer_oracle.rs.
"""
import numpy as np
from scipy.optimize import minimize

N = 8
rng = np.random.default_rng(20240611)


def solve(d, m, sigma, lam):
    def neg_q(f):
        s = np.sum(f - m - f * np.log(f / m))
        chi2 = np.mean((f - d) ** 2) / sigma**2
        return -(s - lam * chi2)

    def grad(f):
        gs = -np.log(f / m)
        gc = 2.0 * (f - d) / (len(f) * sigma**2)
        return -(gs - lam * gc)

    best = None
    for start in (m, np.maximum(d, 1e-3), 0.5 * (m + np.maximum(d, 1e-3))):
        r = minimize(neg_q, start, jac=grad, method="L-BFGS-B",
                     bounds=[(1e-9, None)] * len(d),
                     options={"ftol": 1e-16, "gtol": 1e-12, "maxiter": 100000})
        if best is None or r.fun < best.fun:
            best = r
    return best.x


def arr(values):
    return "[" + ", ".join(repr(float(v)) for v in values) + "]"


print(f"pub const INSTANCES: [Instance; 10] = [")
for _ in range(10):
    m = rng.uniform(50.0, 150.0, N)
    d = m * rng.uniform(0.3, 2.5, N)
    sigma = np.sqrt(np.mean((m - d) ** 2) / rng.uniform(3.0, 12.0))
    lam = float(rng.uniform(20.0, 400.0))
    f = solve(d, m, sigma, lam)
    print("    Instance {")
    print(f"        data: {arr(d)},")
    print(f"        model: {arr(m)},")
    print(f"        sigma: {float(sigma)!r},")
    print(f"        lambda: {lam!r},")
    print(f"        expected: {arr(f)},")
    print("    },")
print("];")
