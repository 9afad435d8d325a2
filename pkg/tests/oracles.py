"""Independent reference computations used only by the tests."""
import itertools
import math

import numpy as np
from scipy.optimize import minimize


def brute_force_arc(phases):
    """Try every phase as the arc start and sweep counter-clockwise."""
    ph = [p % (2 * math.pi) for p in phases]
    return min(max((q - p) % (2 * math.pi) for q in ph) for p in ph)


def helstrom_by_numerical_range(u0, u1):
    """Helstrom success from min |<psi|V|psi>| over states.

    The minimum is found as the distance from the origin to the convex hull
    of LAPACK eigenvalues, solved as a small QP over simplex weights.
    """
    v = u0.conj().T @ u1
    lam = np.linalg.eigvals(v)
    n = len(lam)

    def obj(q):
        z = q @ lam
        return z.real ** 2 + z.imag ** 2

    best = math.inf
    starts = [np.full(n, 1.0 / n)] + [np.eye(n)[k] * 0.9 + 0.1 / n for k in range(n)]
    for q0 in starts:
        res = minimize(obj, q0, method="SLSQP", bounds=[(0, 1)] * n,
                       constraints=[{"type": "eq", "fun": lambda q: q.sum() - 1}],
                       options={"ftol": 1e-16, "maxiter": 500})
        best = min(best, res.fun)
    # pair segments give the exact answer when the origin is outside the hull
    seg = math.inf
    for a, b in itertools.combinations(lam, 2):
        d = b - a
        t = 0.0 if abs(d) == 0 else min(1.0, max(0.0, -(a.conjugate() * d).real / abs(d) ** 2))
        seg = min(seg, abs(a + t * d) ** 2)
    rho2 = min(best, seg) if best > 1e-14 else 0.0
    return 0.5 * (1 + math.sqrt(max(0.0, 1 - rho2)))


def trace_norm_helstrom_pure(v, psi):
    """1/2 (1 + 1/2 || |psi><psi| - V|psi><psi|V^H ||_1) for one input state."""
    rho = np.outer(psi, psi.conj())
    phi = v @ psi
    sigma = np.outer(phi, phi.conj())
    return 0.5 * (1 + 0.5 * np.abs(np.linalg.eigvalsh(rho - sigma)).sum())
