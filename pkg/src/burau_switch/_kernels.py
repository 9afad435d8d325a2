"""Hot numeric kernels: small dense complex eigenvalues and circular arcs.

Every function here is written against a subset of numpy that numba
understands, so the same source runs compiled or interpreted (see
``_accel``). They take and return plain arrays and never raise; the public
wrappers in ``numerics`` turn status flags into exceptions.
"""
import numpy as np

from ._accel import njit

TWO_PI = 2.0 * np.pi


@njit(cache=True, nogil=True)
def hessenberg(a):
    """Reduce a square complex matrix to upper Hessenberg form (Householder).

    Returns a new array; the input is left untouched. Only the eigenvalues
    are wanted downstream, so the reflectors are not accumulated.
    """
    h = a.copy()
    n = h.shape[0]
    v = np.zeros(n, dtype=np.complex128)
    for k in range(n - 2):
        alpha = 0.0
        for i in range(k + 1, n):
            alpha += h[i, k].real ** 2 + h[i, k].imag ** 2
        alpha = np.sqrt(alpha)
        if alpha == 0.0:
            continue
        x0 = h[k + 1, k]
        ax0 = abs(x0)
        phase = x0 / ax0 if ax0 > 0.0 else 1.0 + 0.0j
        # v = x + phase*|x| e_1, so that H x = -phase*|x| e_1
        for i in range(n):
            v[i] = 0.0
        for i in range(k + 1, n):
            v[i] = h[i, k]
        v[k + 1] += phase * alpha
        vnorm2 = 0.0
        for i in range(k + 1, n):
            vnorm2 += v[i].real ** 2 + v[i].imag ** 2
        if vnorm2 == 0.0:
            continue
        # H <- (I - 2 v v^H / |v|^2) H
        for j in range(n):
            s = 0.0j
            for i in range(k + 1, n):
                s += np.conj(v[i]) * h[i, j]
            s = 2.0 * s / vnorm2
            for i in range(k + 1, n):
                h[i, j] -= v[i] * s
        # H <- H (I - 2 v v^H / |v|^2)
        for i in range(n):
            s = 0.0j
            for j in range(k + 1, n):
                s += h[i, j] * v[j]
            s = 2.0 * s / vnorm2
            for j in range(k + 1, n):
                h[i, j] -= s * np.conj(v[j])
        for i in range(k + 2, n):
            h[i, k] = 0.0
    return h


@njit(cache=True, nogil=True)
def eigvals_qr(a, max_iter=500):
    """Eigenvalues of a small complex matrix by shifted Hessenberg QR.

    Single Wilkinson shift with Givens sweeps on the active block and
    an exceptional shift every 11th iteration without deflation.

    Returns ``(eigenvalues, converged)``.
    """
    n = a.shape[0]
    h = hessenberg(a.astype(np.complex128))
    eps = 2.220446049250313e-16
    hi = n - 1
    stalled = 0
    total = 0
    cs = np.zeros(n, dtype=np.complex128)
    sn = np.zeros(n, dtype=np.complex128)
    while hi > 0:
        lo = hi
        while lo > 0:
            scale = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if scale == 0.0:
                scale = 1.0
            if abs(h[lo, lo - 1]) <= eps * scale:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            stalled = 0
            continue
        total += 1
        stalled += 1
        if total > max_iter:
            return np.diag(h).copy(), False

        if stalled % 11 == 0:
            mu = h[hi, hi] + abs(h[hi, hi - 1])
        else:
            p = h[hi - 1, hi - 1]
            q = h[hi - 1, hi]
            r = h[hi, hi - 1]
            d = h[hi, hi]
            half = 0.5 * (p - d)
            disc = np.sqrt(half * half + q * r)
            m1 = d - q * r / (half + disc) if abs(half + disc) > 0.0 else d
            m2 = d - q * r / (half - disc) if abs(half - disc) > 0.0 else d
            mu = m1 if abs(m1 - d) <= abs(m2 - d) else m2

        for i in range(lo, hi + 1):
            h[i, i] -= mu
        # left sweep: zero the subdiagonal of the active block
        for k in range(lo, hi):
            x = h[k, k]
            y = h[k + 1, k]
            rr = np.sqrt(x.real ** 2 + x.imag ** 2 + y.real ** 2 + y.imag ** 2)
            if rr == 0.0:
                c = 1.0 + 0.0j
                s = 0.0j
            else:
                c = x / rr
                s = y / rr
            cs[k] = c
            sn[k] = s
            for j in range(k, n):
                t1 = h[k, j]
                t2 = h[k + 1, j]
                h[k, j] = np.conj(c) * t1 + np.conj(s) * t2
                h[k + 1, j] = -s * t1 + c * t2
        # right sweep with the adjoint rotations
        for k in range(lo, hi):
            c = cs[k]
            s = sn[k]
            top = min(k + 2, hi)
            for i in range(0, top + 1):
                t1 = h[i, k]
                t2 = h[i, k + 1]
                h[i, k] = t1 * c + t2 * s
                h[i, k + 1] = -t1 * np.conj(s) + t2 * np.conj(c)
        for i in range(lo, hi + 1):
            h[i, i] += mu
    return np.diag(h).copy(), True


@njit(cache=True, nogil=True)
def wrap_phases(eigs):
    """Sorted eigenphases in [0, 2pi)."""
    out = np.empty(eigs.shape[0], dtype=np.float64)
    for i in range(eigs.shape[0]):
        ph = np.arctan2(eigs[i].imag, eigs[i].real)
        if ph < 0.0:
            ph += TWO_PI
        if ph >= TWO_PI:
            ph -= TWO_PI
        out[i] = ph
    out.sort()
    return out


@njit(cache=True, nogil=True)
def arc_from_sorted(phases):
    """2pi minus the largest circular gap of sorted phases in [0, 2pi)."""
    n = phases.shape[0]
    if n == 1:
        return 0.0
    gap = phases[0] + TWO_PI - phases[n - 1]
    for i in range(1, n):
        g = phases[i] - phases[i - 1]
        if g > gap:
            gap = g
    arc = TWO_PI - gap
    return arc if arc > 0.0 else 0.0


@njit(cache=True, nogil=True)
def principal_spread(eigs):
    """max - min of principal-branch arguments in (-pi, pi]; not rotation invariant."""
    lo = np.inf
    hi = -np.inf
    for i in range(eigs.shape[0]):
        ph = np.arctan2(eigs[i].imag, eigs[i].real)
        if ph < lo:
            lo = ph
        if ph > hi:
            hi = ph
    return hi - lo


@njit(cache=True, nogil=True)
def arcs_batch(stack, max_iter=500):
    """Shortest arc and principal spread for each matrix of a (m, n, n) stack.

    Returns ``(arcs, spreads, ok)``; ``ok[k]`` is False when the QR
    iteration for matrix ``k`` did not converge.
    """
    m = stack.shape[0]
    arcs = np.empty(m, dtype=np.float64)
    spreads = np.empty(m, dtype=np.float64)
    ok = np.empty(m, dtype=np.bool_)
    for k in range(m):
        eigs, conv = eigvals_qr(stack[k], max_iter)
        ok[k] = conv
        arcs[k] = arc_from_sorted(wrap_phases(eigs))
        spreads[k] = principal_spread(eigs)
    return arcs, spreads, ok
