"""Pure-Python twin of the compiled kernels.

Same algorithm and coordinate order as ``_kernels.pyx``; inner products go
through numpy, so results agree with the compiled path to rounding only.
"""
import numpy as np

_MASK = (1 << 64) - 1


def _splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def dcd_hinge(X, y, C, tol, max_iter, seed):
    """Solve ``min_w 0.5|w|^2 + C sum_i max(0, 1 - y_i w.x_i)``.

    Returns ``(w, alpha, n_iter)``.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n, d = X.shape
    w = np.zeros(d)
    alpha = np.zeros(n)
    qd = np.einsum("ij,ij->i", X, X)
    order = list(range(n))
    rows = list(X)
    ys = y.tolist()
    state = int(seed) & _MASK
    it = 0
    while it < max_iter:
        for s in range(n - 1, 0, -1):
            state, r = _splitmix64(state)
            t = r % (s + 1)
            order[s], order[t] = order[t], order[s]

        pg_max = -np.inf
        pg_min = np.inf
        for i in order:
            q = qd[i]
            if q <= 0.0:
                continue
            xi = rows[i]
            yi = ys[i]
            g = yi * float(w @ xi) - 1.0
            a_old = alpha[i]
            if a_old <= 0.0:
                pg = min(g, 0.0)
            elif a_old >= C:
                pg = max(g, 0.0)
            else:
                pg = g
            if pg > pg_max:
                pg_max = pg
            if pg < pg_min:
                pg_min = pg
            if pg != 0.0:
                a_new = min(max(a_old - g / q, 0.0), C)
                alpha[i] = a_new
                w += ((a_new - a_old) * yi) * xi
        it += 1
        if pg_max - pg_min < tol:
            break
    return w, alpha, it
