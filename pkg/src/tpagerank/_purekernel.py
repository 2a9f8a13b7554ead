"""Pure scipy/numpy backend for the hot kernel loops.

Used when the compiled extension is unavailable (or disabled via the
TPAGERANK_PURE environment variable).  Same contracts as ``_fastkernel``.
"""

import numpy as np
import scipy.sparse as sp

COMPILED = False


def left_matvec(n, indptr, indices, p, v):
    """y = v @ P for the row-stochastic CSR matrix P = (p, indices, indptr)."""
    pt = sp.csr_matrix((p, indices, indptr), shape=(n, n)).T.tocsr()
    return pt @ v


def power_iterate(n, indptr, indices, p, gamma, teleport, v0, tol, max_iter,
                  lazy):
    """Iterate v <- v @ M (or the lazy half-step) until ||vM - v||_1 <= tol.

    M = gamma * P + (1 - gamma) * 1 teleport^T.  Returns (v, iterations,
    converged); v is renormalized to the simplex after every step.
    """
    pt = sp.csr_matrix((p, indices, indptr), shape=(n, n)).T.tocsr()
    v = np.array(v0, dtype=float)
    for it in range(1, max_iter + 1):
        y = pt @ v
        if gamma < 1.0:
            y = gamma * y + (1.0 - gamma) * teleport
        res = np.abs(y - v).sum()
        v = 0.5 * (v + y) if lazy else y
        v /= v.sum()
        if res <= tol:
            return v, it, True
    return v, max_iter, False
