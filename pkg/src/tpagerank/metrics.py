"""Hilbert projective metric, Birkhoff contraction coefficient, and the
log-ratio upper bound on the induced projective distance between kernels."""

from __future__ import annotations

import math

import numpy as np

from .errors import BoundaryPointError, NonPositiveError
from .kernel import dense_transition


def _positive(v, what):
    v = np.asarray(v, dtype=float)
    if np.any(v <= 0):
        raise BoundaryPointError(f"{what} must be strictly positive")
    return v


def hilbert_distance(x, y) -> float:
    """d_H(x, y) = max_i ln(x_i/y_i) + max_j ln(y_j/x_j).

    Scale invariant; zero exactly when x and y are proportional.
    """
    x = _positive(x, "x")
    y = _positive(y, "y")
    r = np.log(x) - np.log(y)
    return float(r.max() - r.min())


def birkhoff_coefficient(A) -> float:
    """Birkhoff's contraction coefficient of a strictly positive matrix.

    Closed form (1 - sqrt(phi)) / (1 + sqrt(phi)) with
    phi = min over (i,j,k,l) of A_ik A_jl / (A_jk A_il).
    """
    A = np.asarray(A, dtype=float)
    if np.any(A <= 0):
        raise NonPositiveError("matrix must be strictly positive")
    L = np.log(A)
    # log cross-ratio L_ik + L_jl - L_jk - L_il = D[i,j,k] - D[i,j,l]
    # with D[i,j,:] = L[i] - L[j]; minimize over k,l then over the row pair
    D = L[:, None, :] - L[None, :, :]
    log_phi = float((D.min(axis=2) - D.max(axis=2)).min())
    phi = math.exp(log_phi)
    s = math.sqrt(min(phi, 1.0))
    return (1.0 - s) / (1.0 + s)


def birkhoff_sampled(A, pairs, rng) -> float:
    """Monte-Carlo lower estimate of tau_B from the defining sup (oracle)."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    best = 0.0
    for _ in range(pairs):
        x = rng.random(n) + 1e-3
        y = rng.random(n) + 1e-3
        dxy = hilbert_distance(x, y)
        if dxy < 1e-12:
            continue
        best = max(best, hilbert_distance(x @ A, y @ A) / dxy)
    return best


def kernel_distance_bound(g, w, cfg, x, y) -> float:
    """ln(alpha/beta) with alpha/beta the max/min entrywise ratio of M(x)
    and M(y): an upper bound on the induced projective distance d_H(M(x), M(y)).

    Requires a positive adjacency matrix and interior x, y.
    """
    if g.nnz != g.n * g.n or np.any(g.data <= 0):
        raise NonPositiveError("adjacency matrix must be strictly positive")
    x = _positive(x, "x")
    y = _positive(y, "y")
    Mx = dense_transition(g, w, cfg, x)
    My = dense_transition(g, w, cfg, y)
    r = np.log(Mx) - np.log(My)
    return float(r.max() - r.min())
