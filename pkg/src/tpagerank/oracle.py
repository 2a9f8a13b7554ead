"""Exact small-scale ground truth: arborescence enumeration, Matrix-Tree
invariant measures, the explicit unnormalized invariant vector, multistart
fixed-point search, and the exhaustive 2x2 fixed-point counter.

Two independent stationary-measure backends (edge-subset enumeration and
Laplacian principal minors) validate each other; this module is the trust
anchor for the iterative code.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ConvergenceError, TPageRankError
from .graph import Graph
from .kernel import apply_kernel, default_tol, iterate_f, iterate_u
from .weights import WeightFunction

_ENUM_LIMIT = 8
_MINOR_LIMIT = 500


@dataclass(frozen=True)
class Arborescence:
    root: int
    edges: tuple  # (i, j) pairs, exactly one per non-root node


def _is_arborescence(n, root, edges) -> bool:
    parent = {i: j for i, j in edges}
    if set(parent) != set(range(n)) - {root}:
        return False
    for start in range(n):
        seen = set()
        i = start
        while i != root:
            if i in seen:
                return False
            seen.add(i)
            i = parent[i]
    return True


def spanning_arborescences(g: Graph, root: int):
    """All spanning arborescences of g rooted at `root` (n <= 8)."""
    if g.n > _ENUM_LIMIT:
        raise TPageRankError(f"enumeration limited to n <= {_ENUM_LIMIT}")
    choices = []
    for i in range(g.n):
        if i == root:
            continue
        tgt, wts = g.row(i)
        outs = [(i, int(j)) for j, wt in zip(tgt, wts) if wt > 0]
        if not outs:
            return []
        choices.append(outs)
    found = []
    for combo in itertools.product(*choices):
        if _is_arborescence(g.n, root, combo):
            found.append(Arborescence(root, tuple(combo)))
    return found


def _check_irreducible(A):
    ncomp, _ = sp.csgraph.connected_components(
        sp.csr_matrix(A != 0), directed=True, connection="strong")
    if ncomp != 1:
        raise TPageRankError("matrix is reducible; invariant measure not unique")


def mtt_invariant(A, backend="auto"):
    """Invariant measure of an irreducible row-stochastic matrix, exactly.

    backend 'enumeration' sums arborescence weights (n <= 8); 'minors' takes
    principal minors of the Laplacian I - A (n <= 500); 'auto' runs both
    where possible and cross-checks them to 1e-10.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    _check_irreducible(A)
    if n == 1:
        return np.ones(1)
    results = {}
    if backend in ("auto", "enumeration") and n <= _ENUM_LIMIT:
        gA = Graph.from_dense(A)
        v = np.array([
            sum(math.prod(A[i, j] for i, j in arb.edges)
                for arb in spanning_arborescences(gA, r))
            for r in range(n)
        ])
        results["enumeration"] = v / v.sum()
    if backend in ("auto", "minors"):
        if n > _MINOR_LIMIT:
            raise TPageRankError(f"minors backend limited to n <= {_MINOR_LIMIT}")
        L = np.eye(n) - A
        v = np.empty(n)
        for r in range(n):
            keep = [i for i in range(n) if i != r]
            v[r] = np.linalg.det(L[np.ix_(keep, keep)])
        v = np.maximum(v, 0.0)
        results["minors"] = v / v.sum()
    if backend == "enumeration" and "enumeration" not in results:
        raise TPageRankError(f"enumeration backend limited to n <= {_ENUM_LIMIT}")
    if len(results) == 2:
        gap = np.abs(results["enumeration"] - results["minors"]).max()
        if gap > 1e-10:
            raise TPageRankError(f"MTT backends disagree by {gap:.3g}")
    return results.get("enumeration", results.get("minors"))


def h_vector(g: Graph, w: WeightFunction, T, x):
    """Unnormalized invariant vector of M_T(x):

    h_r = (sum_k C_rk g(x_k)) * (sum over arborescences rooted at r of
    prod C_ij g(x_j)).  h / sum(h) is the invariant measure.
    """
    if g.n > _ENUM_LIMIT:
        raise TPageRankError(f"enumeration limited to n <= {_ENUM_LIMIT}")
    x = np.asarray(x, dtype=float)
    gv = w.g(T, x)
    C = g.to_dense()
    h = np.empty(g.n)
    for r in range(g.n):
        tree_sum = sum(
            math.prod(C[i, j] * gv[j] for i, j in arb.edges)
            for arb in spanning_arborescences(g, r))
        h[r] = (C[r] @ gv) * tree_sum
    return h


@dataclass
class FixedPointSet:
    points: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    distinct_threshold: float = 1e-4
    dropped: int = 0

    def add(self, x, residual):
        for k, p in enumerate(self.points):
            if np.abs(p - x).sum() < self.distinct_threshold:
                if residual < self.residuals[k]:
                    self.points[k], self.residuals[k] = x, residual
                return
        self.points.append(x)
        self.residuals.append(residual)

    def __len__(self):
        return len(self.points)


def _f_residual(g, w, cfg, x):
    y = apply_kernel(g, w, cfg, x, x)
    return float(np.abs(y / y.sum() - x).sum())


def multistart_fixed_points(g, w, cfg, starts, tol=None,
                            distinct_threshold=1e-4) -> FixedPointSet:
    """Run iterate_u from every start (iterate_f as fallback), deduplicating
    the limits.  Non-converged starts are dropped and counted, not fatal."""
    if tol is None:
        tol = default_tol(g.n)
    out = FixedPointSet(distinct_threshold=distinct_threshold)
    for x0 in starts:
        try:
            x, rep = iterate_u(g, w, cfg, x0, outer_tol=tol)
        except ConvergenceError:
            try:
                x, rep = iterate_f(g, w, cfg, x0, tol=tol)
            except ConvergenceError:
                out.dropped += 1
                continue
        if not rep.converged:
            out.dropped += 1
            continue
        out.add(x, _f_residual(g, w, cfg, x))
    return out


_SCAN_CELLS = 10_000
_BISECT_TOL = 1e-12


def _u1_2x2(C, T, t):
    """First entry of the invariant measure of M_T((t, 1-t)) for 2x2 C,
    identity energy; vectorized in t."""
    gy, gz = np.exp(t / T), np.exp((1.0 - t) / T)
    m21 = C[1, 0] * gy / (C[1, 0] * gy + C[1, 1] * gz)
    m12 = C[0, 1] * gz / (C[0, 0] * gy + C[0, 1] * gz)
    return m21 / (m12 + m21)


def fixed_points_2x2(C, T) -> FixedPointSet:
    """All fixed points of the plain kernel on a 2x2 irreducible matrix with
    the identity energy, by dense sign-change scan plus bisection."""
    C = np.asarray(C, dtype=float)
    if C[0, 1] <= 0 or C[1, 0] <= 0:
        raise TPageRankError("2x2 matrix must be irreducible (off-diagonals > 0)")
    # phi extends continuously to the closed interval (both kernel entries
    # stay positive for irreducible C), with phi(0) > 0 and phi(1) < 0
    ts = np.linspace(0.0, 1.0, _SCAN_CELLS + 1)
    phi = _u1_2x2(C, T, ts) - ts
    out = FixedPointSet(distinct_threshold=1e-6)
    sign = np.sign(phi)
    for k in np.flatnonzero(sign[:-1] * sign[1:] < 0):
        a, b = ts[k], ts[k + 1]
        fa = phi[k]
        while b - a > _BISECT_TOL:
            m = 0.5 * (a + b)
            fm = float(_u1_2x2(C, T, np.array([m]))[0]) - m
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        t = 0.5 * (a + b)
        out.add(np.array([t, 1.0 - t]), abs(float(_u1_2x2(C, T, np.array([t]))[0]) - t))
    for k in np.flatnonzero(sign == 0):
        t = ts[k]
        out.add(np.array([t, 1.0 - t]), 0.0)
    return out
