"""Matrix-free application of the rank-dependent transition operator and the
two fixed-point iterations.

The transition matrix M(x) is never materialized: per-row normalizers
sum_k C_ik g(x_k) are recomputed whenever x changes, and the inner power
iteration runs on frozen row-scaled CSR data through the selected backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import (ConvergenceError, InvalidConfigError, OscillationError,
                     ZeroRowError)
from .graph import Graph
from .weights import WeightFunction

MAX_INNER = 100_000
MAX_OUTER = 10_000

INF = math.inf


def default_tol(n):
    """1e-12 up to a thousand nodes, 1e-9 beyond."""
    return 1e-12 if n <= 1000 else 1e-9


def uniform(n):
    return np.full(n, 1.0 / n)


def vertex(n, i, mass=1.0):
    """Distribution with `mass` on node i, remainder spread uniformly."""
    x = np.full(n, (1.0 - mass) / (n - 1) if n > 1 else 0.0)
    x[i] = mass if n > 1 else 1.0
    return x


def check_stochastic(x, tol=1e-9):
    x = np.asarray(x, dtype=float)
    if np.any(x < -1e-15):
        raise InvalidConfigError("rank vector has a negative entry")
    if abs(x.sum() - 1.0) > tol:
        raise InvalidConfigError(f"rank vector sums to {x.sum()!r}, not 1")
    return x / x.sum()


@dataclass(frozen=True)
class KernelConfig:
    """Temperatures, damping and personalization of the transition operator.

    gamma = 1 selects the plain (undamped) kernel; t2 is then unused.
    """

    t1: float = 1.0
    t2: float = INF
    gamma: float = 1.0
    d: np.ndarray = None

    def __post_init__(self):
        if not (0.0 <= self.gamma <= 1.0):
            raise InvalidConfigError(f"gamma must be in [0, 1], got {self.gamma}")
        for name, t in (("t1", self.t1), ("t2", self.t2)):
            if not (t > 0):
                raise InvalidConfigError(f"{name} must be positive or inf, got {t}")
        if self.d is not None:
            d = np.asarray(self.d, dtype=float)
            if np.any(d <= 0):
                raise InvalidConfigError("personalization vector must be positive")
            object.__setattr__(self, "d", d)

    def personalization(self, n):
        if self.d is None:
            return np.ones(n)
        if len(self.d) != n:
            raise InvalidConfigError(
                f"personalization vector has length {len(self.d)}, graph has {n}")
        return self.d


@dataclass
class IterationReport:
    outer_iterations: int = 0
    inner_iterations_total: int = 0
    residual_trace: list = field(default_factory=list)
    converged: bool = False
    scheme: str = "U"
    oscillating: bool = False


class _FrozenKernel:
    """M(x) for a frozen x: row-scaled CSR transition data plus the teleport
    distribution of the damped term."""

    def __init__(self, g: Graph, w: WeightFunction, cfg: KernelConfig, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        if np.any(g.row_sums == 0):
            raise ZeroRowError(
                "graph has an empty row; apply normalize_dangling first")
        self.g = g
        self.cfg = cfg
        gv = w.g(cfg.t1, x)
        num = g.data * gv[g.indices]
        rows = np.repeat(np.arange(g.n), np.diff(g.indptr))
        denom = np.zeros(g.n)
        np.add.at(denom, rows, num)
        self.p = num / denom[rows]
        if cfg.gamma < 1.0:
            d = cfg.personalization(g.n)
            dv = d * w.g(cfg.t2, x)
            self.teleport = dv / dv.sum()
        else:
            self.teleport = None

    def apply(self, v):
        """v @ M(x) for stochastic v."""
        y = _backend.left_matvec(self.g.n, self.g.indptr, self.g.indices,
                                 self.p, np.asarray(v, dtype=float))
        if self.cfg.gamma < 1.0:
            y = self.cfg.gamma * y + (1.0 - self.cfg.gamma) * self.teleport
        return y

    def power_iterate(self, v0, tol, max_iter, lazy):
        teleport = self.teleport if self.teleport is not None else v0
        return _backend.power_iterate(
            self.g.n, self.g.indptr, self.g.indices, self.p, self.cfg.gamma,
            teleport, np.asarray(v0, dtype=float), tol, max_iter, lazy)


def apply_kernel(g, w, cfg, x, v):
    """One application v @ M(x), computed row by row without forming M."""
    return _FrozenKernel(g, w, cfg, x).apply(v)


def dense_transition(g, w, cfg, x):
    """M(x) as a dense array; for oracles and desk-scale checks only."""
    frozen = _FrozenKernel(g, w, cfg, x)
    return np.vstack([frozen.apply(row) for row in np.eye(g.n)])


def invariant_measure(g, w, cfg, x, tol=None, max_inner=MAX_INNER):
    """The stationary vector u of M(x): ||u M(x) - u||_1 <= tol.

    Undamped kernels are iterated through the lazy operator (I + M)/2, which
    keeps the invariant measure while forcing aperiodicity; damped kernels
    are already primitive and iterate M directly.
    """
    if tol is None:
        tol = default_tol(g.n)
    frozen = _FrozenKernel(g, w, cfg, x)
    lazy = cfg.gamma >= 1.0
    u, iters, ok = frozen.power_iterate(x, tol, max_inner, lazy)
    if not ok:
        raise ConvergenceError(
            f"inner power iteration did not reach tol={tol} in {max_inner} steps")
    return u, iters


def iterate_u(g, w, cfg, x0, outer_tol=None, inner_tol=None,
              max_outer=MAX_OUTER, max_inner=MAX_INNER):
    """Fixed-point iteration x <- invariant_measure(M(x))."""
    if outer_tol is None:
        outer_tol = default_tol(g.n)
    if inner_tol is None:
        inner_tol = outer_tol / 10.0
    x = check_stochastic(x0)
    report = IterationReport(scheme="U")
    for _ in range(max_outer):
        x_new, inner = invariant_measure(g, w, cfg, x, inner_tol, max_inner)
        report.outer_iterations += 1
        report.inner_iterations_total += inner
        res = float(np.abs(x_new - x).sum())
        report.residual_trace.append(res)
        x = x_new
        if res <= outer_tol:
            report.converged = True
            break
    return x, report


_OSC_WINDOW = 50


def iterate_f(g, w, cfg, x0, tol=None, max_iter=MAX_INNER):
    """Generalized power iteration x <- x M(x), renormalized every step.

    A sustained period-2 residual pattern raises OscillationError (with the
    partial report attached) instead of burning the whole budget.
    """
    if tol is None:
        tol = default_tol(g.n)
    x = check_stochastic(x0)
    report = IterationReport(scheme="F")
    x_prev = None
    osc_run = 0
    for _ in range(max_iter):
        y = apply_kernel(g, w, cfg, x, x)
        y /= y.sum()
        report.outer_iterations += 1
        res = float(np.abs(y - x).sum())
        report.residual_trace.append(res)
        if res <= tol:
            report.converged = True
            return y, report
        if x_prev is not None and np.abs(y - x_prev).sum() < tol and res > 100 * tol:
            osc_run += 1
            if osc_run >= _OSC_WINDOW:
                report.oscillating = True
                err = OscillationError(
                    f"period-2 oscillation with swing {res:.3g} after "
                    f"{report.outer_iterations} steps")
                err.report = report
                err.iterate = x
                raise err
        else:
            osc_run = 0
        x_prev = x
        x = y
    err = ConvergenceError(f"iterate_f did not reach tol={tol} in {max_iter} steps")
    err.report = report
    err.iterate = x
    raise err


def classical_pagerank(g, gamma=0.85, d=None, tol=None):
    """Classical (damped, T = inf) PageRank via the linear power method."""
    if not (0.0 <= gamma < 1.0):
        raise InvalidConfigError(f"damping must be in [0, 1), got {gamma}")
    cfg = KernelConfig(t1=INF, t2=INF, gamma=gamma, d=d)
    x, _ = iterate_f(g, WeightFunction.identity(), cfg, uniform(g.n), tol=tol)
    return x
