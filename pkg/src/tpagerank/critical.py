"""Critical-temperature machinery.

Analytic results for the complete graph (the temperature below which the
uniform ranking stops being the only fixed point, and the explicit two-value
fixed points), plus the warm-started homotopy estimator and temperature
sweeps that work on arbitrary graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConvergenceError, InvalidConfigError
from .kernel import KernelConfig, default_tol, iterate_f, iterate_u
from .weights import WeightFunction


def _objective(alpha, n):
    return (1.0 - 1.0 / alpha) / math.log((alpha - 1.0) * n + 1.0)


def tstar_complete(n) -> float:
    """Critical temperature of the complete graph on n nodes (identity
    energy): sup over alpha > 1 of (1 - 1/alpha) / ln((alpha - 1) n + 1).

    Exactly 1/2 for n = 2; behaves like 1/ln(n) for large n.
    """
    if n < 2:
        raise InvalidConfigError("complete-graph theory needs n >= 2")
    if n == 2:
        return 0.5
    # bracket the interior maximum by geometric growth of the upper end
    lo, hi = 1.0 + 1e-9, 2.0
    while _objective(hi * 2, n) >= _objective(hi, n):
        hi *= 2.0
    res = minimize_scalar(lambda a: -_objective(a, n), bounds=(lo, hi * 2),
                          method="bounded", options={"xatol": 1e-12})
    return float(-res.fun)


def t_alpha_k(n, alpha, k) -> float:
    """Temperature at which the complete graph admits a two-value fixed point
    with k low coordinates at level 1/(alpha n)."""
    if n < 2 or not (1 <= k <= n - 1) or alpha <= 1:
        raise InvalidConfigError(f"bad arguments n={n}, alpha={alpha}, k={k}")
    return (1.0 - 1.0 / alpha) / ((n - k) * math.log((alpha - 1.0) * n / (n - k) + 1.0))


@dataclass(frozen=True)
class CompleteGraphSolution:
    """Two-value fixed point on the complete graph: k coordinates at y, the
    remaining n - k at z >= y."""
    k: int
    y: float
    z: float
    residual: float

    def vector(self, n) -> np.ndarray:
        x = np.full(n, self.z)
        x[:self.k] = self.y
        return x


def _balance(y, k, n, T):
    """log(y e^{-y/T}) - log(z e^{-z/T}) with z fixed by k y + (n-k) z = 1."""
    z = (1.0 - k * y) / (n - k)
    return math.log(y) - y / T - math.log(z) + z / T


def complete_fixed_points(n, T, w: WeightFunction = None):
    """All fixed points of the plain kernel on the complete graph, up to
    permutation of coordinates (identity energy only).

    For each count k of low coordinates, roots of the balance equation are
    located by sign-change scan and bisection on y in (0, min(T, 1/n)).
    Always includes the uniform point (k = 0).
    """
    if w is not None and w.label != "identity":
        raise InvalidConfigError("complete-graph theory requires the identity energy")
    if n < 2:
        raise InvalidConfigError("need n >= 2")
    un = 1.0 / n
    sols = [CompleteGraphSolution(0, un, un, 0.0)]
    y_hi = min(T, un) - 1e-15
    if y_hi <= 1e-15:
        return sols
    for k in range(1, n):
        # at very low T the small level sits near z e^{-z/T}, which can be
        # astronomically small, so the geometric grid must reach deep
        grid = np.concatenate([
            np.geomspace(1e-280, y_hi, 1600),
            np.linspace(1e-14, y_hi, 800),
        ])
        grid = np.unique(grid)
        vals = np.array([_balance(y, k, n, T) for y in grid])
        for idx in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
            a, b = grid[idx], grid[idx + 1]
            fa = vals[idx]
            for _ in range(200):
                m = 0.5 * (a + b)
                fm = _balance(m, k, n, T)
                if fa * fm <= 0:
                    b = m
                else:
                    a, fa = m, fm
                if b - a < 1e-16:
                    break
            y = 0.5 * (a + b)
            z = (1.0 - k * y) / (n - k)
            if abs(y - un) < 1e-9 or y >= z:
                continue  # the uniform point, already included
            residual = abs(y * math.exp(-y / T) - z * math.exp(-z / T))
            sols.append(CompleteGraphSolution(k, y, z, residual))
    return sols


@dataclass
class HomotopyEstimate:
    estimate: float
    per_restart: list
    flagged: bool  # True if some restart exhausted the schedule
    seed: int


def _settle(g, w, cfg, x0, tol, max_iter=100_000):
    """Fixed point from x0 by iterate_f, falling back to iterate_u, falling
    back to the best iterate seen."""
    try:
        x, _ = iterate_f(g, w, cfg, x0, tol=tol, max_iter=max_iter)
        return x
    except ConvergenceError as err_f:
        try:
            x, rep = iterate_u(g, w, cfg, x0, outer_tol=tol)
            if rep.converged:
                return x
        except ConvergenceError:
            pass
        return getattr(err_f, "iterate", x0)


def _at_temperature(cfg, T):
    t2 = T if not math.isinf(cfg.t2) else math.inf
    return replace(cfg, t1=T, t2=t2)


def homotopy_critical_estimate(g, w, cfg: KernelConfig, seed, t_lo, t_hi,
                               ratio=1.05, restarts=20,
                               coincidence_tol=1e-8, refine=True,
                               tol=None) -> HomotopyEstimate:
    """Lower-bound estimate of the critical temperature.

    Per restart: draw two random simplex points, settle both at the lowest
    temperature, then raise T geometrically, re-settling from the previous
    limits, until the two limits coincide in L1.  The coincidence temperature
    is refined by bisection between the last two grid temperatures, and the
    maximum over restarts is returned.
    """
    if restarts < 1:
        raise InvalidConfigError("need at least one restart")
    if not (0 < t_lo < t_hi) or ratio <= 1:
        raise InvalidConfigError("bad temperature schedule")
    if tol is None:
        tol = min(default_tol(g.n), coincidence_tol / 100)
    rng = np.random.default_rng(seed)
    recorded = []
    flagged = False
    for _ in range(restarts):
        a = rng.dirichlet(np.ones(g.n))
        b = rng.dirichlet(np.ones(g.n))
        t_prev = None
        t = t_lo
        coincide_t = None
        while t <= t_hi * (1 + 1e-12):
            a = _settle(g, w, _at_temperature(cfg, t), a, tol)
            b = _settle(g, w, _at_temperature(cfg, t), b, tol)
            if np.abs(a - b).sum() < coincidence_tol:
                coincide_t = t
                break
            t_prev, a_prev, b_prev = t, a, b
            t *= ratio
        if coincide_t is None:
            recorded.append(t_hi)
            flagged = True
            continue
        if refine and t_prev is not None:
            lo, hi = t_prev, coincide_t
            while hi / lo > 1.0005:
                mid = math.sqrt(lo * hi)
                am = _settle(g, w, _at_temperature(cfg, mid), a_prev, tol)
                bm = _settle(g, w, _at_temperature(cfg, mid), b_prev, tol)
                if np.abs(am - bm).sum() < coincidence_tol:
                    hi = mid
                else:
                    lo, a_prev, b_prev = mid, am, bm
            coincide_t = hi
        recorded.append(coincide_t)
    return HomotopyEstimate(max(recorded), recorded, flagged, seed)


@dataclass
class SweepTrajectory:
    temperatures: list = field(default_factory=list)
    ranks: list = field(default_factory=list)
    converged: list = field(default_factory=list)
    coincidence_temperature: float = None


def temperature_sweep(g, w, cfg: KernelConfig, schedule, x0,
                      tol=None, max_iter=100_000) -> SweepTrajectory:
    """Warm-started fixed-point chain across a monotone temperature schedule.

    Per-temperature non-convergence is recorded (converged=False) and the
    sweep continues from the best iterate.
    """
    schedule = list(schedule)
    diffs = np.diff(schedule)
    if len(schedule) == 0 or (len(schedule) > 1 and not
                              (np.all(diffs > 0) or np.all(diffs < 0))):
        raise InvalidConfigError("schedule must be strictly monotone")
    if tol is None:
        tol = default_tol(g.n)
    traj = SweepTrajectory()
    x = np.asarray(x0, dtype=float)
    for T in schedule:
        ok = True
        try:
            x, rep = iterate_f(g, w, _at_temperature(cfg, T), x,
                               tol=tol, max_iter=max_iter)
            ok = rep.converged
        except ConvergenceError as err:
            x = getattr(err, "iterate", x)
            ok = False
        traj.temperatures.append(T)
        traj.ranks.append(x.copy())
        traj.converged.append(ok)
    return traj
