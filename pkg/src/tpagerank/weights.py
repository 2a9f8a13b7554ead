"""Temperature-indexed weight families g_T and the uniqueness certificates
driven by their Lipschitz-ratio bounds L- and L+.

The default family is g_T(x) = exp(E(x)/T) with the identity energy
E(x) = x, for which L- = L+ = 1/T exactly.  T = inf means g == 1
(the classical, rank-insensitive random surfer).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidConfigError, NonPositiveDerivativeError, TPageRankError

_GRID = np.linspace(0.0, 1.0, 1025)
_MIN_DERIVATIVE = 1e-12
_GOLDEN_TOL = 1e-10


@dataclass(frozen=True)
class LipBounds:
    """min and max of g'_T/g_T over [0, 1]."""
    l_minus: float
    l_plus: float


class WeightFunction:
    """The family g_T.

    ``ExpEnergy`` form: g_T(x) = exp(E(x)/T) with E increasing, E(0) = 0.
    ``Custom`` form: paired evaluators (g, g') of a single temperature-indexed
    family; bounds are then found numerically.
    """

    def __init__(self, energy=None, energy_prime=None, *, custom=None,
                 label="identity"):
        self.label = label
        if custom is not None:
            self._g, self._gprime = custom
            self.energy = None
            self.energy_prime = None
            return
        if energy is None:
            energy, energy_prime = (lambda x: x), (lambda x: np.ones_like(np.asarray(x, dtype=float)))
        self.energy = energy
        self.energy_prime = energy_prime
        self._g = None
        self._gprime = None
        ep = np.asarray(energy_prime(_GRID), dtype=float)
        if not np.all(np.isfinite(ep)):
            raise NonPositiveDerivativeError("energy derivative not finite on [0,1]")
        if ep.min() < _MIN_DERIVATIVE:
            raise NonPositiveDerivativeError(
                f"energy derivative must stay positive on [0,1]; min {ep.min():.3g}")
        e0 = float(np.asarray(energy(0.0)))
        if abs(e0) > 1e-12:
            raise InvalidConfigError(f"energy must vanish at 0, got E(0)={e0:.3g}")

    @classmethod
    def identity(cls) -> "WeightFunction":
        return cls()

    @classmethod
    def from_table(cls, path) -> "WeightFunction":
        """CSV rows (x, E(x), E'(x)), x monotone increasing; linear interpolation."""
        xs, es, eps = [], [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                x, e, ep = (float(v) for v in row[:3])
                xs.append(x)
                es.append(e)
                eps.append(ep)
        xs, es, eps = np.array(xs), np.array(es), np.array(eps)
        if len(xs) < 2 or np.any(np.diff(xs) <= 0):
            raise InvalidConfigError("energy table must be monotone in x")
        return cls(energy=lambda t: np.interp(t, xs, es),
                   energy_prime=lambda t: np.interp(t, xs, eps),
                   label=f"table:{path}")

    def g(self, T, x):
        """Evaluate g_T at x (scalar or array); T = inf gives 1."""
        x = np.asarray(x, dtype=float)
        if np.any(x < -1e-15) or np.any(x > 1 + 1e-15):
            raise TPageRankError("g_T argument outside [0, 1]")
        if math.isinf(T):
            return np.ones_like(x)
        if T <= 0:
            raise InvalidConfigError(f"temperature must be positive, got {T}")
        if self._g is not None:
            return np.asarray(self._g(T, x), dtype=float)
        return np.exp(np.asarray(self.energy(x), dtype=float) / T)

    def g_prime(self, T, x):
        x = np.asarray(x, dtype=float)
        if math.isinf(T):
            return np.zeros_like(x)
        if self._gprime is not None:
            return np.asarray(self._gprime(T, x), dtype=float)
        return self.g(T, x) * np.asarray(self.energy_prime(x), dtype=float) / T

    def lip_bounds(self, T) -> LipBounds:
        """L-(g_T) and L+(g_T); for T = inf both collapse to 0."""
        if math.isinf(T):
            return LipBounds(0.0, 0.0)
        if T <= 0:
            raise InvalidConfigError(f"temperature must be positive, got {T}")
        if self._g is None:
            ratio = np.asarray(self.energy_prime(_GRID), dtype=float) / T
            objective = lambda x: float(self.energy_prime(x)) / T
        else:
            ratio = self.g_prime(T, _GRID) / self.g(T, _GRID)
            objective = lambda x: float(self._gprime(T, x) / self._g(T, x))
        if not np.all(np.isfinite(ratio)):
            raise TPageRankError("non-finite g'/g on the evaluation grid")
        lo = _refine_extremum(objective, _GRID, int(np.argmin(ratio)), minimize=True)
        hi = _refine_extremum(objective, _GRID, int(np.argmax(ratio)), minimize=False)
        return LipBounds(lo, hi)


def _refine_extremum(f, grid, idx, minimize):
    """Golden-section refinement around a discrete arg-extremum of f."""
    a = grid[max(idx - 1, 0)]
    b = grid[min(idx + 1, len(grid) - 1)]
    if a == b:
        return f(a)
    sign = 1.0 if minimize else -1.0
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = sign * f(c), sign * f(d)
    while b - a > _GOLDEN_TOL:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = sign * f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = sign * f(d)
    best = sign * min(fc, fd)
    # endpoints of the original grid can themselves be the extremum
    return min(best, f(grid[idx])) if minimize else max(best, f(grid[idx]))


class Verdict(Enum):
    UNIQUE_BY_HOMOGENEITY = "UniqueByHomogeneity"
    UNIQUE_BY_BIRKHOFF = "UniqueByBirkhoff"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class UniquenessCertificate:
    verdict: Verdict
    detail: str
    lhs: float = math.nan
    rhs: float = math.nan


def certify_uniqueness(g, w: WeightFunction, cfg, tau_b=None) -> UniquenessCertificate:
    """Check the two sufficient uniqueness conditions, in order.

    (a) homogeneity route: plain kernel n*L+(g_T) <= 1; damped kernel
        n*L+(g_T1) + (n-1)*L+(g_T2) <= 1.
    (b) Birkhoff route (needs positive C and tau_b): plain 2*L+ < 1 - tau_B;
        damped 2*(L+(g_T1) + L+(g_T2)) < 1 - tau_B.
    Returns the first satisfied certificate, else Unknown.
    """
    n = g.n
    lp1 = w.lip_bounds(cfg.t1).l_plus
    if cfg.gamma >= 1.0:
        lhs = n * lp1
        if lhs <= 1.0:
            return UniquenessCertificate(
                Verdict.UNIQUE_BY_HOMOGENEITY,
                f"n*L+ = {lhs:.6g} <= 1", lhs, 1.0)
        birkhoff_lhs = 2.0 * lp1
    else:
        lp2 = w.lip_bounds(cfg.t2).l_plus
        lhs = n * lp1 + (n - 1) * lp2
        if lhs <= 1.0:
            return UniquenessCertificate(
                Verdict.UNIQUE_BY_HOMOGENEITY,
                f"n*L+(T1) + (n-1)*L+(T2) = {lhs:.6g} <= 1", lhs, 1.0)
        birkhoff_lhs = 2.0 * (lp1 + lp2)
    if tau_b is not None:
        positive = g.nnz == n * n and np.all(g.data > 0)
        rhs = 1.0 - tau_b
        if positive and birkhoff_lhs < rhs:
            return UniquenessCertificate(
                Verdict.UNIQUE_BY_BIRKHOFF,
                f"2*L+ = {birkhoff_lhs:.6g} < 1 - tau_B = {rhs:.6g}",
                birkhoff_lhs, rhs)
    return UniquenessCertificate(Verdict.UNKNOWN,
                                 f"homogeneity lhs {lhs:.6g} > 1; Birkhoff "
                                 f"{'unavailable' if tau_b is None else 'failed'}")
