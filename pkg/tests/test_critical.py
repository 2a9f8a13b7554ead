import math

import numpy as np
import pytest

from tpagerank import (InvalidConfigError, KernelConfig, WeightFunction,
                       apply_kernel, complete_fixed_points, complete_graph,
                       homotopy_critical_estimate, iterate_f, t_alpha_k,
                       temperature_sweep, tstar_complete, uniform)

W = WeightFunction.identity()


class TestTstarComplete:
    def test_n2_exact(self):
        assert tstar_complete(2) == 0.5

    def test_n10(self):
        assert tstar_complete(10) == pytest.approx(0.2193089, abs=1e-6)

    def test_large_n(self):
        assert tstar_complete(281903) == pytest.approx(0.06148, abs=5e-4)

    def test_decreasing_in_n(self):
        vals = [tstar_complete(n) for n in (2, 3, 5, 10, 100, 10_000)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_log_scaling(self):
        # T*(n) * ln(n) stays in a narrow band for large n
        for n in (100, 10_000, 1_000_000):
            assert 0.6 < tstar_complete(n) * math.log(n) < 1.1

    def test_rejects_small_n(self):
        with pytest.raises(InvalidConfigError):
            tstar_complete(1)


class TestTAlphaK:
    def test_sup_over_alpha_is_tstar(self):
        n = 10
        alphas = np.linspace(1 + 1e-6, 400, 40_000)
        sup = max(t_alpha_k(n, a, n - 1) for a in alphas)
        assert sup == pytest.approx(tstar_complete(n), abs=1e-5)
        assert sup <= tstar_complete(n) + 1e-12

    def test_increasing_in_k(self):
        for a in (1.5, 3.0, 10.0):
            vals = [t_alpha_k(8, a, k) for k in range(1, 8)]
            assert all(x < y for x, y in zip(vals, vals[1:]))

    def test_rejects_bad_arguments(self):
        for bad in [(8, 1.0, 1), (8, 2.0, 0), (8, 2.0, 8), (1, 2.0, 1)]:
            with pytest.raises(InvalidConfigError):
                t_alpha_k(*bad)


class TestCompleteFixedPoints:
    def test_above_critical_only_uniform(self):
        for n in (2, 5, 10):
            sols = complete_fixed_points(n, tstar_complete(n) * 1.05)
            assert len(sols) == 1 and sols[0].k == 0

    def test_below_critical_nonuniform_appear(self):
        sols = complete_fixed_points(10, tstar_complete(10) * 0.95)
        assert any(s.k > 0 for s in sols)

    def test_n2_pair_at_T04(self):
        # one nonuniform pair (up to permutation) below T* = 1/2
        sols = complete_fixed_points(2, 0.4)
        nonuniform = [s for s in sols if s.k == 1]
        assert len(nonuniform) == 1
        s = nonuniform[0]
        assert s.y < 0.5 < s.z
        assert s.y + s.z == pytest.approx(1.0, abs=1e-12)
        assert s.residual < 1e-12

    def test_vectors_are_kernel_fixed_points(self):
        n = 6
        for s in complete_fixed_points(n, 0.12):
            x = s.vector(n)
            y = apply_kernel(complete_graph(n), W, KernelConfig(t1=0.12), x, x)
            assert np.abs(y / y.sum() - x).max() < 1e-10

    def test_deep_cold_has_all_k(self):
        sols = complete_fixed_points(5, 0.02)
        assert {s.k for s in sols} == {0, 1, 2, 3, 4}

    def test_identity_energy_required(self):
        w = WeightFunction(energy=lambda x: 2 * np.asarray(x),
                           energy_prime=lambda x: np.full_like(np.asarray(x, float), 2.0),
                           label="doubled")
        with pytest.raises(InvalidConfigError):
            complete_fixed_points(4, 0.3, w)


class TestHomotopyEstimate:
    def test_complete_graph_brackets_tstar(self):
        n = 10
        tstar = tstar_complete(n)
        est = homotopy_critical_estimate(
            complete_graph(n), W, KernelConfig(t1=1.0), seed=7,
            t_lo=0.05, t_hi=1.0, restarts=8)
        assert not est.flagged
        assert tstar - 0.05 <= est.estimate <= tstar + 1e-3

    def test_deterministic_in_seed(self):
        g = complete_graph(5)
        kw = dict(t_lo=0.05, t_hi=1.0, restarts=3)
        e1 = homotopy_critical_estimate(g, W, KernelConfig(t1=1.0), 11, **kw)
        e2 = homotopy_critical_estimate(g, W, KernelConfig(t1=1.0), 11, **kw)
        assert e1.estimate == e2.estimate and e1.per_restart == e2.per_restart

    def test_rejects_bad_schedule(self):
        g = complete_graph(3)
        with pytest.raises(InvalidConfigError):
            homotopy_critical_estimate(g, W, KernelConfig(t1=1.0), 0,
                                       t_lo=1.0, t_hi=0.5)
        with pytest.raises(InvalidConfigError):
            homotopy_critical_estimate(g, W, KernelConfig(t1=1.0), 0,
                                       t_lo=0.1, t_hi=1.0, restarts=0)


class TestTemperatureSweep:
    def test_single_temperature_matches_iterate_f(self, intro_graph):
        x0 = np.array([1 / 3, 1 / 3 + 1e-3, 1 / 3 - 1e-3])
        traj = temperature_sweep(intro_graph, W, KernelConfig(t1=1.0),
                                 [0.25], x0)
        direct, _ = iterate_f(intro_graph, W, KernelConfig(t1=0.25), x0)
        assert traj.ranks[0] == pytest.approx(direct, abs=1e-12)
        assert traj.converged == [True]

    def test_cooling_branch_departs_from_uniform(self, intro_graph):
        schedule = np.geomspace(2.0, 0.05, 25)
        x0 = np.array([1 / 3, 1 / 3 + 1e-3, 1 / 3 - 1e-3])
        traj = temperature_sweep(intro_graph, W, KernelConfig(t1=1.0),
                                 schedule, x0)
        spreads = [r.max() - r.min() for r in traj.ranks]
        assert spreads[0] < 1e-2 and spreads[-1] > 0.5
        assert traj.ranks[-1][1] == max(traj.ranks[-1])

    def test_warm_start_tracks_same_branch(self):
        # cool the 2-node complete graph while sitting on the upper branch
        g = complete_graph(2)
        traj = temperature_sweep(g, W, KernelConfig(t1=1.0),
                                 np.geomspace(0.45, 0.1, 15),
                                 np.array([0.7, 0.3]))
        firsts = [r[0] for r in traj.ranks]
        assert all(x >= y - 1e-12 for x, y in zip(firsts[1:], firsts))
        assert firsts[-1] > 0.99

    def test_rejects_non_monotone_schedule(self, intro_graph):
        with pytest.raises(InvalidConfigError):
            temperature_sweep(intro_graph, W, KernelConfig(t1=1.0),
                              [0.1, 0.3, 0.2], uniform(3))

    def test_periodic_graph_flagged_not_fatal(self, two_cycle):
        traj = temperature_sweep(two_cycle, W, KernelConfig(t1=1.0),
                                 [1.0], np.array([0.3, 0.7]), max_iter=2000)
        assert traj.converged == [False]
