import itertools
import math

import numpy as np
import pytest

from tpagerank import (Graph, KernelConfig, TPageRankError, WeightFunction,
                       complete_graph, fixed_points_2x2, h_vector,
                       invariant_measure, mtt_invariant,
                       multistart_fixed_points, random_irreducible_graph,
                       spanning_arborescences, uniform)

W = WeightFunction.identity()


class TestSpanningArborescences:
    def test_two_cycle(self, two_cycle):
        arbs = spanning_arborescences(two_cycle, 0)
        assert len(arbs) == 1
        assert arbs[0].edges == ((1, 0),)

    def test_complete_graph_cayley(self):
        # Cayley: n^{n-1} labeled rooted trees, but with self-loops removed
        # from the choice sets it is n^{n-2} * something -- check directly
        # against a brute-force count over all parent maps instead.
        g = Graph.from_dense(np.ones((4, 4)) - np.eye(4))
        count = 0
        nodes = [1, 2, 3]
        for parents in itertools.product(range(4), repeat=3):
            if any(p == c for p, c in zip(parents, nodes)):
                continue
            edges = tuple(zip(nodes, parents))
            ok = True
            for start in nodes:
                seen, i = set(), start
                while i != 0:
                    if i in seen:
                        ok = False
                        break
                    seen.add(i)
                    i = dict(edges)[i]
                if not ok:
                    break
            count += ok
        assert len(spanning_arborescences(g, 0)) == count == 16

    def test_unreachable_root_gives_none(self):
        g = Graph.from_dense([[1, 1], [0, 1]])
        assert spanning_arborescences(g, 0) == []
        assert len(spanning_arborescences(g, 1)) == 1

    def test_size_limit(self):
        with pytest.raises(TPageRankError):
            spanning_arborescences(complete_graph(9), 0)


class TestMttInvariant:
    def test_worked_2x2(self):
        v = mtt_invariant([[0.5, 0.5], [1.0, 0.0]])
        assert v == pytest.approx([2 / 3, 1 / 3], abs=1e-14)

    def test_uniform_cycle(self):
        A = np.roll(np.eye(5), 1, axis=1)
        assert mtt_invariant(A) == pytest.approx(np.full(5, 0.2), abs=1e-14)

    def test_backends_agree(self, rng):
        for _ in range(15):
            n = int(rng.integers(2, 8))
            g = random_irreducible_graph(n, rng)
            A = g.to_dense()
            A = A / A.sum(axis=1, keepdims=True)
            ve = mtt_invariant(A, backend="enumeration")
            vm = mtt_invariant(A, backend="minors")
            assert ve == pytest.approx(vm, abs=1e-12)

    def test_minors_scales_past_enumeration(self, rng):
        n = 40
        g = random_irreducible_graph(n, rng)
        A = g.to_dense()
        A = A / A.sum(axis=1, keepdims=True)
        v = mtt_invariant(A, backend="minors")
        assert v.sum() == pytest.approx(1.0) and np.all(v > 0)
        assert v @ A == pytest.approx(v, abs=1e-12)

    def test_reducible_rejected(self):
        with pytest.raises(TPageRankError):
            mtt_invariant([[1.0, 0.0], [0.5, 0.5]])

    def test_enumeration_limit(self, rng):
        A = np.full((9, 9), 1 / 9)
        with pytest.raises(TPageRankError):
            mtt_invariant(A, backend="enumeration")


class TestHVector:
    def test_matches_power_iteration(self, intro_graph, rng):
        x = rng.dirichlet(np.ones(3))
        for T in (0.25, 1.0, math.inf):
            h = h_vector(intro_graph, W, T, x)
            u, _ = invariant_measure(intro_graph, W, KernelConfig(t1=T), x,
                                     tol=1e-13)
            assert h / h.sum() == pytest.approx(u, abs=1e-10)

    def test_positive_on_irreducible(self, rng):
        g = random_irreducible_graph(5, rng)
        h = h_vector(g, W, 0.5, rng.dirichlet(np.ones(5)))
        assert np.all(h > 0)

    def test_flat_at_infinite_temperature(self, two_cycle):
        h = h_vector(two_cycle, W, math.inf, np.array([0.9, 0.1]))
        assert h[0] == pytest.approx(h[1])


class TestMultistart:
    def test_high_temperature_complete_unique(self, rng):
        g = complete_graph(4)
        starts = [rng.dirichlet(np.ones(4)) for _ in range(12)]
        fps = multistart_fixed_points(g, W, KernelConfig(t1=2.0), starts)
        assert len(fps) == 1 and fps.dropped == 0
        assert fps.points[0] == pytest.approx(uniform(4), abs=1e-6)

    def test_low_temperature_complete_vertices(self, rng):
        g = complete_graph(5)
        starts = [rng.dirichlet(np.ones(5)) for _ in range(40)]
        fps = multistart_fixed_points(g, W, KernelConfig(t1=0.01), starts)
        assert len(fps) == 5
        for p in fps.points:
            assert p.max() > 0.999

    def test_residuals_small(self, rng):
        g = random_irreducible_graph(4, rng)
        starts = [rng.dirichlet(np.ones(4)) for _ in range(6)]
        fps = multistart_fixed_points(g, W, KernelConfig(t1=0.4), starts)
        assert all(r < 1e-8 for r in fps.residuals)


class TestFixedPoints2x2:
    def test_high_temperature_symmetric(self):
        fps = fixed_points_2x2([[1, 1], [1, 1]], 2.0)
        assert len(fps) == 1
        assert fps.points[0] == pytest.approx([0.5, 0.5], abs=1e-10)

    def test_low_temperature_symmetric_three(self):
        fps = fixed_points_2x2([[1, 1], [1, 1]], 0.2)
        assert len(fps) == 3

    def test_near_boundary_root_found(self):
        fps = fixed_points_2x2([[1, 2], [1, 0]], 0.1)
        assert len(fps) == 1
        assert fps.points[0][0] > 0.999

    def test_above_critical_always_unique(self, rng):
        for _ in range(100):
            C = np.exp(rng.normal(size=(2, 2)))
            assert len(fixed_points_2x2(C, float(rng.uniform(1.0, 5.0)))) == 1

    def test_count_is_odd(self, rng):
        counts = set()
        for _ in range(200):
            C = np.exp(rng.normal(size=(2, 2)))
            counts.add(len(fixed_points_2x2(C, float(rng.uniform(0.05, 2.0)))))
        assert counts <= {1, 3, 5}

    def test_reducible_rejected(self):
        with pytest.raises(TPageRankError):
            fixed_points_2x2([[1, 0], [1, 1]], 0.5)
