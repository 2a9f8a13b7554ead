import math

import numpy as np
import pytest

from tpagerank import (BoundaryPointError, Graph, KernelConfig,
                       NonPositiveError, WeightFunction, apply_kernel,
                       birkhoff_coefficient, birkhoff_sampled,
                       hilbert_distance, kernel_distance_bound)
from tpagerank.kernel import dense_transition


class TestHilbertDistance:
    def test_identity(self, rng):
        x = rng.random(6) + 0.1
        assert hilbert_distance(x, x) == 0.0

    def test_ln3_example(self):
        assert hilbert_distance([0.5, 0.5], [0.25, 0.75]) == pytest.approx(
            math.log(3), rel=1e-14)

    def test_scale_invariance(self, rng):
        x, y = rng.random(5) + 0.1, rng.random(5) + 0.1
        assert hilbert_distance(2 * x, y) == hilbert_distance(x, y)

    def test_boundary_rejected(self):
        with pytest.raises(BoundaryPointError):
            hilbert_distance([1.0, 0.0], [0.5, 0.5])

    def test_triangle_inequality(self, rng):
        for _ in range(1000):
            x, y, z = (rng.random(4) + 1e-3 for _ in range(3))
            assert hilbert_distance(x, z) <= (
                hilbert_distance(x, y) + hilbert_distance(y, z) + 1e-12)


class TestBirkhoff:
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_all_ones_is_zero(self, n):
        assert birkhoff_coefficient(np.ones((n, n))) == 0.0

    def test_symmetric_2x2(self):
        assert birkhoff_coefficient([[2, 1], [1, 2]]) == pytest.approx(
            1 / 3, abs=1e-14)

    def test_sampled_sup_approaches_closed_form(self, rng):
        A = np.array([[2.0, 1.0], [1.0, 2.0]])
        sampled = birkhoff_sampled(A, 100_000, rng)
        assert sampled <= 1 / 3 + 1e-12
        assert sampled > 1 / 3 - 1e-3

    def test_zero_entry_rejected(self):
        with pytest.raises(NonPositiveError):
            birkhoff_coefficient([[1, 0], [1, 1]])

    def test_rank_one_is_zero(self, rng):
        u = rng.random(4) + 0.1
        v = rng.random(4) + 0.1
        assert birkhoff_coefficient(np.outer(u, v)) == pytest.approx(0.0, abs=1e-12)

    def test_contraction_definition(self, rng):
        A = np.exp(rng.normal(size=(4, 4)))
        tau = birkhoff_coefficient(A)
        for _ in range(10_000):
            x, y = rng.random(4) + 1e-3, rng.random(4) + 1e-3
            assert hilbert_distance(x @ A, y @ A) <= tau * hilbert_distance(
                x, y) + 1e-9


class TestKernelDistanceBound:
    def _setup(self, rng, n=5, T=4.0):
        C = np.exp(rng.uniform(-0.7, 0.7, (n, n)))
        return Graph.from_dense(C), WeightFunction.identity(), KernelConfig(t1=T)

    def test_zero_at_equal_points(self, rng):
        g, w, cfg = self._setup(rng)
        x = rng.dirichlet(np.ones(g.n))
        assert kernel_distance_bound(g, w, cfg, x, x) == pytest.approx(0.0, abs=1e-12)

    def test_lipschitz_upper_bound(self, rng):
        g, w, cfg = self._setup(rng)
        lp = w.lip_bounds(cfg.t1).l_plus
        for _ in range(200):
            x = rng.dirichlet(np.ones(g.n))
            y = rng.dirichlet(np.ones(g.n))
            assert kernel_distance_bound(g, w, cfg, x, y) <= (
                2 * lp * hilbert_distance(x, y) + 1e-9)

    def test_dominates_sampled_induced_metric(self, rng):
        g, w, cfg = self._setup(rng)
        x = rng.dirichlet(np.ones(g.n))
        y = rng.dirichlet(np.ones(g.n))
        bound = kernel_distance_bound(g, w, cfg, x, y)
        Mx = dense_transition(g, w, cfg, x)
        My = dense_transition(g, w, cfg, y)
        for _ in range(1000):
            z = rng.random(g.n) + 1e-3
            assert hilbert_distance(z @ Mx, z @ My) <= bound + 1e-12

    def test_requires_positive_matrix(self, rng, intro_graph):
        w = WeightFunction.identity()
        x = np.full(3, 1 / 3)
        with pytest.raises(NonPositiveError):
            kernel_distance_bound(intro_graph, w, KernelConfig(t1=1.0), x, x)
