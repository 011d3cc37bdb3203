import math

import numpy as np
import pytest

import haprtr
from haprtr.errors import DimensionMismatchError, ParameterError
from haprtr.geometry import TangentVector, UnitVector, exp_map, geodesic, inner, random_unit, transport
from haprtr.objective import (
    HaplotypeObjective,
    ReadMatrix,
    cost,
    diagnostic_constants,
    euclidean_grad,
    hess_vec,
    masked_row_dot,
    riemannian_grad,
)
from haprtr.pipeline import generate_instance

from conftest import unit_tangent

EPS = 1e-6


def full_mask(entries):
    entries = np.asarray(entries)
    return ReadMatrix(entries=entries, mask=np.ones_like(entries, dtype=bool))


def rank_one(m, n, rng):
    h = 2 * rng.integers(0, 2, n) - 1
    c = 2 * rng.integers(0, 2, m) - 1
    return full_mask(np.outer(c, h)), h


@pytest.fixture
def instance():
    return generate_instance(12, 8, 0.7, 0.2, seed=42)


class TestReadMatrix:
    def test_shape_and_counts(self, instance):
        reads = instance.reads
        assert (reads.m, reads.n) == (12, 8)
        assert reads.num_observed == int(reads.mask.sum())
        assert np.array_equal(reads.row_observed, reads.mask.sum(axis=1))

    def test_sampled_zeroes_unobserved(self, instance):
        A = instance.reads.sampled
        assert A.dtype == np.float64
        assert (A[~instance.reads.mask] == 0.0).all()
        assert np.array_equal(A[instance.reads.mask], instance.reads.entries[instance.reads.mask])

    def test_rejects_bad_entries(self):
        with pytest.raises(ValueError):
            ReadMatrix(entries=np.array([[1, 0]]), mask=np.ones((1, 2), dtype=bool))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            ReadMatrix(entries=np.ones((2, 3), dtype=np.int8), mask=np.ones((3, 2), dtype=bool))

    def test_rejects_single_column(self):
        with pytest.raises(DimensionMismatchError):
            ReadMatrix(entries=np.ones((2, 1), dtype=np.int8), mask=np.ones((2, 1), dtype=bool))

    def test_immutable(self, instance):
        with pytest.raises(ValueError):
            instance.reads.entries[0, 0] = -1


class TestMaskedRowDot:
    def test_fully_masked_row_is_zero(self):
        M = ReadMatrix(entries=np.ones((1, 2), dtype=np.int8), mask=np.zeros((1, 2), dtype=bool))
        assert masked_row_dot(M, 0, UnitVector(np.array([1.0, 0.0]))) == 0.0

    def test_cancelling_row(self):
        M = full_mask([[1, -1]])
        x = UnitVector(np.array([1.0, 1.0]) / math.sqrt(2.0))
        assert masked_row_dot(M, 0, x) == pytest.approx(0.0)

    def test_single_observed_column(self):
        M = ReadMatrix(entries=np.array([[1, 1]]), mask=np.array([[True, False]]))
        assert masked_row_dot(M, 0, UnitVector(np.array([1.0, 0.0]))) == pytest.approx(1.0)

    def test_index_out_of_range(self):
        M = full_mask([[1, 1]])
        with pytest.raises(IndexError):
            masked_row_dot(M, 1, UnitVector(np.array([1.0, 0.0])))


class TestCost:
    def test_all_unobserved(self):
        m, n = 5, 3
        M = ReadMatrix(entries=np.ones((m, n), dtype=np.int8), mask=np.zeros((m, n), dtype=bool))
        x = UnitVector(np.eye(n)[0])
        assert cost(M, EPS, x) == pytest.approx(-m * math.sqrt(EPS))

    def test_single_row(self):
        M = full_mask([[1, 1]])
        x = UnitVector(np.array([1.0, 0.0]))
        assert cost(M, EPS, x) == pytest.approx(-math.sqrt(1.0 + EPS))

    def test_rank_one_at_truth(self, rng):
        m, n = 7, 5
        M, h = rank_one(m, n, rng)
        x = UnitVector.normalized(h.astype(float))
        assert cost(M, EPS, x) == pytest.approx(-m * math.sqrt(n + EPS))

    def test_upper_bound(self, rng, instance):
        for _ in range(20):
            x = random_unit(instance.reads.n, rng)
            assert cost(instance.reads, EPS, x) <= -instance.reads.m * math.sqrt(EPS) + 1e-12

    def test_even_symmetry(self, rng, instance):
        for _ in range(20):
            x = random_unit(instance.reads.n, rng)
            neg = UnitVector(-x.coords)
            assert abs(cost(instance.reads, EPS, x) - cost(instance.reads, EPS, neg)) <= 1e-12

    def test_monotone_in_epsilon(self, rng, instance):
        x = random_unit(instance.reads.n, rng)
        values = [cost(instance.reads, e, x) for e in (1e-8, 1e-6, 1e-4, 1e-2)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_l1_limit(self, rng, instance):
        A = instance.reads.sampled
        for e in (1e-6, 1e-10):
            for _ in range(10):
                x = random_unit(instance.reads.n, rng)
                l1 = np.abs(A @ x.coords).sum()
                assert abs(cost(instance.reads, e, x) + l1) <= instance.reads.m * math.sqrt(e)

    def test_bad_epsilon(self, instance):
        x = UnitVector(np.eye(instance.reads.n)[0])
        for bad in (0.0, -1.0, math.nan):
            with pytest.raises(ParameterError):
                cost(instance.reads, bad, x)


class TestEuclideanGrad:
    def test_zero_when_residuals_vanish(self):
        M = full_mask([[1, 1]])
        x = UnitVector(np.array([1.0, -1.0]) / math.sqrt(2.0))
        assert np.allclose(euclidean_grad(M, EPS, x), 0.0, atol=1e-12)

    def test_single_row_value(self):
        M = full_mask([[1, 1]])
        x = UnitVector(np.array([1.0, 0.0]))
        expected = -np.array([1.0, 1.0]) / math.sqrt(1.0 + EPS)
        assert np.allclose(euclidean_grad(M, EPS, x), expected, atol=1e-15)

    def test_odd_symmetry(self, rng, instance):
        for _ in range(20):
            x = random_unit(instance.reads.n, rng)
            neg = UnitVector(-x.coords)
            g = euclidean_grad(instance.reads, EPS, x)
            g_neg = euclidean_grad(instance.reads, EPS, neg)
            assert np.max(np.abs(g + g_neg)) <= 1e-12

    def test_matches_central_differences(self, rng, instance):
        h = 1e-6
        n = instance.reads.n
        for _ in range(10):
            x = random_unit(n, rng)
            g = euclidean_grad(instance.reads, EPS, x)
            for j in rng.choice(n, size=3, replace=False):
                step = np.zeros(n)
                step[j] = h
                # off-sphere evaluation through the raw kernel formula
                A = instance.reads.sampled

                def raw_cost(vec):
                    r = A @ vec
                    return -np.sqrt(r * r + EPS).sum()

                fd = (raw_cost(x.coords + step) - raw_cost(x.coords - step)) / (2.0 * h)
                assert abs(fd - g[j]) <= 1e-5 * max(1.0, abs(g[j]))


class TestRiemannianGrad:
    def test_zero_at_rank_one_truth(self, rng):
        M, h = rank_one(9, 6, rng)
        x = UnitVector.normalized(h.astype(float))
        assert riemannian_grad(M, EPS, x).norm <= 1e-8

    def test_always_tangent(self, rng, instance):
        for _ in range(50):
            x = random_unit(instance.reads.n, rng)
            g = riemannian_grad(instance.reads, EPS, x)
            assert abs(x.coords @ g.dir) <= 1e-10 * (1.0 + g.norm)

    def test_directional_derivative_match(self, rng, instance):
        h = 1e-6
        for _ in range(20):
            x = random_unit(instance.reads.n, rng)
            g = riemannian_grad(instance.reads, EPS, x)
            xi = unit_tangent(x, rng)
            fd = (
                cost(instance.reads, EPS, geodesic(x, xi, h))
                - cost(instance.reads, EPS, geodesic(x, xi, -h))
            ) / (2.0 * h)
            an = inner(g, xi)
            assert abs(fd - an) <= 1e-5 * max(abs(an), 1e-8)

    def test_norm_bound(self, rng, instance):
        limit = (instance.reads.n / math.sqrt(EPS)) * float(instance.reads.row_observed.sum())
        for _ in range(1000):
            x = random_unit(instance.reads.n, rng)
            assert riemannian_grad(instance.reads, EPS, x).norm <= limit


class TestHessVec:
    def test_zero_direction(self, rng, instance):
        x = random_unit(instance.reads.n, rng)
        out = hess_vec(instance.reads, EPS, x, TangentVector(x, np.zeros(instance.reads.n)))
        assert out.norm == 0.0

    def test_linear(self, rng, instance):
        x = random_unit(instance.reads.n, rng)
        xi = unit_tangent(x, rng)
        eta = unit_tangent(x, rng)
        combo = TangentVector(x, 2.0 * xi.dir - 3.0 * eta.dir)
        lhs = hess_vec(instance.reads, EPS, x, combo).dir
        rhs = 2.0 * hess_vec(instance.reads, EPS, x, xi).dir - 3.0 * hess_vec(instance.reads, EPS, x, eta).dir
        assert np.allclose(lhs, rhs, atol=1e-10)

    def test_symmetry(self, rng):
        for pair in range(50):
            inst = generate_instance(15, 10, 0.6, 0.2, seed=300 + pair)
            x = random_unit(10, rng)
            xi = unit_tangent(x, rng)
            eta = unit_tangent(x, rng)
            lhs = inner(hess_vec(inst.reads, EPS, x, xi), eta)
            rhs = inner(xi, hess_vec(inst.reads, EPS, x, eta))
            assert abs(lhs - rhs) <= 1e-8 * max(abs(lhs), abs(rhs), 1.0)

    def test_transported_difference_quotient_converges(self, rng, instance):
        # the one-sided quotient (P grad(exp(x, t xi)) - grad(x)) / t has O(t)
        # error; halving t should roughly halve it
        obj = HaplotypeObjective(instance.reads, EPS)
        x = random_unit(instance.reads.n, rng)
        xi = unit_tangent(x, rng)
        hv = obj.hess_vec(x, xi).dir

        def one_sided(t):
            y = exp_map(x, TangentVector(x, t * xi.dir))
            moved = transport(y, x, obj.riemannian_grad(y))
            return np.linalg.norm((moved.dir - obj.riemannian_grad(x).dir) / t - hv)

        errors = [one_sided(t) for t in (1e-3, 1e-4, 1e-5)]
        assert errors[2] < errors[0]
        assert errors[2] <= 1e-4 * max(np.linalg.norm(hv), 1.0) * 10.0

    def test_central_transported_difference_matches(self, rng, instance):
        obj = HaplotypeObjective(instance.reads, EPS)
        t = 1e-5
        for _ in range(10):
            x = random_unit(instance.reads.n, rng)
            xi = unit_tangent(x, rng)
            hv = obj.hess_vec(x, xi).dir
            yp = exp_map(x, TangentVector(x, t * xi.dir))
            ym = exp_map(x, TangentVector(x, -t * xi.dir))
            fd = (
                transport(yp, x, obj.riemannian_grad(yp)).dir
                - transport(ym, x, obj.riemannian_grad(ym)).dir
            ) / (2.0 * t)
            assert np.linalg.norm(fd - hv) <= 1e-4 * max(np.linalg.norm(hv), 1e-8)


class TestDiagnosticConstants:
    def test_zero_mask(self):
        M = ReadMatrix(entries=np.ones((3, 4), dtype=np.int8), mask=np.zeros((3, 4), dtype=bool))
        assert diagnostic_constants(M, 1.0) == (0.0, 0.0, 0.0)

    def test_single_row_of_ones(self):
        M = full_mask([[1, 1]])
        beta, beta_hess, beta_radial = diagnostic_constants(M, 1.0)
        assert beta == pytest.approx(4.0)
        assert beta_hess == pytest.approx(16.0)
        assert beta_radial == pytest.approx(2.0**1.5 + 2.0)

    def test_epsilon_scaling(self, instance):
        base = diagnostic_constants(instance.reads, EPS)
        halved = diagnostic_constants(instance.reads, EPS / 2.0)
        assert halved.beta == pytest.approx(base.beta * math.sqrt(2.0))
        assert halved.beta_hess == pytest.approx(base.beta_hess * 2.0)
        assert halved.beta_radial == pytest.approx(base.beta_radial)


class TestHaplotypeObjective:
    def test_matches_functional_api(self, rng, instance):
        obj = HaplotypeObjective(instance.reads, EPS)
        x = random_unit(instance.reads.n, rng)
        xi = unit_tangent(x, rng)
        assert obj.cost(x) == cost(instance.reads, EPS, x)
        assert np.array_equal(obj.riemannian_grad(x).dir, riemannian_grad(instance.reads, EPS, x).dir)
        assert np.allclose(obj.hess_vec(x, xi).dir, hess_vec(instance.reads, EPS, x, xi).dir)

    def test_cache_returns_consistent_objects(self, rng, instance):
        obj = HaplotypeObjective(instance.reads, EPS)
        x = random_unit(instance.reads.n, rng)
        y = random_unit(instance.reads.n, rng)
        g1 = obj.riemannian_grad(x)
        obj.cost(y)  # evict nothing: two slots
        g2 = obj.riemannian_grad(x)
        assert g1 is g2

    def test_oracles_triple(self, rng, instance):
        obj = HaplotypeObjective(instance.reads, EPS)
        cost_fn, grad_fn, hess_fn = obj.oracles()
        x = random_unit(instance.reads.n, rng)
        assert cost_fn(x) == obj.cost(x)
        g = grad_fn(x)
        assert hess_fn(x, g).dir.shape == (instance.reads.n,)


class TestDtypeRobustness:
    def test_point_dimension_mismatch(self, instance):
        x = UnitVector(np.eye(instance.reads.n + 1)[0])
        with pytest.raises(DimensionMismatchError):
            cost(instance.reads, EPS, x)

    def test_hess_base_mismatch(self, rng, instance):
        x = random_unit(instance.reads.n, rng)
        y = random_unit(instance.reads.n, rng)
        xi = unit_tangent(y, rng)
        with pytest.raises(DimensionMismatchError):
            hess_vec(instance.reads, EPS, x, xi)
