import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logpool import (
    BetaOpinion,
    OpinionPool,
    PooledBeta,
    WeightVector,
    grid_pool,
    integrate_01,
    log_pool_integral,
    pool_beta,
    pooled_log_density,
)
from logpool.pool import beta_log_density
from logpool.special import DomainError, log_beta

from .oracles import beta_logpdf, mp_log_pool_integral, quad01, random_simplex


def log_densities(pool):
    return [beta_log_density(o.a, o.b) for o in pool]


class TestTypes:
    def test_opinion_rejects_non_positive(self):
        with pytest.raises(ValueError):
            BetaOpinion("x", 0.0, 1.0)

    def test_pool_rejects_duplicates_and_empty(self):
        with pytest.raises(ValueError):
            OpinionPool((BetaOpinion("x", 1, 1), BetaOpinion("x", 2, 2)))
        with pytest.raises(ValueError):
            OpinionPool(())

    @pytest.mark.parametrize("alpha", [(0.5, 0.6), (-0.1, 1.1), (float("nan"), 1.0)])
    def test_weights_rejected(self, alpha):
        with pytest.raises(ValueError):
            WeightVector(alpha)

    def test_weights_sum_tolerance(self):
        WeightVector((0.3, 0.7 + 5e-13))
        with pytest.raises(ValueError):
            WeightVector((0.3, 0.7 + 5e-12))


class TestPoolBeta:
    def test_savchuk_equal_weights(self, savchuk):
        p = pool_beta(savchuk, WeightVector.equal(4))
        assert p.a_star == pytest.approx(7.96, abs=1e-12)
        assert p.b_star == pytest.approx(0.89675, abs=1e-12)

    @pytest.mark.parametrize("j", range(4))
    def test_vertex_selects_expert(self, savchuk, j):
        p = pool_beta(savchuk, WeightVector.vertex(4, j))
        assert (p.a_star, p.b_star) == (savchuk[j].a, savchuk[j].b)

    def test_idempotent(self, twins):
        p = pool_beta(twins, (0.5, 0.5))
        assert (p.a_star, p.b_star) == (2.0, 2.0)

    def test_length_mismatch(self, savchuk):
        with pytest.raises(ValueError):
            pool_beta(savchuk, (0.5, 0.5))

    @given(st.permutations(range(4)), st.lists(st.floats(0.01, 1.0), min_size=4, max_size=4))
    def test_permutation_equivariance(self, perm, raw):
        pool = OpinionPool.from_params([18.10, 3.44, 8.32, 1.98], [0.955, 0.860, 0.924, 0.848])
        w = np.array(raw) / sum(raw)
        w = w / math.fsum(w)
        p = pool_beta(pool, WeightVector(tuple(w)))
        q = pool_beta(OpinionPool(tuple(pool[i] for i in perm)), WeightVector(tuple(w[list(perm)])))
        assert (p.a_star, p.b_star) == (q.a_star, q.b_star)

    def test_recomputation_invariant(self, savchuk):
        rng = np.random.default_rng(0)
        for w in random_simplex(rng, 4, 50):
            p = pool_beta(savchuk, w / math.fsum(w))
            assert p.a_star == pytest.approx(float(p.weights.as_array() @ savchuk.a), abs=1e-12)
            assert p.b_star == pytest.approx(float(p.weights.as_array() @ savchuk.b), abs=1e-12)


class TestPooledLogDensity:
    def test_uniform(self):
        assert pooled_log_density(PooledBeta(1, 1), 0.3) == pytest.approx(0.0, abs=1e-15)

    def test_beta22(self):
        assert pooled_log_density(PooledBeta(2, 2), 0.5) == pytest.approx(math.log(1.5), abs=1e-14)

    def test_savchuk_matches_grid_pool(self, savchuk):
        w = WeightVector.equal(4)
        g = grid_pool(log_densities(savchuk), w)
        closed = pooled_log_density(pool_beta(savchuk, w), 0.9)
        assert closed == pytest.approx(float(g.log_density(0.9)), abs=1e-8)
        # mpmath value of the same quantity
        assert closed == pytest.approx(1.2901189293310409, abs=1e-10)

    @pytest.mark.parametrize("theta", [0.0, 1.0, -0.1])
    def test_domain(self, theta):
        with pytest.raises(DomainError):
            pooled_log_density(PooledBeta(2, 2), theta)


class TestLogPoolIntegral:
    def test_single_opinion(self):
        assert log_pool_integral(OpinionPool.from_params([3.0], [4.0]), (1.0,)) == 0.0

    def test_identical_opinions(self, twins):
        for w in [(0.5, 0.5), (0.1, 0.9), (1.0, 0.0)]:
            assert log_pool_integral(twins, w) == pytest.approx(0.0, abs=1e-14)

    def test_savchuk_equal_weights(self, savchuk):
        w = (0.25,) * 4
        direct = log_beta(7.96, 0.89675) - 0.25 * sum(log_beta(o.a, o.b) for o in savchuk)
        assert log_pool_integral(savchuk, w) == pytest.approx(direct, abs=1e-13)
        assert log_pool_integral(savchuk, w) == pytest.approx(-0.27834976552796825, abs=1e-8)

    def test_matches_mpmath_quadrature(self, savchuk):
        rng = np.random.default_rng(5)
        for w in random_simplex(rng, 4, 5):
            w = tuple(w / math.fsum(w))
            ref = mp_log_pool_integral(savchuk.a, savchuk.b, w)
            assert log_pool_integral(savchuk, w) == pytest.approx(ref, abs=1e-8)

    def test_non_positive_by_hoelder(self, savchuk):
        rng = np.random.default_rng(6)
        for w in random_simplex(rng, 4, 200):
            assert log_pool_integral(savchuk, w / math.fsum(w)) <= 1e-12

    def test_convex_in_weights(self, savchuk):
        rng = np.random.default_rng(7)
        w1s, w2s = random_simplex(rng, 4, 200), random_simplex(rng, 4, 200)
        for w1, w2, lam in zip(w1s, w2s, rng.uniform(size=200)):
            w1, w2 = w1 / math.fsum(w1), w2 / math.fsum(w2)
            mid = lam * w1 + (1 - lam) * w2
            chord = lam * log_pool_integral(savchuk, w1) + (1 - lam) * log_pool_integral(savchuk, w2)
            assert log_pool_integral(savchuk, mid / math.fsum(mid)) <= chord + 1e-9


class TestGridPool:
    def test_identical_opinions(self):
        f = beta_log_density(2, 2)
        g = grid_pool([f, f], (0.5, 0.5))
        ref = 6 * g.theta * (1 - g.theta)
        assert np.max(np.abs(g.density - ref)) <= 1e-6

    def test_boundary_weights_match_closed_form(self, savchuk):
        w = WeightVector((0.04, 0.96, 0.0, 0.0))
        g = grid_pool(log_densities(savchuk), w)
        p = pool_beta(savchuk, w)
        ref = np.exp(p.log_density(g.theta))
        assert np.max(np.abs(g.density - ref)) <= 1e-6

    def test_zero_weight_drops_opinion(self):
        g = grid_pool([beta_log_density(1, 1), beta_log_density(1, 3)], (1.0, 0.0))
        np.testing.assert_allclose(g.density, 1.0, atol=1e-10)

    def test_grid_is_open(self, savchuk):
        g = grid_pool(log_densities(savchuk), WeightVector.equal(4))
        assert g.theta[0] > 0 and g.theta[-1] < 1
        assert np.all(np.isfinite(g.density))

    def test_improper_table_raises(self):
        with pytest.raises(FloatingPointError):
            grid_pool([lambda t, u: -2.0 * np.log(t)], (1.0,))

    def test_normalisation_independent_quadrature(self, savchuk):
        rng = np.random.default_rng(8)
        for w in random_simplex(rng, 4, 20):
            g = grid_pool(log_densities(savchuk), tuple(w / math.fsum(w)))
            assert quad01(lambda t: math.exp(float(g.log_density(t)))) == pytest.approx(1.0, abs=1e-6)

    def test_closed_form_agreement_on_grid(self, savchuk):
        rng = np.random.default_rng(9)
        for w in random_simplex(rng, 4, 20):
            w = WeightVector(tuple(w / math.fsum(w)))
            g = grid_pool(log_densities(savchuk), w)
            closed = pool_beta(savchuk, w).log_density(g.theta)
            assert np.max(np.abs(closed - np.log(g.density))) <= 1e-6
