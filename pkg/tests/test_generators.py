from fractions import Fraction
from math import comb

import pytest

from rbox.counting import count_boxes
from rbox.formats import dumps_hg, dumps_rbox
from rbox.generators import GenSpec, gen
from rbox.relation import validate_box


class TestDeterminism:
    def test_same_spec_same_bytes(self):
        spec = GenSpec(kind="bernoulli", seed=42, axis_sizes=(5, 5, 5), alpha=0.5)
        a = gen(spec)
        b = gen(spec)
        assert dumps_rbox(a.relation) == dumps_rbox(b.relation)

    def test_different_seed_differs(self):
        a = gen(GenSpec(kind="bernoulli", seed=1, axis_sizes=(6, 6), alpha=0.5))
        b = gen(GenSpec(kind="bernoulli", seed=2, axis_sizes=(6, 6), alpha=0.5))
        assert a.relation != b.relation

    def test_hypergraph_deterministic(self):
        spec = GenSpec(kind="hypergraph_gnp", seed=7, n=8, r=3, alpha=0.4)
        assert dumps_hg(gen(spec).edges, 8, 3) == dumps_hg(gen(spec).edges, 8, 3)


class TestExactCount:
    def test_full_square(self):
        res = gen(GenSpec(kind="exact_count", seed=0, axis_sizes=(4, 4), count=16))
        assert res.relation.size == 16
        assert res.relation.tuples == tuple((i, j) for i in range(4) for j in range(4))

    def test_empty(self):
        res = gen(GenSpec(kind="exact_count", seed=0, axis_sizes=(4, 4), count=0))
        assert res.relation.size == 0

    @pytest.mark.parametrize("m", [1, 7, 8, 9, 15])
    def test_exact_m_both_sampling_regimes(self, m):
        # m <= 8 goes through rejection, m > 8 through the shuffled prefix
        for seed in range(10):
            res = gen(GenSpec(kind="exact_count", seed=seed, axis_sizes=(4, 4), count=m))
            assert res.relation.size == m

    def test_count_out_of_range(self):
        with pytest.raises(ValueError, match="count"):
            gen(GenSpec(kind="exact_count", seed=0, axis_sizes=(2, 2), count=5))


class TestBernoulli:
    def test_extreme_alpha(self):
        assert gen(GenSpec(kind="bernoulli", seed=3, axis_sizes=(4, 4), alpha=1.0)).relation.size == 16

    def test_five_sigma_flagged_not_failed(self):
        # the draw count near alpha * total for ordinary seeds: no warnings
        res = gen(GenSpec(kind="bernoulli", seed=5, axis_sizes=(10, 10), alpha=0.5))
        assert res.warnings == ()

    def test_sigma_flag_machinery(self):
        from rbox.generators import _sigma_warning

        assert _sigma_warning(100, 100, 0.5)  # impossible draw must warn
        assert not _sigma_warning(50, 100, 0.5)


class TestPlanted:
    def test_planted_validates_and_counts(self):
        spec = GenSpec(kind="planted_box", seed=9, axis_sizes=(6, 6, 6), alpha=0.0, planted_shape=(2, 2, 3))
        res = gen(spec)
        ok, _ = validate_box(res.relation, res.planted)
        assert ok
        assert res.planted.shape == (2, 2, 3)
        assert count_boxes(res.relation, (2, 2, 3)).count >= 1

    def test_planted_into_noise(self):
        spec = GenSpec(kind="planted_box", seed=10, axis_sizes=(8, 8), alpha=0.3, planted_shape=(3, 3))
        res = gen(spec)
        ok, _ = validate_box(res.relation, res.planted)
        assert ok
        assert count_boxes(res.relation, (3, 3)).count >= 1

    def test_planted_shape_must_fit(self):
        with pytest.raises(ValueError, match="fit"):
            gen(GenSpec(kind="planted_box", seed=0, axis_sizes=(2, 2), alpha=0.0, planted_shape=(3, 1)))

    def test_planted_needs_shape(self):
        with pytest.raises(ValueError, match="planted_shape"):
            gen(GenSpec(kind="planted_box", seed=0, axis_sizes=(2, 2), alpha=0.1))


class TestHypergraphs:
    def test_exact_edge_count(self):
        res = gen(GenSpec(kind="hypergraph_exact", seed=11, n=7, r=3, count=10))
        assert len(res.edges) == 10
        assert len(set(res.edges)) == 10
        for e in res.edges:
            assert list(e) == sorted(e) and len(set(e)) == 3

    def test_exact_full(self):
        res = gen(GenSpec(kind="hypergraph_exact", seed=0, n=5, r=3, count=comb(5, 3)))
        assert len(res.edges) == comb(5, 3)

    def test_gnp_edges_valid(self):
        res = gen(GenSpec(kind="hypergraph_gnp", seed=12, n=9, r=4, alpha=0.3))
        for e in res.edges:
            assert len(e) == 4 and list(e) == sorted(e)
            assert all(0 <= v < 9 for v in e)

    def test_requires_n_and_r(self):
        with pytest.raises(ValueError, match="n and r"):
            gen(GenSpec(kind="hypergraph_gnp", seed=0, alpha=0.5))


class TestSpecValidation:
    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown kind"):
            gen(GenSpec(kind="salted", seed=0))

    def test_alpha_range(self):
        with pytest.raises(ValueError, match="alpha"):
            gen(GenSpec(kind="bernoulli", seed=0, axis_sizes=(2, 2), alpha=1.5))

    def test_missing_axes(self):
        with pytest.raises(ValueError, match="axis_sizes"):
            gen(GenSpec(kind="bernoulli", seed=0, alpha=0.5))

    def test_fraction_alpha_accepted(self):
        res = gen(GenSpec(kind="bernoulli", seed=1, axis_sizes=(4, 4), alpha=Fraction(1, 2)))
        assert res.relation is not None
