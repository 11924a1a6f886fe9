import random
from fractions import Fraction

import pytest

from rbox.peeling import default_theta, infer_alpha, peel
from rbox.relation import Relation, last_axis_degrees

from conftest import full_relation, random_relation

DIAG4 = Relation.from_tuples((4, 4), [(i, i) for i in range(4)])


def reference_peel(rel, theta, order):
    """Dumb reference: remove the first eligible vertex in the given order,
    rebuild degrees from the surviving tuples, repeat to fixpoint."""
    tuples = list(rel.tuples)
    alive = set(range(rel.axis_sizes[-1]))
    trace = []
    while True:
        deg = {v: 0 for v in alive}
        for t in tuples:
            deg[t[-1]] += 1
        for v in order:
            if v in alive and deg[v] < theta:
                alive.discard(v)
                trace.append((v, deg[v]))
                tuples = [t for t in tuples if t[-1] != v]
                break
        else:
            break
    return tuple(sorted(alive)), tuple(tuples), trace


class TestPeelExamples:
    def test_diagonal_theta2_empties(self):
        res = peel(DIAG4, 2)
        assert res.survivors == ()
        assert res.core.size == 0
        assert res.removed == ((0, 1), (1, 1), (2, 1), (3, 1))

    def test_diagonal_theta1_keeps_all(self):
        res = peel(DIAG4, 1)
        assert res.survivors == (0, 1, 2, 3)
        assert res.core == DIAG4
        assert res.removed == ()

    def test_full_relation_no_removals(self):
        rel = full_relation((3, 3, 3))
        alpha = 1.0
        theta = alpha / 2 * 3**2
        res = peel(rel, theta)
        assert res.removed == () and res.core.size == 27

    def test_zero_degree_vertices_removed_at_positive_theta(self):
        rel = Relation.from_tuples((2, 3), [(0, 0), (1, 0)])
        res = peel(rel, 1)
        assert res.survivors == (0,)
        assert (1, 0) in res.removed and (2, 0) in res.removed

    def test_theta_zero_keeps_everything(self):
        rel = Relation.from_tuples((2, 3), [(0, 0)])
        res = peel(rel, 0)
        assert res.survivors == (0, 1, 2)
        assert res.core == rel


class TestDefaultTheta:
    def test_inferred_alpha(self):
        rel = Relation.from_tuples((4, 4), [(i, j) for i in range(4) for j in range(2)])
        theta, alpha = default_theta(rel)
        assert alpha == Fraction(1, 2)
        assert theta == 1

    def test_supplied_alpha(self):
        rel = full_relation((5, 5, 5))
        theta, alpha = default_theta(rel, 0.6)
        assert theta == pytest.approx(7.5)

    def test_empty_without_alpha_is_error(self):
        with pytest.raises(ValueError, match="alpha"):
            default_theta(Relation((3, 3), ()))

    def test_min_axis_used(self):
        rel = Relation.from_tuples((2, 5), [(0, 0)])
        theta, _ = default_theta(rel, Fraction(1, 2))
        assert theta == Fraction(1, 2)  # n = 2, (1/4) * 2

    def test_infer_alpha_exact(self):
        rel = Relation.from_tuples((3, 3), [(0, 0), (1, 1)])
        assert infer_alpha(rel) == Fraction(2, 9)


class TestPeelInvariants:
    def test_survivor_degrees_and_mass(self):
        rng = random.Random(5)
        for _ in range(80):
            sizes = tuple(rng.randrange(1, 6) for _ in range(rng.choice([2, 3])))
            rel = random_relation(rng.randrange(2**31), sizes, rng.choice([0.3, 0.6]))
            theta = rng.choice([0, 1, 1.5, 2, Fraction(5, 2)])
            res = peel(rel, theta)
            deg = last_axis_degrees(res.core)
            assert all(deg[v] >= theta for v in res.survivors)
            assert all(d < theta for _, d in res.removed)
            if res.removed:
                assert rel.size - res.core.size < theta * len(res.removed)
            # idempotence: the core and survivor set are a fixpoint; a second
            # pass may re-list long-dead zero-degree vertices but touches no
            # tuples and no survivors
            again = peel(res.core, theta)
            assert again.core == res.core
            assert again.survivors == res.survivors
            assert all(d == 0 for _, d in again.removed)

    def test_order_invariance(self):
        rng = random.Random(6)
        for _ in range(25):
            sizes = tuple(rng.randrange(2, 6) for _ in range(rng.choice([2, 3])))
            rel = random_relation(rng.randrange(2**31), sizes, 0.5)
            theta = rng.choice([1, 2, 2.5])
            res = peel(rel, theta)
            for _ in range(20):
                order = list(range(sizes[-1]))
                rng.shuffle(order)
                surv, tuples, _ = reference_peel(rel, theta, order)
                assert surv == res.survivors
                assert tuples == res.core.tuples

    def test_exact_rational_threshold_no_ties(self):
        # degree 1 vs theta = 1 must survive; theta = 1 + epsilon-free Fraction knocks it out
        rel = Relation.from_tuples((2, 2), [(0, 0), (0, 1), (1, 0)])
        assert peel(rel, Fraction(1)).survivors == (0, 1)
        assert peel(rel, Fraction(3, 2)).survivors == (0,)

    def test_core_is_restriction(self):
        rel = random_relation(8, (4, 4, 4), 0.4)
        res = peel(rel, 3)
        keep = set(res.survivors)
        assert res.core.tuples == tuple(t for t in rel.tuples if t[-1] in keep)
