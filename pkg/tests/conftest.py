import random

from rbox.relation import Relation


def decode(code: int, sizes) -> tuple[int, ...]:
    out = []
    for n in reversed(sizes):
        out.append(code % n)
        code //= n
    return tuple(reversed(out))


def random_relation(seed: int, sizes, density: float) -> Relation:
    """Bernoulli relation over the given axes, deterministic in the seed."""
    rng = random.Random(seed)
    total = 1
    for n in sizes:
        total *= n
    codes = [c for c in range(total) if rng.random() < density]
    return Relation.from_tuples(tuple(sizes), [decode(c, sizes) for c in codes])


def full_relation(sizes) -> Relation:
    total = 1
    for n in sizes:
        total *= n
    return Relation.from_tuples(tuple(sizes), [decode(c, sizes) for c in range(total)])
