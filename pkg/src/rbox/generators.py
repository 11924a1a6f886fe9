"""Seeded instance generators for relations and r-uniform hypergraphs.

All randomness flows through Python's Mersenne Twister (``random.Random``)
seeded from the GenSpec, and every layered algorithm is pinned: Bernoulli
sweeps walk cells in lexicographic order, exact-count sampling uses
rejection below half fill and a Fisher-Yates prefix shuffle above, and
subsets are drawn with Floyd's algorithm.  Same GenSpec, same bytes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb, prod, sqrt
from typing import Sequence

from .relation import Box, Relation, check_shape

__all__ = ["GenSpec", "GenResult", "gen", "KINDS"]

KINDS = ("bernoulli", "exact_count", "planted_box", "hypergraph_gnp", "hypergraph_exact")


@dataclass(frozen=True)
class GenSpec:
    """What to generate; unused fields stay None."""

    kind: str
    seed: int
    axis_sizes: tuple[int, ...] | None = None
    alpha: float | Fraction | None = None
    count: int | None = None
    planted_shape: tuple[int, ...] | None = None
    n: int | None = None
    r: int | None = None


@dataclass(frozen=True)
class GenResult:
    spec: GenSpec
    relation: Relation | None = None
    edges: tuple[tuple[int, ...], ...] | None = None
    planted: Box | None = None
    warnings: tuple[str, ...] = field(default=())


def _floyd_sample(rng: random.Random, n: int, k: int) -> tuple[int, ...]:
    chosen: set[int] = set()
    for j in range(n - k, n):
        t = rng.randrange(j + 1)
        chosen.add(t if t not in chosen else j)
    return tuple(sorted(chosen))


def _decode(code: int, axis_sizes: Sequence[int]) -> tuple[int, ...]:
    out = []
    for n in reversed(axis_sizes):
        out.append(code % n)
        code //= n
    return tuple(reversed(out))


def _exact_codes(rng: random.Random, total: int, m: int) -> list[int]:
    """Uniform m-subset of [0, total): rejection below 50% fill, shuffle-prefix above."""
    if m * 2 <= total:
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(rng.randrange(total))
        return sorted(chosen)
    arr = list(range(total))
    for i in range(m):
        j = rng.randrange(i, total)
        arr[i], arr[j] = arr[j], arr[i]
    return sorted(arr[:m])


def _bernoulli_codes(rng: random.Random, total: int, alpha: float) -> list[int]:
    return [c for c in range(total) if rng.random() < alpha]


def _sigma_warning(count: int, total: int, alpha: float) -> list[str]:
    mean = alpha * total
    sigma = sqrt(total * alpha * (1.0 - alpha))
    if sigma > 0 and abs(count - mean) > 5 * sigma:
        return [f"bernoulli draw {count} deviates from mean {mean:.1f} by more than 5 sigma"]
    return []


def gen(spec: GenSpec) -> GenResult:
    """Generate the instance a GenSpec describes, deterministically."""
    if spec.kind not in KINDS:
        raise ValueError(f"unknown kind {spec.kind!r}; expected one of {KINDS}")
    rng = random.Random(spec.seed)
    if spec.kind in ("bernoulli", "exact_count", "planted_box"):
        if spec.axis_sizes is None:
            raise ValueError(f"kind {spec.kind!r} needs axis_sizes")
        sizes = tuple(int(v) for v in spec.axis_sizes)
        if any(v < 1 for v in sizes):
            raise ValueError(f"axis sizes must be positive, got {sizes}")
        total = prod(sizes)
        if spec.kind == "bernoulli":
            af = _gen_alpha(spec)
            codes = _bernoulli_codes(rng, total, af)
            rel = Relation.from_tuples(sizes, (_decode(c, sizes) for c in codes))
            return GenResult(spec=spec, relation=rel, warnings=tuple(_sigma_warning(len(codes), total, af)))
        if spec.kind == "exact_count":
            if spec.count is None or not 0 <= spec.count <= total:
                raise ValueError(f"count must be in [0, {total}], got {spec.count}")
            codes = _exact_codes(rng, total, spec.count)
            rel = Relation.from_tuples(sizes, (_decode(c, sizes) for c in codes))
            return GenResult(spec=spec, relation=rel)
        # planted_box: bernoulli base, then a random box of the given shape
        af = _gen_alpha(spec, allow_zero=True)
        shape = check_shape(spec.planted_shape, len(sizes)) if spec.planted_shape else None
        if shape is None:
            raise ValueError("planted_box needs planted_shape")
        if any(s > n for s, n in zip(shape, sizes)):
            raise ValueError(f"planted shape {shape} does not fit axes {sizes}")
        base = set(_bernoulli_codes(rng, total, af)) if af > 0 else set()
        parts = tuple(_floyd_sample(rng, n, s) for n, s in zip(sizes, shape))
        suffix = [1] * len(sizes)
        for i in range(len(sizes) - 2, -1, -1):
            suffix[i] = suffix[i + 1] * sizes[i + 1]
        for t in product(*parts):
            base.add(sum(v * w for v, w in zip(t, suffix)))
        rel = Relation.from_tuples(sizes, (_decode(c, sizes) for c in sorted(base)))
        return GenResult(spec=spec, relation=rel, planted=Box(parts))

    # hypergraph kinds
    if spec.n is None or spec.r is None:
        raise ValueError(f"kind {spec.kind!r} needs n and r")
    n, r = int(spec.n), int(spec.r)
    if r < 2 or n < r:
        raise ValueError(f"need n >= r >= 2, got n={n}, r={r}")
    if spec.kind == "hypergraph_gnp":
        af = _gen_alpha(spec)
        edges = tuple(e for e in combinations(range(n), r) if rng.random() < af)
        return GenResult(spec=spec, edges=edges)
    total = comb(n, r)
    if spec.count is None or not 0 <= spec.count <= total:
        raise ValueError(f"count must be in [0, {total}], got {spec.count}")
    codes = _exact_codes(rng, total, spec.count)
    all_edges = list(combinations(range(n), r))
    edges = tuple(all_edges[c] for c in codes)
    return GenResult(spec=spec, edges=edges)


def _gen_alpha(spec: GenSpec, allow_zero: bool = False) -> float:
    if spec.alpha is None:
        raise ValueError(f"kind {spec.kind!r} needs alpha")
    af = float(spec.alpha)
    lo_ok = af >= 0 if allow_zero else af > 0
    if not (lo_ok and af <= 1):
        raise ValueError(f"alpha must be in {'[0, 1]' if allow_zero else '(0, 1]'}, got {spec.alpha}")
    return af
