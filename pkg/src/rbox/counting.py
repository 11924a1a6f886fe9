"""Exact enumeration and counting of boxes with prescribed part sizes.

The central identity: the number of boxes of shape (s_1, ..., s_r) equals
the sum over prefix rectangles R of shape (s_1, ..., s_{r-1}) of
C(d(R), s_r), where d(R) is the size of R's common extension set on the
last axis; the base case of a unary relation is C(|M|, s_1).  The fast
recursive counter and the exhaustive naive oracle below are two independent
routes to the same integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, prod
from typing import Iterator, Sequence

from . import kernels
from .errors import BudgetExceeded
from .relation import Box, Relation, check_shape, fiber, gen_binomial, validate_box

__all__ = [
    "CountResult",
    "count_boxes",
    "naive_count_boxes",
    "enumerate_rectangles",
    "support_sum",
    "rect_degree_sum",
    "jensen_floor",
    "jensen_floor_r2",
    "NAIVE_BUDGET",
]

NAIVE_BUDGET = 10_000_000


@dataclass(frozen=True)
class CountResult:
    """An exact box count plus how it was obtained.

    ``rectangles_visited`` is a diagnostic: complete prefix selections that
    reached the final binomial for the recursive method, candidate boxes
    checked for the naive one.
    """

    count: int
    rectangles_visited: int
    method: str  # "recursive" | "naive"


def count_boxes(relation: Relation, shape: Sequence[int]) -> CountResult:
    """Exact number of boxes of the given shape, arbitrary precision.

    Dispatches to the dense bitset kernel (compiled where available) and to
    a sparse set-based walk when the product space is too large to hold one
    bit per cell.
    """
    shp = check_shape(shape, relation.r)
    count, visited = kernels.count_boxes_flat(relation.axis_sizes, relation.encoded, shp)
    return CountResult(count=count, rectangles_visited=visited, method="recursive")


def naive_count_boxes(
    relation: Relation, shape: Sequence[int], budget: int = NAIVE_BUDGET
) -> CountResult:
    """Count by certificate-checking every candidate box.

    Deliberately independent of the recursive counter: it enumerates all
    products of index combinations and runs each through the box validator.
    Refuses instances whose candidate count exceeds ``budget``.
    """
    shp = check_shape(shape, relation.r)
    candidates = prod(comb(n, s) for n, s in zip(relation.axis_sizes, shp))
    if candidates > budget:
        raise BudgetExceeded(
            f"naive enumeration needs {candidates} candidate boxes, budget is {budget}"
        )
    count = 0
    checked = 0
    pools = [list(combinations(range(n), s)) for n, s in zip(relation.axis_sizes, shp)]
    for parts in product(*pools):
        checked += 1
        ok, _ = validate_box(relation, Box(parts))
        if ok:
            count += 1
    return CountResult(count=count, rectangles_visited=checked, method="naive")


def enumerate_rectangles(relation: Relation, shape: Sequence[int]) -> Iterator[Box]:
    """Stream the boxes of the relation with the given shape, in lexicographic
    order of their part sequences.

    A requested part size exceeding an axis size yields an empty stream.
    Partial products whose common extension set is too small to complete the
    remaining axes are abandoned early; this never skips a completable box.
    """
    shp = check_shape(shape, relation.r)
    r = relation.r
    sizes = relation.axis_sizes
    suffix = [1] * r
    for i in range(r - 2, -1, -1):
        suffix[i] = suffix[i + 1] * sizes[i + 1]
    needs = [1] * r
    for i in range(r - 2, -1, -1):
        needs[i] = needs[i + 1] * shp[i + 1]

    def walk(i: int, codes, chosen: list) -> Iterator[Box]:
        if i == r - 1:
            for last in combinations(sorted(codes), shp[i]):
                yield Box(tuple(chosen) + (last,))
            return
        p = suffix[i]
        buckets: dict[int, set[int]] = {}
        for c in codes:
            buckets.setdefault(c // p, set()).add(c % p)
        fibs = [(u, f) for u, f in sorted(buckets.items()) if len(f) >= needs[i]]

        def choose(start: int, remaining: int, acc, picked: list) -> Iterator[Box]:
            for j in range(start, len(fibs) - remaining + 1):
                f = acc & fibs[j][1] if acc is not None else fibs[j][1]
                if len(f) < needs[i]:
                    continue
                picked.append(fibs[j][0])
                if remaining == 1:
                    chosen.append(tuple(picked))
                    yield from walk(i + 1, f, chosen)
                    chosen.pop()
                else:
                    yield from choose(j + 1, remaining - 1, f, picked)
                picked.pop()

        yield from choose(0, shp[i], None, [])

    yield from walk(0, set(relation.encoded), [])


def support_sum(relation: Relation, shape: Sequence[int]) -> int:
    """Sum over last-axis vertices of their rectangle support counts.

    By double counting this equals the sum of d(R) over all rectangles of
    the given prefix shape; the tests pin both routes against each other.
    """
    if relation.r < 2:
        raise ValueError("support_sum requires arity >= 2")
    shp = check_shape(shape, relation.r - 1)
    total = 0
    for v in range(relation.axis_sizes[-1]):
        total += count_boxes(fiber(relation, v), shp).count
    return total


def rect_degree_sum(relation: Relation, shape: Sequence[int]) -> int:
    """Sum of d(R) over prefix rectangles, via one counting pass.

    C(d, 1) = d, so appending a unit part turns the box count into exactly
    this sum.
    """
    if relation.r < 2:
        raise ValueError("rect_degree_sum requires arity >= 2")
    shp = check_shape(shape, relation.r - 1)
    return count_boxes(relation, shp + (1,)).count


def jensen_floor(relation: Relation, shape: Sequence[int]) -> Fraction:
    """Unconditional convexity lower bound on the box count, exact rational.

    With N the number of candidate prefix products (all index combinations,
    box or not) and S the total rectangle support, convexity of the clipped
    binomial gives  count >= N * g_{s_r}(S / N).  Products outside the
    relation contribute d = 0 to S, so Jensen may run over all N of them.
    """
    shp = check_shape(shape, relation.r)
    if relation.r < 2:
        raise ValueError("jensen_floor requires arity >= 2")
    n_prefix = relation.axis_sizes[:-1]
    big_n = prod(comb(n, s) for n, s in zip(n_prefix, shp[:-1]))
    if big_n == 0:
        return Fraction(0)
    s_total = support_sum(relation, shp[:-1])
    return big_n * gen_binomial(shp[-1], Fraction(s_total, big_n))


def jensen_floor_r2(relation: Relation, shape: Sequence[int]) -> Fraction:
    """Two-step convexity floor for bipartite relations, exact rational.

    First average the per-vertex degrees on the second axis, then average
    the resulting rectangle supports on the first:
    count >= C(n1, s1) * g_{s2}( n2 * g_{s1}(|M| / n2) / C(n1, s1) ).
    """
    if relation.r != 2:
        raise ValueError("jensen_floor_r2 requires arity 2")
    s1, s2 = check_shape(shape, 2)
    n1, n2 = relation.axis_sizes
    big_n1 = comb(n1, s1)
    if big_n1 == 0:
        return Fraction(0)
    inner = n2 * gen_binomial(s1, Fraction(relation.size, n2))
    return big_n1 * gen_binomial(s2, inner / big_n1)


def count_boxes_partitioned(
    relation: Relation, shape: Sequence[int], jobs: int = 1
) -> CountResult:
    """Box count via fixed per-minimum-first-vertex partitioning.

    The rectangle stream splits into blocks by the smallest vertex of the
    first part; blocks are evaluated independently (optionally on a thread
    pool) and merged in ascending block order, so the result is identical
    for every ``jobs`` value.
    """
    shp = check_shape(shape, relation.r)
    if relation.r == 1:
        return count_boxes(relation, shp)
    blocks = _first_vertex_blocks(relation, shp)
    results = _run_blocks(
        blocks, lambda sub: kernels.count_boxes_flat(sub[0], sub[1], sub[2]), jobs
    )
    total = 0
    visited = 0
    for count, seen in results:
        total += count
        visited += seen
    return CountResult(count=total, rectangles_visited=visited, method="recursive")


def _first_vertex_blocks(relation: Relation, shp: tuple[int, ...]):
    """One sub-instance per candidate minimum first-part vertex u.

    Boxes whose first part has minimum u are exactly the boxes of shape
    (s_1 - 1, s_2, ...) of the relation restricted to first-axis rows > u
    and to the extension set of u; with s_1 = 1 the first axis drops out.
    """
    sizes = relation.axis_sizes
    p0 = prod(sizes[1:])
    rows: dict[int, set[int]] = {}
    for c in relation.encoded:
        rows.setdefault(c // p0, set()).add(c % p0)
    s1 = shp[0]
    blocks = []
    for u in sorted(rows):
        fib_u = rows[u]
        if s1 == 1:
            blocks.append((sizes[1:], tuple(sorted(fib_u)), shp[1:]))
        else:
            codes = [
                v * p0 + c for v in sorted(rows) if v > u for c in rows[v] & fib_u
            ]
            blocks.append((sizes, tuple(sorted(codes)), (s1 - 1,) + shp[1:]))
    return blocks


def _run_blocks(blocks, fn, jobs: int):
    if jobs <= 1 or len(blocks) <= 1:
        return [fn(b) for b in blocks]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, blocks))
