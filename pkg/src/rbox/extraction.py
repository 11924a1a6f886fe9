"""Find a box with prescribed prefix part sizes and a maximum last part.

The procedure realizes the extraction argument: optionally peel the last
axis at the canonical threshold, then pick a prefix rectangle maximizing
the common-extension count and return it together with its full extension
set.  Three strategies: exhaustive (true maximum, lexicographically least
maximizer), greedy (axis-by-axis vertex selection scored by surviving
last-axis extensions), and sampled (best of a seeded batch of random
rectangles).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, prod
from typing import Sequence

from . import bounds as bounds_mod
from . import kernels
from .counting import count_boxes, rect_degree_sum
from .errors import BudgetExceeded, EmptySearchSpace, ExtractionError
from .peeling import default_theta, infer_alpha, peel
from .relation import Box, Relation, check_shape, project_last, validate_box

__all__ = [
    "ExtractionResult",
    "extract_box",
    "hypergraph_to_relation",
    "extract_multipartite",
    "verify_guarantee",
]

EXHAUSTIVE_BUDGET = 10_000_000


@dataclass(frozen=True)
class ExtractionResult:
    """A certified box: prefix parts of the requested sizes, full last part."""

    box: Box
    t: int
    strategy: str  # "exhaustive" | "greedy" | "sampled"
    certificate_checked: bool
    averaging_floor: Fraction | None  # S_L / N, exhaustive only
    theta: object
    peeled: bool
    removed_count: int
    seed: int | None = None

    @property
    def parts(self) -> tuple[tuple[int, ...], ...]:
        return self.box.parts


def _resolve_theta(relation: Relation, alpha, theta):
    if theta is not None:
        return theta, alpha, theta != 0
    if alpha is not None:
        th, al = default_theta(relation, alpha)
        return th, al, True
    return 0, None, False


def extract_box(
    relation: Relation,
    shape: Sequence[int],
    alpha=None,
    theta=None,
    strategy: str = "exhaustive",
    budget: int = EXHAUSTIVE_BUDGET,
    seed: int = 0,
    jobs: int = 1,
) -> ExtractionResult:
    """Extract a box whose first r-1 parts have the given sizes.

    Peeling: an explicit ``theta`` wins; otherwise ``alpha`` selects the
    canonical threshold (alpha/2) n^(r-1); otherwise no peeling happens
    (theta = 0), which is the sensible default at small scale where the
    canonical threshold can empty the relation.  The result records which
    mode ran.

    The returned box always lives in the original relation, and its last
    part is the full extension set of the chosen rectangle (callers wanting
    exactly t vertices truncate to the smallest indices).
    """
    if relation.r < 2:
        raise ValueError("extraction requires arity >= 2")
    shp = check_shape(shape, relation.r - 1)
    th, al, do_peel = _resolve_theta(relation, alpha, theta)
    peeled = peel(relation, th) if do_peel else None
    core = peeled.core if peeled is not None else relation
    if core.size == 0:
        raise EmptySearchSpace(f"no rectangle of shape {shp}: relation is empty after peeling")

    if strategy == "exhaustive":
        d, parts, neigh = _extract_exhaustive(core, shp, budget, jobs)
        floor = Fraction(rect_degree_sum(core, shp), _candidate_rectangles(core, shp))
    elif strategy == "greedy":
        d, parts, neigh = _extract_greedy(core, shp)
        floor = None
    elif strategy == "sampled":
        d, parts, neigh = _extract_sampled(core, shp, budget, seed)
        floor = None
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    box = Box(parts + (neigh,))
    ok, violator = validate_box(relation, box)
    if not ok:
        raise AssertionError(f"internal error: extracted box not in relation, violator {violator}")
    return ExtractionResult(
        box=box,
        t=d,
        strategy=strategy,
        certificate_checked=True,
        averaging_floor=floor,
        theta=th,
        peeled=do_peel,
        removed_count=peeled.removed_count if peeled is not None else 0,
        seed=seed if strategy == "sampled" else None,
    )


def _candidate_rectangles(relation: Relation, shp) -> int:
    return prod(comb(n, s) for n, s in zip(relation.axis_sizes[:-1], shp))


def _extract_exhaustive(core: Relation, shp, budget, jobs: int = 1):
    n_cand = _candidate_rectangles(core, shp)
    if n_cand == 0:
        raise EmptySearchSpace(f"no rectangle of shape {shp}: a part exceeds its axis size")
    if n_cand > budget:
        raise BudgetExceeded(
            f"exhaustive search over {n_cand} candidate rectangles exceeds budget {budget}; "
            "try strategy='greedy' or 'sampled'"
        )
    if jobs > 1:
        d, parts, neigh = _best_rectangle_partitioned(core, shp, jobs)
    else:
        d, parts, neigh, _ = kernels.best_rectangle_flat(core.axis_sizes, core.encoded, shp)
    if d == 0:
        if count_boxes(project_last(core), shp).count == 0:
            raise EmptySearchSpace(f"no rectangle of shape {shp} exists in the projected relation")
        raise EmptySearchSpace(
            f"no rectangle of shape {shp} has a nonempty common extension set"
        )
    return d, parts, neigh


def _best_rectangle_partitioned(core: Relation, shp, jobs: int):
    """Exhaustive maximum split by the smallest first-part vertex.

    Rectangles whose first part has minimum u are searched inside the
    relation restricted to rows above u intersected with u's extension set.
    Blocks are merged in ascending u with strict improvement, which keeps
    the lexicographically least maximizer, so the result matches the
    single-pass kernel for every worker count.
    """
    from .counting import _run_blocks

    sizes = core.axis_sizes
    p0 = prod(sizes[1:])
    rows: dict[int, set[int]] = {}
    for c in core.encoded:
        rows.setdefault(c // p0, set()).add(c % p0)
    s1 = shp[0]
    blocks = []
    for u in sorted(rows):
        fib_u = rows[u]
        if s1 == 1:
            if core.r == 2:
                blocks.append(("leaf", u, tuple(sorted(fib_u))))
            else:
                blocks.append(("sub", u, sizes[1:], tuple(sorted(fib_u)), shp[1:]))
        else:
            codes = tuple(
                sorted(v * p0 + c for v in rows if v > u for c in rows[v] & fib_u)
            )
            blocks.append(("full", u, sizes, codes, (s1 - 1,) + tuple(shp[1:])))

    def run(block):
        kind, u = block[0], block[1]
        if kind == "leaf":
            neigh = block[2]
            return (len(neigh), ((u,),), neigh)
        _, _, bsizes, codes, bshape = block
        d, parts, neigh, _ = kernels.best_rectangle_flat(bsizes, codes, bshape)
        if parts is None:
            return 0, None, ()
        if kind == "sub":
            return d, ((u,),) + parts, neigh
        return d, ((u,) + parts[0],) + parts[1:], neigh

    best = (0, None, ())
    for d, parts, neigh in _run_blocks(blocks, run, jobs):
        if d > best[0]:
            best = (d, parts, neigh)
    return best


def _extract_greedy(core: Relation, shp):
    """Axis-by-axis greedy: each added vertex maximizes the number of
    distinct last-axis extensions of the partial rectangle, ties to the
    smaller index."""
    sizes = core.axis_sizes
    r = core.r
    suffix = [1] * r
    for i in range(r - 2, -1, -1):
        suffix[i] = suffix[i + 1] * sizes[i + 1]
    n_last = sizes[-1]

    def last_proj(codes) -> int:
        return len({c % n_last for c in codes})

    cur = set(core.encoded)
    parts: list[tuple[int, ...]] = []
    for i in range(r - 1):
        p = suffix[i]
        buckets: dict[int, set[int]] = {}
        for c in cur:
            buckets.setdefault(c // p, set()).add(c % p)
        part: list[int] = []
        running: set[int] | None = None
        for _ in range(shp[i]):
            best_u, best_score, best_set = -1, 0, None
            for u in sorted(buckets):
                if u in part:
                    continue
                cand = buckets[u] if running is None else running & buckets[u]
                score = last_proj(cand)
                if score > best_score:
                    best_u, best_score, best_set = u, score, cand
            if best_u < 0:
                raise ExtractionError(
                    f"greedy search dead-ended on axis {i} for shape {shp}; try exhaustive or sampled"
                )
            part.append(best_u)
            running = best_set
        parts.append(tuple(sorted(part)))
        assert running is not None
        cur = running
    neigh = tuple(sorted(cur))
    if not neigh:
        raise ExtractionError(f"greedy search found no extension for shape {shp}")
    return len(neigh), tuple(parts), neigh


def _floyd_sample(rng: random.Random, n: int, k: int) -> tuple[int, ...]:
    """Floyd's uniform k-subset sampling; deterministic given the generator."""
    chosen: set[int] = set()
    for j in range(n - k, n):
        t = rng.randrange(j + 1)
        chosen.add(t if t not in chosen else j)
    return tuple(sorted(chosen))


def _extract_sampled(core: Relation, shp, budget: int, seed: int):
    """Best of ``budget`` uniformly drawn candidate rectangles.

    Draws that are not rectangles of the projected relation (equivalently,
    have an empty extension set) are discarded; ties on the extension count
    keep the lexicographically least parts.
    """
    sizes = core.axis_sizes
    if any(s > n for n, s in zip(sizes[:-1], shp)):
        raise EmptySearchSpace(f"no rectangle of shape {shp}: a part exceeds its axis size")
    rng = random.Random(seed)
    fibers = core._prefix_fibers
    from itertools import product as iproduct

    best: tuple[int, tuple, tuple] | None = None
    for _ in range(budget):
        parts = tuple(_floyd_sample(rng, sizes[i], shp[i]) for i in range(core.r - 1))
        common: frozenset[int] | None = None
        for prefix in iproduct(*parts):
            ext = fibers.get(prefix)
            if not ext:
                common = None
                break
            common = ext if common is None else common & ext
            if not common:
                common = None
                break
        if common is None:
            continue
        d = len(common)
        if best is None or d > best[0] or (d == best[0] and parts < best[1]):
            best = (d, parts, tuple(sorted(common)))
    if best is None:
        raise ExtractionError(
            f"no rectangle with a nonempty extension set among {budget} samples for shape {shp}"
        )
    return best


def hypergraph_to_relation(edges: Sequence[Sequence[int]], n: int, r: int) -> Relation:
    """All orderings of the edges of an r-uniform graph, as an r-ary relation.

    Every axis is a copy of the vertex set, so the relation has exactly
    r! tuples per edge.  Edges must consist of r distinct in-range vertices
    and must not repeat.
    """
    if r < 2:
        raise ValueError("hypergraphs need arity >= 2")
    if n < 1:
        raise ValueError("vertex count must be positive")
    seen: set[tuple[int, ...]] = set()
    tuples: list[tuple[int, ...]] = []
    for e in edges:
        edge = tuple(int(v) for v in e)
        if len(edge) != r:
            raise ValueError(f"edge {edge} has {len(edge)} vertices, expected {r}")
        if len(set(edge)) != r:
            raise ValueError(f"edge {edge} has a repeated vertex")
        if any(not 0 <= v < n for v in edge):
            raise ValueError(f"edge {edge} has a vertex out of range [0, {n})")
        key = tuple(sorted(edge))
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        seen.add(key)
        tuples.extend(permutations(edge))
    return Relation.from_tuples((n,) * r, tuples)


def extract_multipartite(
    edges: Sequence[Sequence[int]],
    n: int,
    r: int,
    shape: Sequence[int],
    strategy: str = "exhaustive",
    budget: int = EXHAUSTIVE_BUDGET,
    alpha=None,
    theta=None,
    seed: int = 0,
) -> ExtractionResult:
    """Extract a complete r-partite subgraph with prescribed class sizes.

    Runs box extraction on the ordered-edge relation.  Parts come out
    pairwise disjoint automatically: a tuple with a repeated vertex never
    enters the relation, so overlapping parts would invalidate the box.
    """
    relation = hypergraph_to_relation(edges, n, r)
    result = extract_box(
        relation, shape, alpha=alpha, theta=theta, strategy=strategy, budget=budget, seed=seed
    )
    parts = result.box.parts
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            overlap = set(parts[i]) & set(parts[j])
            if overlap:
                raise AssertionError(f"internal error: parts {i} and {j} overlap on {overlap}")
    return result


def verify_guarantee(
    relation: Relation,
    shape: Sequence[int],
    alpha=None,
    theta=None,
    budget: int = EXHAUSTIVE_BUDGET,
):
    """Exhaustively extract and compare the achieved t against both floors.

    (a) the unconditional averaging floor ceil(S_L / N), which must hold
    whenever S_L > 0, and (b) the conditional guarantee t > n^(1 - alpha^(r-2))
    with its hypothesis flags.  Returns a bound report whose details carry
    the measured t, the floor, and the floor check.
    """
    shp = check_shape(shape, relation.r - 1)
    al = alpha if alpha is not None else infer_alpha(relation)
    result = extract_box(relation, shp, alpha=alpha, theta=theta, strategy="exhaustive", budget=budget)
    floor = result.averaging_floor
    assert floor is not None
    floor_ceiling = -(-floor.numerator // floor.denominator)
    floor_ok = True if floor == 0 else result.t >= floor_ceiling
    n = min(relation.axis_sizes)
    if relation.r >= 3:
        report = bounds_mod.thm3_check(
            relation.r, n=n, alpha=float(al), shape=shp, measured_t=result.t
        )
    else:
        # bipartite analogue: last part exceeds n^(1-alpha) whenever
        # (ln n)^(-1/2) <= alpha < 1/2 and the prefix size fits the window
        import math

        params = bounds_mod.r2_remark_params(n=n, alpha=float(al))
        hyp = dict(params.hypotheses)
        hyp["shape_window"] = 1 <= shp[0] <= max(params.s, 0)
        lhs_log = math.log(result.t) if result.t > 0 else float("-inf")
        report = bounds_mod.BoundReport(
            name="r2_remark",
            r=2,
            ln_n=math.log(n),
            n=n,
            alpha=float(al),
            shape=shp,
            hypotheses=hyp,
            hypotheses_ok=all(hyp.values()),
            lhs_log=lhs_log,
            rhs_log=params.t_log,
            strict=True,
            verdict=bounds_mod.HOLDS if lhs_log > params.t_log else bounds_mod.FAILS,
        )
    report.details.update(
        {
            "t": result.t,
            "averaging_floor": str(floor),
            "averaging_floor_ceiling": floor_ceiling,
            "averaging_floor_ok": floor_ok,
            "theta": str(result.theta),
            "peeled": result.peeled,
            "alpha_source": "supplied" if alpha is not None else "inferred",
        }
    )
    return report
