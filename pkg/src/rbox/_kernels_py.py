"""Pure-Python enumeration kernels.

Two interchangeable representations of the same recursion:

* dense: the relation lives in one big integer, one bit per cell of the
  product space, fibers are bit slices and intersections are ``&``;
* sparse: the relation is a set of flattened codes, fibers are bucketed
  sets and intersections are set intersections.

Both walk candidate parts axis by axis in lexicographic order and prune a
partial part as soon as its running common-extension set is too small to
complete the remaining axes.  The compiled kernel mirrors the dense walk
step for step, so counts, maximizers and the ``visited`` diagnostics agree
across backends.

Tuple encoding: code(t) = sum_i t[i] * prod(sizes[i+1:]), last axis least
significant; ascending codes equal lexicographic tuple order.
"""

from __future__ import annotations

from math import comb


def _suffix_products(axis_sizes):
    r = len(axis_sizes)
    suffix = [1] * r
    for i in range(r - 2, -1, -1):
        suffix[i] = suffix[i + 1] * axis_sizes[i + 1]
    return suffix


def _needs_after(shape, suffix):
    """needs[i] = product of shape[i+1:], clamped to the suffix space size.

    A fiber whose extension set is smaller than needs[i] cannot host the
    remaining part sizes, so it is never a candidate.  Clamping keeps the
    numbers machine-sized when callers pass absurd shapes.
    """
    r = len(shape)
    needs = [1] * r
    for i in range(r - 2, -1, -1):
        needs[i] = min(needs[i + 1] * shape[i + 1], suffix[i] + 1)
    return needs


def count_boxes_dense(axis_sizes, encoded, shape):
    """Exact number of boxes of the given shape; returns (count, visited).

    ``visited`` counts complete prefix selections that reached the final
    binomial evaluation (1 for unary relations).
    """
    r = len(axis_sizes)
    if r == 1:
        return comb(len(encoded), shape[0]), 1
    suffix = _suffix_products(axis_sizes)
    needs = _needs_after(shape, suffix)
    mask = 0
    for e in encoded:
        mask |= 1 << e
    s_last = shape[r - 1]
    visited = 0

    def level(i, cur):
        nonlocal visited
        p = suffix[i]
        lim = (1 << p) - 1
        need = needs[i]
        fibs = []
        for u in range(axis_sizes[i]):
            f = (cur >> (u * p)) & lim
            if f.bit_count() >= need:
                fibs.append(f)
        s = shape[i]
        if len(fibs) < s:
            return 0
        total = 0

        def choose(start, remaining, acc):
            nonlocal total, visited
            for j in range(start, len(fibs) - remaining + 1):
                f = acc & fibs[j]
                if f.bit_count() < need:
                    continue
                if remaining == 1:
                    if i == r - 2:
                        visited += 1
                        total += comb(f.bit_count(), s_last)
                    else:
                        total += level(i + 1, f)
                else:
                    choose(j + 1, remaining - 1, f)

        choose(0, s, lim)
        return total

    return level(0, mask), visited


def best_rectangle_dense(axis_sizes, encoded, prefix_shape):
    """Maximize the common-extension count over prefix-shaped rectangles.

    Returns (best_d, best_parts, best_neighborhood, visited) where the parts
    are the lexicographically least maximizer; best_d = 0 with parts None
    means no rectangle has a nonempty common extension.
    """
    r = len(axis_sizes)
    if r < 2:
        raise ValueError("rectangle search requires arity >= 2")
    suffix = _suffix_products(axis_sizes)
    base = _needs_after(tuple(prefix_shape) + (1,), suffix)
    mask = 0
    for e in encoded:
        mask |= 1 << e
    visited = 0
    best_d = 0
    best_parts = None
    best_mask = 0
    chosen = [[0] * prefix_shape[i] for i in range(r - 1)]

    def level(i, cur):
        nonlocal visited, best_d, best_parts, best_mask
        p = suffix[i]
        lim = (1 << p) - 1
        need = base[i]
        fibs = []
        for u in range(axis_sizes[i]):
            f = (cur >> (u * p)) & lim
            if f.bit_count() >= need:
                fibs.append((u, f))
        s = prefix_shape[i]
        if len(fibs) < s:
            return

        def choose(start, remaining, acc):
            nonlocal visited, best_d, best_parts, best_mask
            for j in range(start, len(fibs) - remaining + 1):
                f = acc & fibs[j][1]
                if f.bit_count() < need * (best_d + 1):
                    continue
                chosen[i][s - remaining] = fibs[j][0]
                if remaining == 1:
                    if i == r - 2:
                        visited += 1
                        d = f.bit_count()
                        if d > best_d:
                            best_d = d
                            best_parts = tuple(tuple(chosen[k][: prefix_shape[k]]) for k in range(r - 1))
                            best_mask = f
                    else:
                        level(i + 1, f)
                else:
                    choose(j + 1, remaining - 1, f)

        choose(0, s, lim)

    level(0, mask)
    neigh = _bits(best_mask) if best_parts is not None else ()
    return best_d, best_parts, neigh, visited


def _bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def count_boxes_sparse(axis_sizes, encoded, shape):
    """Set-based twin of :func:`count_boxes_dense` for huge product spaces."""
    r = len(axis_sizes)
    if r == 1:
        return comb(len(encoded), shape[0]), 1
    suffix = _suffix_products(axis_sizes)
    needs = _needs_after(shape, suffix)
    s_last = shape[r - 1]
    visited = 0

    def level(i, codes):
        nonlocal visited
        p = suffix[i]
        need = needs[i]
        buckets = {}
        for c in codes:
            buckets.setdefault(c // p, set()).add(c % p)
        fibs = [f for _, f in sorted(buckets.items()) if len(f) >= need]
        s = shape[i]
        if len(fibs) < s:
            return 0
        total = 0

        def choose(start, remaining, acc):
            nonlocal total, visited
            for j in range(start, len(fibs) - remaining + 1):
                f = acc & fibs[j] if acc is not None else fibs[j]
                if len(f) < need:
                    continue
                if remaining == 1:
                    if i == r - 2:
                        visited += 1
                        total += comb(len(f), s_last)
                    else:
                        total += level(i + 1, f)
                else:
                    choose(j + 1, remaining - 1, f)

        choose(0, s, None)
        return total

    return level(0, set(encoded)), visited


def best_rectangle_sparse(axis_sizes, encoded, prefix_shape):
    """Set-based twin of :func:`best_rectangle_dense`."""
    r = len(axis_sizes)
    if r < 2:
        raise ValueError("rectangle search requires arity >= 2")
    suffix = _suffix_products(axis_sizes)
    base = _needs_after(tuple(prefix_shape) + (1,), suffix)
    visited = 0
    best_d = 0
    best_parts = None
    best_set: frozenset[int] = frozenset()
    chosen = [[0] * prefix_shape[i] for i in range(r - 1)]

    def level(i, codes):
        nonlocal visited, best_d, best_parts, best_set
        p = suffix[i]
        need = base[i]
        buckets = {}
        for c in codes:
            buckets.setdefault(c // p, set()).add(c % p)
        fibs = [(u, f) for u, f in sorted(buckets.items()) if len(f) >= need]
        s = prefix_shape[i]
        if len(fibs) < s:
            return

        def choose(start, remaining, acc):
            nonlocal visited, best_d, best_parts, best_set
            for j in range(start, len(fibs) - remaining + 1):
                f = acc & fibs[j][1] if acc is not None else fibs[j][1]
                if len(f) < need * (best_d + 1):
                    continue
                chosen[i][s - remaining] = fibs[j][0]
                if remaining == 1:
                    if i == r - 2:
                        visited += 1
                        d = len(f)
                        if d > best_d:
                            best_d = d
                            best_parts = tuple(tuple(chosen[k][: prefix_shape[k]]) for k in range(r - 1))
                            best_set = frozenset(f)
                    else:
                        level(i + 1, f)
                else:
                    choose(j + 1, remaining - 1, f)

        choose(0, s, None)

    level(0, set(encoded))
    neigh = tuple(sorted(best_set)) if best_parts is not None else ()
    return best_d, best_parts, neigh, visited


# names the backend selector looks for
count_boxes_flat = count_boxes_dense
best_rectangle_flat = best_rectangle_dense
