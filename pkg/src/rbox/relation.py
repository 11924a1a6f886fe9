"""Core data model: r-dimensional 0-1 relations and their neighborhood operators.

A relation is a finite subset of a product U_1 x ... x U_r where axis i
carries the indices 0..n_i-1.  Everything downstream (counting, peeling,
extraction) is built from the operators in this module: the prefix
projection, per-vertex fibers on the last axis, common neighborhoods of
rectangles, and the clipped generalized binomial that drives the convexity
bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from numbers import Integral
from typing import Iterable, Sequence

__all__ = [
    "Relation",
    "Box",
    "Rectangle",
    "Shape",
    "check_shape",
    "project_last",
    "fiber",
    "last_axis_degrees",
    "common_neighborhood",
    "rect_support_count",
    "gen_binomial",
    "validate_box",
]

Shape = tuple[int, ...]


def check_shape(shape: Sequence[int], arity: int | None = None) -> Shape:
    """Normalize and validate a shape (vector of requested part sizes)."""
    out = tuple(int(s) for s in shape)
    if not out:
        raise ValueError("shape must have at least one entry")
    if any(s < 1 for s in out):
        raise ValueError(f"shape entries must be >= 1, got {out}")
    if arity is not None and len(out) != arity:
        raise ValueError(f"shape has {len(out)} entries, expected {arity}")
    return out


@dataclass(frozen=True)
class Relation:
    """A set of r-tuples over axes of sizes ``axis_sizes``, in canonical form.

    Canonical form means: tuples strictly lexicographically increasing (hence
    deduplicated), every index within its axis bound.  Equality is structural.
    Instances are immutable; the cached indices below are built lazily and
    shared by all operators, so concurrent reads are safe.
    """

    axis_sizes: tuple[int, ...]
    tuples: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.axis_sizes:
            raise ValueError("relation needs at least one axis")
        if any(n < 1 for n in self.axis_sizes):
            raise ValueError(f"axis sizes must be positive, got {self.axis_sizes}")
        r = len(self.axis_sizes)
        prev = None
        for t in self.tuples:
            if len(t) != r:
                raise ValueError(f"tuple {t} has arity {len(t)}, expected {r}")
            for i, v in enumerate(t):
                if not 0 <= v < self.axis_sizes[i]:
                    raise ValueError(f"index {v} out of bounds on axis {i} (size {self.axis_sizes[i]})")
            if prev is not None and t <= prev:
                if t == prev:
                    raise ValueError(f"duplicate tuple {t}")
                raise ValueError("tuples not in lexicographic order")
            prev = t

    @classmethod
    def from_tuples(
        cls,
        axis_sizes: Sequence[int],
        tuples: Iterable[Sequence[int]],
        *,
        dedupe: bool = False,
    ) -> "Relation":
        """Build a canonical relation from an arbitrary tuple iterable.

        Duplicates are rejected unless ``dedupe=True``; silent deduplication
        tends to hide generator bugs.
        """
        sizes = tuple(int(n) for n in axis_sizes)
        items = [tuple(int(v) for v in t) for t in tuples]
        if dedupe:
            items = list(set(items))
        else:
            seen = set()
            for t in items:
                if t in seen:
                    raise ValueError(f"duplicate tuple {t}")
                seen.add(t)
        items.sort()
        return cls(sizes, tuple(items))

    @property
    def r(self) -> int:
        """Arity (number of axes)."""
        return len(self.axis_sizes)

    @property
    def size(self) -> int:
        """Number of tuples."""
        return len(self.tuples)

    @cached_property
    def tuple_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.tuples)

    @cached_property
    def encoded(self) -> tuple[int, ...]:
        """Tuples flattened to integers, last axis least significant.

        Ascending codes follow the lexicographic order of the tuples, which
        the enumeration kernels rely on.
        """
        weights = [1] * self.r
        for i in range(self.r - 2, -1, -1):
            weights[i] = weights[i + 1] * self.axis_sizes[i + 1]
        return tuple(sum(v * w for v, w in zip(t, weights)) for t in self.tuples)

    @cached_property
    def _last_fibers(self) -> dict[int, frozenset[tuple[int, ...]]]:
        by_last: dict[int, set[tuple[int, ...]]] = {}
        for t in self.tuples:
            by_last.setdefault(t[-1], set()).add(t[:-1])
        return {v: frozenset(s) for v, s in by_last.items()}

    @cached_property
    def _prefix_fibers(self) -> dict[tuple[int, ...], frozenset[int]]:
        by_prefix: dict[tuple[int, ...], set[int]] = {}
        for t in self.tuples:
            by_prefix.setdefault(t[:-1], set()).add(t[-1])
        return {p: frozenset(s) for p, s in by_prefix.items()}

    def __contains__(self, t: object) -> bool:
        return t in self.tuple_set


@dataclass(frozen=True)
class Box:
    """A product of vertex subsets, one sorted nonempty part per axis.

    A box with k = r-1 parts plays the role of a rectangle: the prefix of a
    full box whose last part is a common neighborhood.
    """

    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("box needs at least one part")
        for i, part in enumerate(self.parts):
            if not part:
                raise ValueError(f"part {i} is empty")
            if any(b <= a for a, b in zip(part, part[1:])):
                raise ValueError(f"part {i} must be strictly increasing, got {part}")
            if part[0] < 0:
                raise ValueError(f"part {i} contains a negative index")

    @classmethod
    def of(cls, *parts: Sequence[int]) -> "Box":
        return cls(tuple(tuple(int(v) for v in p) for p in parts))

    @property
    def shape(self) -> Shape:
        return tuple(len(p) for p in self.parts)


Rectangle = Box


def project_last(relation: Relation) -> Relation:
    """Drop the last axis: the set of prefixes that extend to the relation."""
    if relation.r < 2:
        raise ValueError("cannot project unary relation")
    prefixes = sorted({t[:-1] for t in relation.tuples})
    return Relation(relation.axis_sizes[:-1], tuple(prefixes))


def fiber(relation: Relation, v: int) -> Relation:
    """The (r-1)-ary relation of prefixes whose extension by ``v`` is present."""
    if relation.r < 2:
        raise ValueError("fiber requires arity >= 2")
    if not 0 <= v < relation.axis_sizes[-1]:
        raise ValueError(f"index {v} out of bounds on last axis (size {relation.axis_sizes[-1]})")
    prefixes = sorted(relation._last_fibers.get(v, frozenset()))
    return Relation(relation.axis_sizes[:-1], tuple(prefixes))


def last_axis_degrees(relation: Relation) -> list[int]:
    """Degree of every last-axis vertex: the size of its fiber."""
    if relation.r < 1:
        raise ValueError("relation needs at least one axis")
    deg = [0] * relation.axis_sizes[-1]
    for t in relation.tuples:
        deg[t[-1]] += 1
    return deg


def common_neighborhood(relation: Relation, rect: Box) -> tuple[int, ...]:
    """Last-axis vertices that extend every prefix tuple of the rectangle.

    The rectangle must have r-1 parts.  An empty intersection is a valid
    result, not an error.
    """
    if len(rect.parts) != relation.r - 1:
        raise ValueError(f"rectangle has {len(rect.parts)} parts, expected {relation.r - 1}")
    for i, part in enumerate(rect.parts):
        if part[-1] >= relation.axis_sizes[i]:
            raise ValueError(f"rectangle part {i} exceeds axis size {relation.axis_sizes[i]}")
    fibers = relation._prefix_fibers
    common: frozenset[int] | None = None
    for prefix in product(*rect.parts):
        ext = fibers.get(prefix)
        if not ext:
            return ()
        common = ext if common is None else common & ext
        if not common:
            return ()
    assert common is not None
    return tuple(sorted(common))


def rect_support_count(relation: Relation, v: int, shape: Sequence[int]) -> int:
    """Number of rectangles of the given shape whose common neighborhood has ``v``.

    Equals the box count of the fiber of ``v``: a rectangle extends to ``v``
    exactly when it is a box of that fiber.  The naive enumeration oracle
    cross-checks this identity in the tests.
    """
    from .counting import count_boxes

    shp = check_shape(shape, relation.r - 1)
    return count_boxes(fiber(relation, v), shp).count


def gen_binomial(s: int, x):
    """Generalized binomial coefficient C(x, s), clipped to 0 for x <= s-1.

    On the positive branch this is the falling factorial
    x (x-1) ... (x-s+1) / s!.  The clip makes the function convex and
    non-decreasing on the whole real line, which is what the counting lower
    bounds need.  The numeric kind of ``x`` is preserved: int -> int,
    Fraction -> Fraction, float -> float (relative error <= 1e-12 for
    x <= 1e6).
    """
    if not isinstance(s, Integral) or s < 1:
        raise ValueError(f"s must be a positive integer, got {s!r}")
    s = int(s)
    if isinstance(x, bool):
        raise TypeError("x must be a number, not bool")
    if isinstance(x, Integral):
        x = int(x)
        return 0 if x <= s - 1 else math.comb(x, s)
    if isinstance(x, Fraction):
        if x <= s - 1:
            return Fraction(0)
        num = Fraction(1)
        for i in range(s):
            num *= x - i
        return num / math.factorial(s)
    x = float(x)
    if x <= s - 1:
        return 0.0
    num = 1.0
    for i in range(s):
        num *= x - i
    return num / math.factorial(s)


def validate_box(relation: Relation, box: Box) -> tuple[bool, tuple[int, ...] | None]:
    """Check that every tuple of the box's product lies in the relation.

    Returns ``(True, None)`` or ``(False, first_violating_tuple)`` with the
    violator taken in lexicographic order.  A tuple with an out-of-bounds
    index is a violator by definition (it cannot be in the relation).
    """
    if len(box.parts) != relation.r:
        raise ValueError(f"box has {len(box.parts)} parts, expected {relation.r}")
    members = relation.tuple_set
    for t in product(*box.parts):
        if t not in members:
            return False, t
    return True, None
