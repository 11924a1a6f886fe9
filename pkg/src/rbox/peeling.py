"""Fixed-threshold degree peeling on the last axis.

Repeatedly remove a last-axis vertex whose degree (fiber size) is below the
threshold, together with all tuples ending at it, until every survivor
meets the threshold.  Removing a last-axis vertex only deletes its own
tuples, so the surviving core is the unique maximal one and is independent
of removal order; the scan below still re-checks until a full pass makes no
removal, exactly as the procedure is stated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .relation import Relation, last_axis_degrees

__all__ = ["PeelResult", "peel", "default_theta", "infer_alpha"]


@dataclass(frozen=True)
class PeelResult:
    """Survivors on the last axis, the surviving relation, and the trace.

    ``removed`` lists (vertex, degree at removal time) in removal order.
    """

    survivors: tuple[int, ...]
    core: Relation
    removed: tuple[tuple[int, int], ...]
    theta: float | Fraction

    @property
    def removed_count(self) -> int:
        return len(self.removed)


def peel(relation: Relation, theta) -> PeelResult:
    """Peel the last axis at threshold ``theta``.

    Degrees are compared with ``<`` using exact integer-versus-rational
    comparison (Python compares int against Fraction and float exactly), so
    rational thresholds never suffer float ties.  The survivor set may be
    empty.  Scan order is increasing vertex index, repeated to fixpoint.
    """
    if relation.r < 2:
        raise ValueError("peeling requires arity >= 2")
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    n_last = relation.axis_sizes[-1]
    alive = [True] * n_last
    tuples = list(relation.tuples)
    removed: list[tuple[int, int]] = []
    while True:
        deg = [0] * n_last
        for t in tuples:
            deg[t[-1]] += 1
        doomed = [v for v in range(n_last) if alive[v] and deg[v] < theta]
        if not doomed:
            break
        for v in doomed:
            alive[v] = False
            removed.append((v, deg[v]))
        gone = set(doomed)
        tuples = [t for t in tuples if t[-1] not in gone]
    core = Relation(relation.axis_sizes, tuple(tuples))
    survivors = tuple(v for v in range(n_last) if alive[v])
    return PeelResult(survivors=survivors, core=core, removed=tuple(removed), theta=theta)


def infer_alpha(relation: Relation) -> Fraction:
    """Density of the relation over its full product space, exact."""
    volume = 1
    for n in relation.axis_sizes:
        volume *= n
    return Fraction(relation.size, volume)


def default_theta(relation: Relation, alpha=None):
    """The canonical threshold (alpha/2) * n^(r-1), with n the smallest axis.

    When ``alpha`` is omitted it is inferred as the exact density
    |M| / prod(axis_sizes); an empty relation then has no sensible
    threshold and is an error.  Returns ``(theta, alpha)`` so callers can
    record which density the threshold came from.
    """
    if alpha is None:
        if relation.size == 0:
            raise ValueError("empty relation: supply alpha explicitly")
        alpha = infer_alpha(relation)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    n = min(relation.axis_sizes)
    theta = alpha / 2 * n ** (relation.r - 1) if isinstance(alpha, float) else Fraction(alpha, 2) * n ** (relation.r - 1)
    return theta, alpha


def degree_floor(result: PeelResult) -> int | None:
    """Smallest surviving degree, or None when nothing survived."""
    if not result.survivors:
        return None
    deg = last_axis_degrees(result.core)
    return min(deg[v] for v in result.survivors)


def mass_removed(relation: Relation, result: PeelResult) -> int:
    """Tuples lost to peeling; strictly below theta * removals by design."""
    return relation.size - result.core.size
