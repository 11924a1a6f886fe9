"""Log-space evaluators and hypothesis predicates for the quantitative bounds.

Every evaluator works on the natural-log scale in double precision
(documented tolerance: 1e-9 relative on exponents), accepts either an
integer ``n`` or ``ln_n`` directly (the hypotheses force astronomically
large n long before the integers become representable), and reports each
hypothesis as a named flag.  Every comparison keeps its stated strictness
and the reports tag it, so boundary cases are visible instead of silently
decided.

Floors and ceilings of derived parameters are computed from the float value
with a 1e-12 guard band; inside the band an exact rational evaluation is
attempted (possible when alpha is a fraction and the required root of ln n
is exact), otherwise the value snaps to the nearest integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from .relation import check_shape

__all__ = [
    "HOLDS",
    "FAILS",
    "HYPOTHESES_VIOLATED",
    "BoundReport",
    "Thm1Params",
    "R2Params",
    "ClaimCheck",
    "Frontier",
    "thm1_params",
    "thm2_check",
    "thm3_check",
    "thm4_bound",
    "claim1_check",
    "claim2_check",
    "thm3_chain_check",
    "r2_remark_params",
    "feasibility_frontier",
    "log_binomial",
]

HOLDS = "holds"
FAILS = "fails"
HYPOTHESES_VIOLATED = "hypotheses_violated"

GUARD_BAND = 1e-12
# largest exponent for which we materialize an integer from exp()
_LN_INT_MAX = math.log(10) * 15


@dataclass
class BoundReport:
    """Outcome of one bound evaluation.

    ``verdict`` is decided by the log comparison when a measured quantity
    is supplied, and by the hypothesis flags alone otherwise.
    """

    name: str
    r: int
    ln_n: float
    n: int | None
    alpha: float
    shape: tuple[int, ...] | None
    hypotheses: dict[str, bool]
    hypotheses_ok: bool
    lhs_log: float | None
    rhs_log: float | None
    strict: bool
    verdict: str
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Thm1Params:
    s: int
    t: int | None
    t_log: float
    hypotheses: dict[str, bool]
    hypotheses_ok: bool


@dataclass(frozen=True)
class R2Params:
    s: int
    t_log: float
    hypotheses: dict[str, bool]
    hypotheses_ok: bool


@dataclass(frozen=True)
class ClaimCheck:
    hypothesis: bool
    conclusion: bool
    flags: dict[str, bool]
    lhs_log: float
    rhs_log: float


@dataclass(frozen=True)
class Frontier:
    target: str
    r: int
    ln_n_min: float
    n_min: int | None


def _resolve_ln(n, ln_n):
    """Exactly one of n, ln_n; returns (float ln_n, exact ln_n or None, n or None)."""
    if (n is None) == (ln_n is None):
        raise ValueError("supply exactly one of n and ln_n")
    if n is not None:
        n = int(n)
        if n < 2:
            raise ValueError(f"n must be >= 2, got {n}")
        return math.log(n), None, n
    exact = None
    if isinstance(ln_n, (int, Fraction)):
        exact = Fraction(ln_n)
    f = float(ln_n)
    if f <= 0:
        raise ValueError(f"ln_n must be positive, got {ln_n}")
    return f, exact, None


def _check_alpha(alpha) -> float:
    f = float(alpha)
    if not 0 < f <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    return f


def _int_nth_root(m: int, k: int) -> int | None:
    if m < 0:
        return None
    if m == 0:
        return 0
    x = int(round(m ** (1.0 / k)))
    for c in (x - 2, x - 1, x, x + 1, x + 2):
        if c >= 0 and c**k == m:
            return c
    return None


def _exact_root(value: Fraction, k: int) -> Fraction | None:
    num = _int_nth_root(value.numerator, k)
    if num is None:
        return None
    den = _int_nth_root(value.denominator, k)
    if den is None:
        return None
    return Fraction(num, den)


def _guarded_floor(x: float, exact=None) -> int:
    if exact is not None:
        return math.floor(exact)
    r = round(x)
    if abs(x - r) <= GUARD_BAND * max(1.0, abs(x)):
        return int(r)
    return math.floor(x)


def _guarded_ceil(x: float, exact=None) -> int:
    if exact is not None:
        return math.ceil(exact)
    r = round(x)
    if abs(x - r) <= GUARD_BAND * max(1.0, abs(x)):
        return int(r)
    return math.ceil(x)


def log_binomial(s: int, n: int | None = None, ln_n: float | None = None) -> float:
    """Natural log of C(n, s); with only ln_n given, n is treated as huge."""
    if s < 0:
        raise ValueError("s must be >= 0")
    if s == 0:
        return 0.0
    if n is not None:
        if s > n:
            return float("-inf")
        return sum(math.log(n - i) for i in range(s)) - math.lgamma(s + 1)
    if ln_n is None:
        raise ValueError("supply n or ln_n")
    return s * float(ln_n) - math.lgamma(s + 1)


def _alpha_floor_power(k: int, ln_f: float, exact_ln, alpha) -> tuple[bool, object]:
    """Flag alpha >= (ln n)^(-1/k), via x = alpha * (ln n)^(1/k) >= 1.

    Returns the flag and the product x (exact where possible) for reuse.
    """
    x_exact = None
    if isinstance(alpha, Fraction) and exact_ln is not None:
        root = _exact_root(exact_ln, k)
        if root is not None:
            x_exact = alpha * root
    if x_exact is not None:
        return x_exact >= 1, x_exact
    x = float(alpha) * ln_f ** (1.0 / k)
    if abs(x - 1.0) <= GUARD_BAND:
        return True, x
    return x >= 1.0, x


def thm1_params(r: int, n: int | None = None, ln_n=None, alpha=None) -> Thm1Params:
    """Guaranteed symmetric part sizes at density alpha.

    s = floor(alpha * (ln n)^(1/(r-1))), t = ceil(n^(1 - alpha^(r-2))),
    with hypothesis flags for (ln n)^(-1/(r-1)) <= alpha <= r^-3.  t is
    None whenever it is too large to materialize; t_log is always set.
    """
    if r < 3:
        raise ValueError("requires r >= 3; use r2_remark_params for the bipartite analogue")
    if alpha is None:
        raise ValueError("alpha is required")
    ln_f, exact_ln, n_int = _resolve_ln(n, ln_n)
    af = _check_alpha(alpha)
    lower_ok, x = _alpha_floor_power(r - 1, ln_f, exact_ln, alpha)
    if isinstance(alpha, Fraction):
        upper_ok = alpha <= Fraction(1, r**3)
    else:
        upper_ok = af <= r**-3
    s = _guarded_floor(float(x), x if isinstance(x, Fraction) else None)
    t_log = (1.0 - af ** (r - 2)) * ln_f
    t = _guarded_ceil(math.exp(t_log)) if t_log <= _LN_INT_MAX else None
    hyp = {"alpha_lower": bool(lower_ok), "alpha_upper": bool(upper_ok)}
    return Thm1Params(s=s, t=t, t_log=t_log, hypotheses=hyp, hypotheses_ok=all(hyp.values()))


def _threshold_report(
    name: str,
    r: int,
    n,
    ln_n,
    alpha,
    shape,
    measured_t,
    measured_t_log,
) -> BoundReport:
    if r < 3:
        raise ValueError("requires r >= 3")
    ln_f, exact_ln, n_int = _resolve_ln(n, ln_n)
    af = _check_alpha(alpha)
    shp = check_shape(shape, r - 1)
    lower_ok, _ = _alpha_floor_power(r - 1, ln_f, exact_ln, alpha)
    upper_ok = alpha <= Fraction(1, r**3) if isinstance(alpha, Fraction) else af <= r**-3
    prod_s = prod(shp)
    ceiling = af ** (r - 1) * ln_f
    window_ok = 1 <= prod_s and (prod_s <= ceiling or abs(prod_s - ceiling) <= GUARD_BAND * max(1.0, ceiling))
    hyp = {
        "alpha_lower": bool(lower_ok),
        "alpha_upper": bool(upper_ok),
        "product_window": bool(window_ok),
    }
    ok = all(hyp.values())
    rhs_log = (1.0 - af ** (r - 2)) * ln_f
    lhs_log = None
    if measured_t is not None:
        lhs_log = math.log(measured_t) if measured_t > 0 else float("-inf")
    elif measured_t_log is not None:
        lhs_log = float(measured_t_log)
    if lhs_log is not None:
        verdict = HOLDS if lhs_log > rhs_log else FAILS
    else:
        verdict = HOLDS if ok else HYPOTHESES_VIOLATED
    return BoundReport(
        name=name,
        r=r,
        ln_n=ln_f,
        n=n_int,
        alpha=af,
        shape=shp,
        hypotheses=hyp,
        hypotheses_ok=ok,
        lhs_log=lhs_log,
        rhs_log=rhs_log,
        strict=True,
        verdict=verdict,
        details={
            "product": prod_s,
            "product_ceiling": ceiling,
            # a floored ceiling is recorded for integer-window comparisons,
            # but the unfloored form is what the flag enforces
            "product_ceiling_floored": math.floor(ceiling),
        },
    )


def thm2_check(
    r: int,
    n: int | None = None,
    ln_n=None,
    alpha=None,
    shape: Sequence[int] = (),
    measured_t: int | None = None,
    measured_t_log: float | None = None,
) -> BoundReport:
    """Complete multipartite guarantee for dense r-uniform graphs.

    Hypotheses: (ln n)^(-1/(r-1)) <= alpha <= r^-3 and
    1 <= s_1 ... s_{r-1} <= alpha^(r-1) ln n; guaranteed last class size
    exceeds n^(1 - alpha^(r-2)) (strict).
    """
    return _threshold_report("thm2", r, n, ln_n, alpha, shape, measured_t, measured_t_log)


def thm3_check(
    r: int,
    n: int | None = None,
    ln_n=None,
    alpha=None,
    shape: Sequence[int] = (),
    measured_t: int | None = None,
    measured_t_log: float | None = None,
) -> BoundReport:
    """Box guarantee for dense relations; identical arithmetic to thm2_check.

    The density hypothesis reads |M| >= alpha n^r over the relation instead
    of an edge count over the graph.
    """
    return _threshold_report("thm3", r, n, ln_n, alpha, shape, measured_t, measured_t_log)


def thm4_alpha_floor(r: int, ln_f: float) -> float:
    """Smallest admissible density for the counting bound: 2^r e^{-(ln n)^{1/r}/r}."""
    return 2**r * math.exp(-(ln_f ** (1.0 / r)) / r)


def thm4_bound(
    r: int,
    n: int | None = None,
    ln_n=None,
    alpha=None,
    shape: Sequence[int] = (),
    count: int | None = None,
) -> BoundReport:
    """Counting lower bound: |B| >= (alpha/2^r)^(r s_1...s_r) prod C(n, s_i).

    Hypotheses: 2^r exp(-(ln n)^{1/r}/r) <= alpha <= 1 and
    1 <= s_1 ... s_r <= ln n.  When an exact ``count`` is supplied the
    verdict compares it against the bound (non-strict); otherwise the
    verdict reflects the hypotheses alone.
    """
    if r < 2:
        raise ValueError("requires r >= 2")
    ln_f, _, n_int = _resolve_ln(n, ln_n)
    af = _check_alpha(alpha)
    shp = check_shape(shape, r)
    floor_alpha = thm4_alpha_floor(r, ln_f)
    prod_s = prod(shp)
    hyp = {
        "alpha_lower": af >= floor_alpha or abs(af - floor_alpha) <= GUARD_BAND * max(1.0, floor_alpha),
        "alpha_upper": af <= 1.0,
        "product_window": 1 <= prod_s <= ln_f or abs(prod_s - ln_f) <= GUARD_BAND * max(1.0, ln_f),
    }
    ok = all(hyp.values())
    rhs_log = r * prod_s * (math.log(af) - r * math.log(2)) + sum(
        log_binomial(s, n=n_int, ln_n=ln_f if n_int is None else None) for s in shp
    )
    lhs_log = None
    if count is not None:
        lhs_log = math.log(count) if count > 0 else float("-inf")
        verdict = HOLDS if lhs_log >= rhs_log else FAILS
    else:
        verdict = HOLDS if ok else HYPOTHESES_VIOLATED
    return BoundReport(
        name="thm4",
        r=r,
        ln_n=ln_f,
        n=n_int,
        alpha=af,
        shape=shp,
        hypotheses={k: bool(v) for k, v in hyp.items()},
        hypotheses_ok=ok,
        lhs_log=lhs_log,
        rhs_log=rhs_log,
        strict=False,
        verdict=verdict,
        details={"alpha_floor": floor_alpha, "count": None if count is None else str(count)},
    )


def claim1_check(r: int, n: int | None = None, ln_n=None, alpha=None, shape: Sequence[int] = ()) -> ClaimCheck:
    """Inner step of the counting bound's induction.

    Hypothesis: the counting bound's alpha window together with
    1 <= s_1 ... s_r <= ln n.  Conclusion:
    (alpha/2) (alpha/2^r)^((r-1) s_1...s_{r-1}) n >= 2 s_r.
    The implication only holds when the last part size dominates the shape;
    prefix-heavy shapes admit genuine counterexamples (see tests), which is
    why grid verification pins the all-ones and last-heavy shapes.
    """
    if r < 2:
        raise ValueError("requires r >= 2")
    ln_f, _, _ = _resolve_ln(n, ln_n)
    af = _check_alpha(alpha)
    shp = check_shape(shape, r)
    floor_alpha = thm4_alpha_floor(r, ln_f)
    prod_all = prod(shp)
    flags = {
        "alpha_lower": af >= floor_alpha or abs(af - floor_alpha) <= GUARD_BAND * max(1.0, floor_alpha),
        "alpha_upper": af <= 1.0,
        "shape_window": 1 <= prod_all <= ln_f or abs(prod_all - ln_f) <= GUARD_BAND * max(1.0, ln_f),
    }
    prefix_prod = prod(shp[:-1]) if r > 1 else 1
    lhs_log = math.log(af / 2) + (r - 1) * prefix_prod * (math.log(af) - r * math.log(2)) + ln_f
    rhs_log = math.log(2 * shp[-1])
    return ClaimCheck(
        hypothesis=all(flags.values()),
        conclusion=lhs_log >= rhs_log,
        flags={k: bool(v) for k, v in flags.items()},
        lhs_log=lhs_log,
        rhs_log=rhs_log,
    )


def claim2_check(r: int, n: int | None = None, ln_n=None, alpha=None) -> ClaimCheck:
    """Window transfer: the extraction hypotheses imply the counting window
    one dimension down at density alpha/2."""
    if r < 3:
        raise ValueError("requires r >= 3")
    ln_f, exact_ln, _ = _resolve_ln(n, ln_n)
    af = _check_alpha(alpha)
    lower_ok, _ = _alpha_floor_power(r - 1, ln_f, exact_ln, alpha)
    upper_ok = alpha <= Fraction(1, r**3) if isinstance(alpha, Fraction) else af <= r**-3
    flags = {"alpha_lower": bool(lower_ok), "alpha_upper": bool(upper_ok)}
    lhs_log = math.log(af / 2)
    rhs_log = (r - 1) * math.log(2) - (ln_f ** (1.0 / (r - 1))) / (r - 1)
    conclusion = (lhs_log >= rhs_log or abs(lhs_log - rhs_log) <= GUARD_BAND * max(1.0, abs(rhs_log))) and af / 2 <= 1.0
    return ClaimCheck(
        hypothesis=all(flags.values()),
        conclusion=conclusion,
        flags=flags,
        lhs_log=lhs_log,
        rhs_log=rhs_log,
    )


def thm3_chain_check(r: int, n: int | None = None, ln_n=None, alpha=None, shape: Sequence[int] = ()) -> ClaimCheck:
    """Intermediate extraction bound: under the extraction hypotheses,
    (alpha/2) (alpha/2^r)^((r-1) s_1...s_{r-1}) n  >  n^(1 - alpha^(r-2))."""
    if r < 3:
        raise ValueError("requires r >= 3")
    ln_f, exact_ln, _ = _resolve_ln(n, ln_n)
    af = _check_alpha(alpha)
    shp = check_shape(shape, r - 1)
    lower_ok, _ = _alpha_floor_power(r - 1, ln_f, exact_ln, alpha)
    upper_ok = alpha <= Fraction(1, r**3) if isinstance(alpha, Fraction) else af <= r**-3
    prod_s = prod(shp)
    ceiling = af ** (r - 1) * ln_f
    window_ok = 1 <= prod_s and (prod_s <= ceiling or abs(prod_s - ceiling) <= GUARD_BAND * max(1.0, ceiling))
    flags = {
        "alpha_lower": bool(lower_ok),
        "alpha_upper": bool(upper_ok),
        "product_window": bool(window_ok),
    }
    lhs_log = math.log(af / 2) + (r - 1) * prod_s * (math.log(af) - r * math.log(2)) + ln_f
    rhs_log = (1.0 - af ** (r - 2)) * ln_f
    return ClaimCheck(
        hypothesis=all(flags.values()),
        conclusion=lhs_log > rhs_log,
        flags=flags,
        lhs_log=lhs_log,
        rhs_log=rhs_log,
    )


def r2_remark_params(n: int | None = None, ln_n=None, alpha=None) -> R2Params:
    """Bipartite analogue: s = floor(alpha^2 ln n), last class exceeds n^(1-alpha).

    Hypothesis window: (ln n)^(-1/2) <= alpha < 1/2 (upper bound strict).
    """
    if alpha is None:
        raise ValueError("alpha is required")
    ln_f, exact_ln, _ = _resolve_ln(n, ln_n)
    af = _check_alpha(alpha)
    exact = None
    if isinstance(alpha, Fraction) and exact_ln is not None:
        exact = alpha * alpha * exact_ln
    s = _guarded_floor(af * af * ln_f, exact)
    t_log = (1.0 - af) * ln_f
    lower_ok, _ = _alpha_floor_power(2, ln_f, exact_ln, alpha)
    hyp = {"alpha_lower": bool(lower_ok), "alpha_upper": af < 0.5}
    return R2Params(s=s, t_log=t_log, hypotheses=hyp, hypotheses_ok=all(hyp.values()))


def feasibility_frontier(r: int, target: str) -> Frontier:
    """Smallest n at which the named bound's alpha window is nonempty.

    For the counting bound the window admits alpha = 1 once
    ln n >= (r^2 ln 2)^r; for the extraction/graph bounds it is nonempty
    once ln n >= r^(3(r-1)).  The integer n_min is found by monotone
    bisection when it is small enough to materialize, else None.
    """
    if target == "thm4":
        if r < 2:
            raise ValueError("requires r >= 2")
        threshold = (r * r * math.log(2)) ** r

        def feasible(n: int) -> bool:
            return thm4_alpha_floor(r, math.log(n)) <= 1.0

    elif target in ("thm1", "thm3"):
        if r < 3:
            raise ValueError("requires r >= 3")
        threshold = float(r ** (3 * (r - 1)))

        def feasible(n: int) -> bool:
            return math.log(n) ** (-1.0 / (r - 1)) <= r**-3

    else:
        raise ValueError(f"unknown target {target!r}; expected thm4, thm3 or thm1")

    n_min = None
    if threshold <= _LN_INT_MAX:
        lo, hi = 2, max(4, int(math.exp(threshold)) + 10)
        while not feasible(hi):
            hi *= 2
        while lo < hi:
            mid = (lo + hi) // 2
            if feasible(mid):
                hi = mid
            else:
                lo = mid + 1
        n_min = lo
    return Frontier(target=target, r=r, ln_n_min=threshold, n_min=n_min)
