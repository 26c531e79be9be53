"""Global admissibility, lower entropy terms and the two-sided squeeze for
irreducible SFTs.

Global admissibility is never decided outright. A pattern is declared
*admissible* once the gap condition below is met, and *inadmissible* once it
fails to extend to some locally admissible symmetric cube. Compatibility is
checked as extendability to a locally admissible ``Q_probe`` pattern.

The gap condition ("every locally admissible ``b`` on ``Q_N`` is
``r``-compatible with ``a``") is first attempted with a cheap certificate: one
filling of the gap ``Q_{k+r} \\ Q_k`` that is allowed next to *every* outer
ring a locally admissible ``b`` can carry. Only if that fails are the rings
enumerated, up to ``ring_cap``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .core import DEFAULT_STATE_LIMIT, BudgetExceeded, Cell, Filler, Pattern, SFTError, Syntax, box
from .counting import count_cube
from .numerics import Interval, log2_interval


class Verdict(str, enum.Enum):
    ADMISSIBLE = "admissible"
    INADMISSIBLE = "inadmissible"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class SymCube:
    """``Q_n = {-n..n}^d``."""

    n: int
    d: int = 2

    def __post_init__(self):
        if self.n < 0 or self.d < 1:
            raise ValueError("SymCube needs n >= 0 and d >= 1")

    @property
    def size(self) -> int:
        return (2 * self.n + 1) ** self.d

    def cells(self) -> list[Cell]:
        return box((2 * self.n + 1,) * self.d, (-self.n,) * self.d)

    def __contains__(self, c) -> bool:
        return all(-self.n <= x <= self.n for x in c)


def cube_cells(n: int, d: int) -> list[Cell]:
    return SymCube(n, d).cells()


def ring_cells(inner: int, outer: int, d: int) -> list[Cell]:
    """``Q_outer \\ Q_inner`` (``inner = -1`` gives the whole cube)."""
    return [c for c in cube_cells(outer, d) if max(map(abs, c)) > inner]


def cube_radius(p: Pattern) -> int:
    """``k`` with ``domain(p) = Q_k``; raises otherwise."""
    if not len(p):
        raise SFTError("empty pattern")
    k = max(max(map(abs, c)) for c in p.domain)
    if len(p) != (2 * k + 1) ** p.dim or any(max(map(abs, c)) > k for c in p.domain):
        raise SFTError("pattern domain is not a symmetric cube Q_k")
    return k


def gap_of(N: int) -> int:
    """The integer gap ``ceil(sqrt(N))`` used by the decision procedure."""
    return math.isqrt(N - 1) + 1 if N > 0 else 0


def _extends(s: Syntax, fixed: dict[Cell, int], region: list[Cell]) -> bool:
    free = [c for c in region if c not in fixed]
    return Filler(s, free, fixed).first() is not None


def is_r_compatible(a: Pattern, b: Pattern, r: int, s: Syntax, probe: int | None = None) -> bool:
    """``a`` (on ``Q_k``) and ``b`` (on ``Q_n``) are r-compatible at probe scale:
    ``a`` together with ``b`` outside ``Q_{k+r}`` extends to a locally
    admissible ``Q_probe`` pattern."""
    k, n = cube_radius(a), cube_radius(b)
    if n < k + r + 1:
        raise SFTError(f"r-compatibility needs n >= k + r + 1 (got n={n}, k={k}, r={r})")
    probe = n if probe is None else probe
    if probe < n:
        raise SFTError("probe scale must be at least n")
    fixed = a.as_dict()
    fixed.update((c, v) for c, v in b.items() if max(map(abs, c)) > k + r)
    return _extends(s, fixed, cube_cells(probe, s.dim))


def _gap_certificate(s: Syntax, a: dict[Cell, int], k: int, r: int) -> bool:
    gap = ring_cells(k, k + r, s.dim)
    return Filler(s, gap, a, universal=True).first() is not None


def _gap_condition(s: Syntax, a: dict[Cell, int], k: int, N: int, r: int, ring_cap: int) -> bool | None:
    """Whether every locally admissible ``b`` on ``Q_N`` is r-compatible with
    ``a`` (probe ``N``). None when the ring enumeration exceeds ``ring_cap``."""
    if _gap_certificate(s, a, k, r):
        return True
    d = s.dim
    ring = ring_cells(k + r, N, d)
    inner = cube_cells(k + r, d)
    gap = ring_cells(k, k + r, d)
    for i, vals in enumerate(Filler(s, ring)):
        if i >= ring_cap:
            return None
        outer = dict(zip(ring, vals))
        if Filler(s, inner, outer).first() is None:
            continue  # not the outer ring of any locally admissible b
        fixed = dict(outer)
        fixed.update(a)
        if Filler(s, gap, fixed).first() is None:
            return False
    return True


@dataclass
class AdmissibilityOracle:
    """Memoized verdicts keyed by the pattern (verdicts never depend on budget
    except through UNDECIDED, which is not stored)."""

    syntax: Syntax
    N_max: int = 8
    ring_cap: int = 4096
    memo: dict = field(default_factory=dict)

    def decide(self, a: Pattern) -> Verdict:
        key = frozenset(a.items())
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        v = _decide(a, self.syntax, self.N_max, self.ring_cap)
        if v is not Verdict.UNDECIDED:
            self.memo.setdefault(key, v)
        return v


def _decide(a: Pattern, s: Syntax, N_max: int, ring_cap: int) -> Verdict:
    if a.alphabet != s.alphabet:
        raise SFTError("pattern and syntax alphabets differ")
    k = cube_radius(a)
    fixed = a.as_dict()
    for N in range(k + 2, N_max + 1):
        if not _extends(s, fixed, cube_cells(N, s.dim)):
            return Verdict.INADMISSIBLE
        r = gap_of(N)
        if N >= k + r + 1 and _gap_condition(s, fixed, k, N, r, ring_cap):
            return Verdict.ADMISSIBLE
    return Verdict.UNDECIDED


def decide_globally_admissible(a: Pattern, s: Syntax, N_max: int = 8, ring_cap: int = 4096) -> Verdict:
    """Search ``N = k+2 .. N_max`` for one of the two certificates."""
    return _decide(a, s, N_max, ring_cap)


@dataclass(frozen=True)
class LowerTerm:
    n: int
    k: int
    r: int
    undecided: int
    value: Interval  # log2(k) / |Q_{n+r}|


def lower_entropy_term(s: Syntax, n: int, N_max: int = 8, r_max: int = 4, ring_cap: int = 4096,
                       pattern_limit: int = 2**16, oracle: AdmissibilityOracle | None = None) -> LowerTerm:
    """``s(n) = log2 k(n) / |Q_{n+r'}|``.

    Patterns left undecided by the budget are dropped from ``k(n)``; a subset
    of pairwise compatible patterns still gives a valid lower bound.
    """
    oracle = oracle or AdmissibilityOracle(s, N_max, ring_cap)
    d = s.dim
    patterns = list(Filler(s, cube_cells(n, d)).patterns(limit=pattern_limit))
    verdicts = [oracle.decide(p) for p in patterns]
    good = [p for p, v in zip(patterns, verdicts) if v is Verdict.ADMISSIBLE]
    undecided = verdicts.count(Verdict.UNDECIDED)
    if not good:
        return LowerTerm(n, 0, 0, undecided, Interval.neg_inf())
    for r in range(r_max + 1):
        if all(_gap_condition(s, p.as_dict(), n, n + r + 1, r, ring_cap) for p in good):
            return LowerTerm(n, len(good), r, undecided, log2_interval(len(good), (2 * (n + r) + 1) ** d))
    raise BudgetExceeded(f"no gap r' <= {r_max} found for n={n}")


@dataclass(frozen=True)
class SqueezeBudget:
    k_max: int = 6
    N_max: int = 8
    r_max: int = 4
    ring_cap: int = 4096
    pattern_limit: int = 2**16
    state_limit: int = DEFAULT_STATE_LIMIT


@dataclass
class SqueezeResult:
    n: int
    s_n: Fraction
    u: Fraction
    width: Fraction
    ok: bool
    k_upper: int = 0
    k_lower: int = 0
    r: int = 0
    history: list[tuple[int, Interval, Interval | None]] = field(default_factory=list)
    note: str = ""


def entropy_to_precision(s: Syntax, n: int, budget: SqueezeBudget | None = None) -> SqueezeResult:
    """Interleave upper terms ``u_k`` and lower terms ``s(k)`` until the best
    bracket is narrower than ``1/n``.

    The bracket is (max lower so far, min upper so far), so it only shrinks.
    On budget exhaustion the best bracket is returned with ``ok=False``.
    """
    b = budget or SqueezeBudget()
    target = Fraction(1, n)
    oracle = AdmissibilityOracle(s, b.N_max, b.ring_cap)
    res = SqueezeResult(n, Fraction(0), Fraction(0), Fraction(0), False)
    best_u = best_s = None
    lower_live = True
    for k in range(1, b.k_max + 1):
        try:
            u = count_cube(s, k, b.state_limit).log2_per_site
        except BudgetExceeded as e:
            res.note = f"upper term k={k}: {e}"
            break
        if u.is_neg_inf:
            raise SFTError("empty SFT: no locally admissible cubes")
        if best_u is None or u.hi < best_u:
            best_u, res.k_upper = u.hi, k
        if best_s is not None and best_u - best_s < target:
            res.history.append((k, u, None))
            break
        lo = None
        if lower_live:
            try:
                t = lower_entropy_term(s, k, b.N_max, b.r_max, b.ring_cap, b.pattern_limit, oracle)
                lo = t.value
                if not lo.is_neg_inf and (best_s is None or lo.lo > best_s):
                    best_s, res.k_lower, res.r = lo.lo, k, t.r
            except BudgetExceeded as e:
                lower_live = False
                res.note = f"lower term k={k}: {e}"
        res.history.append((k, u, lo))
        if best_s is not None and best_u - best_s < target:
            break
    res.u = best_u if best_u is not None else Fraction(0)
    res.s_n = best_s if best_s is not None else Fraction(0)
    res.width = res.u - res.s_n
    res.ok = best_s is not None and res.width < target
    if not res.ok and not res.note:
        res.note = f"k_max={b.k_max} reached with width {float(res.width):.6f} >= 1/{n}"
    return res
