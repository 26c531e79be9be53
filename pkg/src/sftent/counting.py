"""Counting locally admissible patterns and the entropy bounds built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .core import (
    DEFAULT_STATE_LIMIT,
    BlockMap,
    BudgetExceeded,
    Cell,
    DimensionMismatch,
    Filler,
    Pattern,
    Shape,
    Syntax,
    AlphabetMismatch,
    recode_one_step,
    rect,
)
from .numerics import Interval, log2_interval
from .spectral import log2_perron


@dataclass(frozen=True)
class CountResult:
    region: tuple[int, ...]
    count: int
    log2_per_site: Interval

    @classmethod
    def of(cls, region: tuple[int, ...], count: int) -> CountResult:
        size = 1
        for n in region:
            size *= n
        return cls(region, count, log2_interval(count, size))


@dataclass
class EntropyBoundSeq:
    """Upper terms ``(n, (1/n^d) log2 N~_n)``; ``truncated`` names the limit hit."""

    terms: list[tuple[int, Interval]] = field(default_factory=list)
    truncated: str | None = None


def _region_cells(region) -> list[Cell]:
    if isinstance(region, Shape):
        return list(region)
    return [tuple(c) for c in region]


def enumerate_locally_admissible(s: Syntax, region, limit: int = DEFAULT_STATE_LIMIT) -> set[Pattern]:
    """All locally admissible colorings of ``region`` (cells or a Shape)."""
    cells = sorted(_region_cells(region), key=lambda c: c[::-1])
    if cells and len(cells[0]) != s.dim:
        raise DimensionMismatch("region dimension differs from syntax dimension")
    if len(s.alphabet) ** len(cells) > limit:
        raise BudgetExceeded(f"{len(s.alphabet)}^{len(cells)} colorings exceed the explosion limit {limit}")
    return set(Filler(s, cells).patterns())


def one_step_edges_1d(s: Syntax) -> tuple[int, list[tuple[int, int]]]:
    """Transfer graph of the one-step recoding of a 1D syntax."""
    if s.dim != 1:
        raise DimensionMismatch("1D transfer graph needs d = 1")
    if not s.allowed:
        return 0, []
    rec, _ = recode_one_step(s)
    return len(rec.alphabet), sorted(rec.table)


def count_1d(s: Syntax, n: int) -> int:
    """Number of locally admissible words of length ``n``."""
    if s.dim != 1:
        raise DimensionMismatch("count_1d needs d = 1")
    k = len(s.alphabet)
    side = s.shape.sides[0]
    if n < side:
        return k**n
    if not s.allowed:
        return 0
    rec, win = recode_one_step(s)
    n1 = n - win.sides[0] + 1
    a = len(rec.alphabet)
    if n1 == 1:
        return a
    succ = [[] for _ in range(a)]
    for x, y in rec.table:
        succ[x].append(y)
    vec = [1] * a
    for _ in range(n1 - 1):
        new = [0] * a
        for x in range(a):
            if vec[x]:
                for y in succ[x]:
                    new[y] += vec[x]
        vec = new
    return sum(vec)


def strip_edges(rec: Syntax, width: int, state_limit: int = DEFAULT_STATE_LIMIT) -> dict[int, list[int]]:
    """Row-to-row transfer of a 2D one-step (2x2 cube) syntax on rows of ``width``.

    Rows are packed base-``|alphabet|`` codes; only rows with a successor appear
    as keys. Built column by column so the work is proportional to the edges.
    """
    a = len(rec.alphabet)
    if a**width > state_limit:
        raise BudgetExceeded(f"{a}^{width} row states exceed the limit {state_limit}")
    # cube cells are row-major: (0,0) (1,0) (0,1) (1,1) -> bl br tl tr
    nxt: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for bl, br, tl, tr in rec.table:
        nxt.setdefault((bl, tl), []).append((br, tr))
    edges: dict[int, list[int]] = {}
    n_edges = 0
    stack = [(b, t, b, t, 1, 1) for b in range(a) for t in range(a)]
    while stack:
        b, t, cb, ct, depth, weight = stack.pop()
        if depth == width:
            edges.setdefault(cb, []).append(ct)
            n_edges += 1
            if n_edges > state_limit:
                raise BudgetExceeded("transfer edges exceed the state limit")
            continue
        w = weight * a
        for b2, t2 in nxt.get((b, t), ()):
            stack.append((b2, t2, cb + b2 * w, ct + t2 * w, depth + 1, w))
    for v in edges.values():
        v.sort()
    return edges


def _unconstrained(s: Syntax) -> bool:
    """True when every shape-pattern is allowed, i.e. ``s`` defines the full shift."""
    if s.mode == "forbidden":
        return not s.table
    return len(s.table) == len(s.alphabet) ** len(s.offsets)


def count_rect(s: Syntax, n: int, m: int, state_limit: int = DEFAULT_STATE_LIMIT) -> CountResult:
    """Exact number of locally admissible ``n x m`` patterns (n columns, m rows)."""
    if s.dim != 2:
        raise DimensionMismatch("count_rect needs d = 2")
    if n < 1 or m < 1:
        raise ValueError("rectangle sides must be positive")
    k = len(s.alphabet)
    sides = s.shape.sides
    if n < sides[0] or m < sides[1] or _unconstrained(s):
        return CountResult.of((n, m), k ** (n * m))
    if not s.allowed:
        return CountResult.of((n, m), 0)
    rec, win = recode_one_step(s)
    n1 = n - win.sides[0] + 1
    m1 = m - win.sides[1] + 1
    if n1 < 2 or m1 < 2:
        # too thin for the cube rule to see every overlap: count directly
        return CountResult.of((n, m), Filler(s, rect(n, m)).count(limit=state_limit))
    edges = strip_edges(rec, n1, state_limit)
    vec = {row: 1 for row in edges}
    for _ in range(m1 - 2):
        new: dict[int, int] = {}
        for row in sorted(vec):
            c = vec[row]
            for nxt in edges.get(row, ()):
                new[nxt] = new.get(nxt, 0) + c
        vec = {r: c for r, c in new.items() if r in edges}
    total = sum(c * len(edges[r]) for r, c in vec.items())
    return CountResult.of((n, m), total)


def count_cube(s: Syntax, n: int, state_limit: int = DEFAULT_STATE_LIMIT) -> CountResult:
    """``N~_n`` on ``{1..n}^d`` using the fastest exact engine for ``d``."""
    if s.dim == 1:
        return CountResult.of((n,), count_1d(s, n))
    if s.dim == 2:
        return count_rect(s, n, n, state_limit)
    if _unconstrained(s):
        return CountResult.of((n,) * s.dim, len(s.alphabet) ** (n**s.dim))
    return CountResult.of((n,) * s.dim, Filler(s, rect(*(n,) * s.dim)).count(limit=state_limit))


def upper_entropy_terms(s: Syntax, n_max: int, state_limit: int = DEFAULT_STATE_LIMIT) -> EntropyBoundSeq:
    """Terms ``(1/n^d) log2 N~_n`` for ``n = 1..n_max``; each is >= h(X).

    Stops early (``truncated`` set) when a count exceeds the state limit.
    """
    seq = EntropyBoundSeq()
    for n in range(1, n_max + 1):
        try:
            seq.terms.append((n, count_cube(s, n, state_limit).log2_per_site))
        except BudgetExceeded as e:
            seq.truncated = f"n={n}: {e}"
            break
    return seq


def sofic_image_count(s: Syntax, m: BlockMap, n: int, limit: int = DEFAULT_STATE_LIMIT) -> CountResult:
    """Distinct one-block images of the locally admissible ``F_n`` patterns."""
    if m.source != s.alphabet:
        raise AlphabetMismatch("block map source differs from the syntax alphabet")
    cells = rect(*(n,) * s.dim)
    images = set()
    for count, vals in enumerate(Filler(s, cells), 1):
        if count > limit:
            raise BudgetExceeded(f"more than {limit} locally admissible patterns")
        images.add(tuple(m.images[v] for v in vals))
    return CountResult.of((n,) * s.dim, len(images))


def spectral_entropy_1d(s: Syntax, tol=Fraction(1, 10**9)) -> Interval:
    """Enclosure of the entropy of a 1D SFT: log2 of the transfer graph's Perron root."""
    n, edges = one_step_edges_1d(s)
    return log2_perron(n, edges, Fraction(tol))


def strip_growth(s: Syntax, width: int, state_limit: int = DEFAULT_STATE_LIMIT) -> Interval:
    """log2 of the row-transfer Perron root for strips ``width`` columns wide."""
    if s.dim != 2:
        raise DimensionMismatch("strip growth needs d = 2")
    rec, win = recode_one_step(s)
    n1 = width - win.sides[0] + 1
    if n1 < 2:
        raise ValueError("strip narrower than the syntax window")
    edges = strip_edges(rec, n1, state_limit)
    nodes = sorted(set(edges) | {t for ts in edges.values() for t in ts})
    idx = {v: i for i, v in enumerate(nodes)}
    flat = [(idx[a], idx[b]) for a, bs in edges.items() for b in bs]
    return log2_perron(len(nodes), flat, Fraction(1, 10**12))


def strip_entropy_estimate(s: Syntax, width: int) -> Interval:
    """Growth-rate increment ``log2 lambda_w - log2 lambda_{w-1}``, a fast
    estimate of the 2D entropy (an approximation, not a one-sided bound)."""
    return strip_growth(s, width) - strip_growth(s, width - 1)


def free_block_lower_bound(s: Syntax, p: int, q: int, max_blocks: int = 64) -> Interval | None:
    """Certified lower bound ``log2|S| / (pq)`` from a set ``S`` of ``p x q`` blocks
    that can be placed next to each other in any arrangement.

    Only for one-step 2D syntaxes (every window meets at most 2x2 blocks).
    ``S`` is grown greedily over the locally admissible blocks. None if empty.
    """
    if s.dim != 2 or any(side > 2 for side in s.shape.sides):
        raise DimensionMismatch("free block bound needs a one-step 2D syntax")
    blocks = [tuple(v) for v in Filler(s, rect(p, q))]
    if not blocks:
        return None
    cells = rect(p, q)
    pos = {c: i for i, c in enumerate(cells)}

    def arrangement_ok(bl, br, tl, tr) -> bool:
        fixed = {}
        for (dx, dy), blk in (((0, 0), bl), ((p, 0), br), ((0, q), tl), ((p, q), tr)):
            for c, i in pos.items():
                fixed[(c[0] + dx, c[1] + dy)] = blk[i]
        return Filler(s, [], fixed).upfront_ok

    chosen: list[tuple[int, ...]] = []
    for b in blocks[:max_blocks]:
        trial = chosen + [b]
        if all(arrangement_ok(w, x, y, z) for w in trial for x in trial for y in trial for z in trial
               if b in (w, x, y, z)):
            chosen = trial
    if not chosen:
        return None
    return log2_interval(len(chosen), p * q)


def region_counts(s: Syntax, regions: Iterable[tuple[int, ...]], state_limit: int = DEFAULT_STATE_LIMIT):
    """Count results for explicit rectangle sizes (``(n,)`` in 1D, ``(n, m)`` in 2D)."""
    out = []
    for r in regions:
        if s.dim == 1:
            out.append(CountResult.of((r[0],), count_1d(s, r[0])))
        elif s.dim == 2:
            out.append(count_rect(s, r[0], r[1], state_limit))
        else:
            out.append(CountResult.of(tuple(r), Filler(s, rect(*r)).count(limit=state_limit)))
    return out
