"""Alphabets, finite patterns, syntaxes and the structural reductions on them.

Coordinates are integer tuples; axis 0 is horizontal (columns) and axis 1
vertical (rows). Symbols are interned to dense integer ids in alphabet order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

Cell = tuple[int, ...]

DEFAULT_STATE_LIMIT = 2**24


class SFTError(ValueError):
    pass


class AlphabetMismatch(SFTError):
    pass


class DimensionMismatch(SFTError):
    pass


class BudgetExceeded(RuntimeError):
    """A configured explosion limit would be exceeded."""


def _add(u: Cell, v: Cell) -> Cell:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u: Cell, v: Cell) -> Cell:
    return tuple(a - b for a, b in zip(u, v))


def rowmajor(cells: Iterable[Cell]) -> list[Cell]:
    """Sort cells with the last axis most significant (rows, then columns)."""
    return sorted(cells, key=lambda c: c[::-1])


def box(sides: Sequence[int], origin: Cell | None = None) -> list[Cell]:
    """Cells of the box ``origin + prod(range(side))`` in row-major order."""
    origin = origin or (0,) * len(sides)
    cells = itertools.product(*(range(o, o + s) for o, s in zip(origin, sides)))
    return rowmajor(cells)


def rect(*sides: int) -> list[Cell]:
    """``{1..n1} x ... x {1..nd}`` in row-major order."""
    return box(sides, (1,) * len(sides))


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise SFTError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise SFTError(f"duplicate symbols in alphabet {self.symbols}")
        object.__setattr__(self, "symbols", tuple(str(s) for s in self.symbols))

    @cached_property
    def _ids(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def index(self, symbol: str | int) -> int:
        if isinstance(symbol, int):
            if not 0 <= symbol < len(self.symbols):
                raise AlphabetMismatch(f"symbol id {symbol} out of range")
            return symbol
        try:
            return self._ids[symbol]
        except KeyError:
            raise AlphabetMismatch(f"symbol {symbol!r} not in alphabet {self.symbols}") from None

    def name(self, i: int) -> str:
        return self.symbols[i]


@dataclass(frozen=True)
class Shape:
    offsets: frozenset[Cell]

    def __post_init__(self):
        offs = frozenset(tuple(int(x) for x in o) for o in self.offsets)
        if not offs:
            raise SFTError("shape must be nonempty")
        dims = {len(o) for o in offs}
        if len(dims) != 1 or 0 in dims:
            raise DimensionMismatch("shape offsets must share a dimension d >= 1")
        object.__setattr__(self, "offsets", offs)

    @property
    def dim(self) -> int:
        return len(next(iter(self.offsets)))

    @property
    def lower(self) -> Cell:
        return tuple(min(o[i] for o in self.offsets) for i in range(self.dim))

    @property
    def sides(self) -> tuple[int, ...]:
        lo = self.lower
        return tuple(max(o[i] for o in self.offsets) - lo[i] + 1 for i in range(self.dim))

    @property
    def diameter(self) -> int:
        return max(self.sides) - 1

    def __len__(self):
        return len(self.offsets)

    def __iter__(self):
        return iter(rowmajor(self.offsets))


class Pattern:
    """A finite coloring of a set of lattice cells by alphabet symbols."""

    __slots__ = ("alphabet", "_cells", "_hash")

    def __init__(self, alphabet: Alphabet, cells: Mapping[Cell, str | int]):
        self.alphabet = alphabet
        data = {tuple(c): alphabet.index(v) for c, v in cells.items()}
        if len({len(c) for c in data}) > 1:
            raise DimensionMismatch("pattern cells of mixed dimension")
        self._cells = data
        self._hash = None

    @classmethod
    def from_rows(cls, alphabet: Alphabet, rows: Sequence[Sequence[str]], origin: Cell = (1, 1)) -> Pattern:
        """Build a 2D pattern from rows given top row first."""
        h = len(rows)
        cells = {}
        for r, row in enumerate(rows):
            y = origin[1] + h - 1 - r
            for x, sym in enumerate(row):
                cells[(origin[0] + x, y)] = sym
        return cls(alphabet, cells)

    @classmethod
    def from_word(cls, alphabet: Alphabet, word: Sequence[str], start: int = 1) -> Pattern:
        return cls(alphabet, {(start + i,): s for i, s in enumerate(word)})

    @classmethod
    def from_grid_text(cls, alphabet: Alphabet, text: str, origin: Cell | None = None) -> Pattern:
        """Parse the grid text format: rows top first, symbols space-separated.

        A single line is read as a 1D word unless ``origin`` is 2D.
        """
        rows = [line.split() for line in text.strip().splitlines() if line.strip()]
        if len(rows) == 1 and (origin is None or len(origin) == 1):
            return cls.from_word(alphabet, rows[0], (origin or (1,))[0])
        return cls.from_rows(alphabet, rows, origin or (1, 1))

    @property
    def domain(self) -> frozenset[Cell]:
        return frozenset(self._cells)

    @property
    def dim(self) -> int:
        return len(next(iter(self._cells))) if self._cells else 0

    def __len__(self):
        return len(self._cells)

    def __getitem__(self, cell: Cell) -> int:
        return self._cells[tuple(cell)]

    def __contains__(self, cell) -> bool:
        return tuple(cell) in self._cells

    def get(self, cell: Cell, default=None):
        return self._cells.get(tuple(cell), default)

    def name(self, cell: Cell) -> str:
        return self.alphabet.name(self[cell])

    def items(self):
        return self._cells.items()

    def as_dict(self) -> dict[Cell, int]:
        return dict(self._cells)

    def restrict(self, cells: Iterable[Cell]) -> Pattern:
        return Pattern(self.alphabet, {c: self._cells[c] for c in map(tuple, cells) if c in self._cells})

    def translate(self, v: Cell) -> Pattern:
        return Pattern(self.alphabet, {_add(c, v): s for c, s in self._cells.items()})

    def union(self, other: Pattern) -> Pattern:
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch("union of patterns over different alphabets")
        merged = dict(self._cells)
        for c, s in other.items():
            if merged.setdefault(c, s) != s:
                raise SFTError(f"patterns disagree at {c}")
        return Pattern(self.alphabet, merged)

    def lower(self) -> Cell:
        d = self.dim
        return tuple(min(c[i] for c in self._cells) for i in range(d))

    def canonical(self) -> tuple:
        """Translation-invariant key: cells shifted so the lower corner is 0."""
        lo = self.lower()
        return tuple(sorted((_sub(c, lo), s) for c, s in self._cells.items()))

    def congruent(self, other: Pattern) -> bool:
        return self.alphabet == other.alphabet and self.canonical() == other.canonical()

    def appears_at(self, other: Pattern, u: Cell) -> bool:
        """True iff this pattern shifted by ``u`` agrees with ``other`` on its domain."""
        return all(other.get(_add(c, u)) == s for c, s in self._cells.items())

    def to_grid_text(self, fill: str = ".") -> str:
        if self.dim == 1:
            xs = sorted(c[0] for c in self._cells)
            return " ".join(self.alphabet.name(self._cells[(x,)]) if (x,) in self._cells else fill
                            for x in range(xs[0], xs[-1] + 1))
        if self.dim != 2:
            raise DimensionMismatch("grid text is defined for d = 1, 2")
        lo = self.lower()
        hi = tuple(max(c[i] for c in self._cells) for i in range(2))
        lines = []
        for y in range(hi[1], lo[1] - 1, -1):
            row = []
            for x in range(lo[0], hi[0] + 1):
                s = self._cells.get((x, y))
                row.append(fill if s is None else self.alphabet.name(s))
            lines.append(" ".join(row))
        return "\n".join(lines)

    def __eq__(self, other):
        return isinstance(other, Pattern) and self.alphabet == other.alphabet and self._cells == other._cells

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.alphabet, frozenset(self._cells.items())))
        return self._hash

    def __repr__(self):
        return f"Pattern({len(self._cells)} cells, d={self.dim})"


@dataclass(frozen=True)
class Syntax:
    """A finite shape with an allowed (or forbidden) set of shape-patterns.

    ``offsets`` are normalized so their lower corner is the origin and sorted
    row-major; each entry of ``table`` lists symbol ids in that order.
    """

    alphabet: Alphabet
    offsets: tuple[Cell, ...]
    mode: str
    table: frozenset[tuple[int, ...]]

    def __post_init__(self):
        if self.mode not in ("allowed", "forbidden"):
            raise SFTError(f"unknown syntax mode {self.mode!r}")
        k = len(self.alphabet)
        for t in self.table:
            if len(t) != len(self.offsets) or any(not 0 <= s < k for s in t):
                raise SFTError(f"malformed syntax pattern {t}")

    @classmethod
    def build(cls, alphabet: Alphabet | Sequence[str], offsets: Iterable[Cell], mode: str,
              patterns: Iterable[Mapping[Cell, str | int] | Sequence[str | int]]) -> Syntax:
        """Normalize raw offsets and patterns (dicts keyed by offset, or sequences
        in the order the offsets were given)."""
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(tuple(alphabet))
        raw = [tuple(o) for o in offsets]
        shape = Shape(frozenset(raw))
        lo = shape.lower
        norm = rowmajor({_sub(o, lo) for o in raw})
        pos = {o: i for i, o in enumerate(norm)}
        table = set()
        for p in patterns:
            if isinstance(p, Pattern):
                p = dict(p.items())
            if isinstance(p, Mapping):
                # allow patterns given at any translate of the shape
                plo = tuple(min(c[i] for c in p) for i in range(shape.dim))
                items = {_sub(tuple(c), plo): v for c, v in p.items()}
            else:
                if len(p) != len(raw):
                    raise SFTError("pattern length does not match shape")
                items = {_sub(o, lo): v for o, v in zip(raw, p)}
            if set(items) != set(norm):
                raise SFTError(f"pattern domain {sorted(items)} is not congruent to the shape")
            row = [0] * len(norm)
            for c, v in items.items():
                row[pos[c]] = alphabet.index(v)
            table.add(tuple(row))
        return cls(alphabet, tuple(norm), mode, frozenset(table))

    @property
    def dim(self) -> int:
        return len(self.offsets[0])

    @property
    def shape(self) -> Shape:
        return Shape(frozenset(self.offsets))

    @cached_property
    def allowed(self) -> frozenset[tuple[int, ...]]:
        """Explicit allowed set over the shape (forbidden mode is complemented)."""
        if self.mode == "allowed":
            return self.table
        k, m = len(self.alphabet), len(self.offsets)
        if k**m > DEFAULT_STATE_LIMIT:
            raise BudgetExceeded(f"complementing a forbidden set over {k}^{m} shape patterns")
        return frozenset(t for t in itertools.product(range(k), repeat=m) if t not in self.table)

    def safe_table(self, inside: tuple[bool, ...]) -> frozenset[tuple[int, ...]]:
        """Inside-projections allowed together with every realizable outside part."""
        return _safe_table(self, inside)

    def is_empty_rule(self) -> bool:
        return not self.allowed

    def __repr__(self):
        return (f"Syntax(d={self.dim}, |alphabet|={len(self.alphabet)}, |shape|={len(self.offsets)}, "
                f"{self.mode} {len(self.table)})")


@lru_cache(maxsize=None)
def _safe_table(s: Syntax, inside: tuple[bool, ...]) -> frozenset[tuple[int, ...]]:
    # An outside part is "realizable" if some allowed window carries it; an
    # inside part is safe if it is allowed next to every realizable outside.
    def split(t):
        return (tuple(v for v, i in zip(t, inside) if i), tuple(v for v, i in zip(t, inside) if not i))

    pairs = [split(t) for t in s.allowed]
    outs = {o for _, o in pairs}
    seen: dict[tuple[int, ...], set] = {}
    for key, o in pairs:
        seen.setdefault(key, set()).add(o)
    return frozenset(key for key, os in seen.items() if os >= outs)


@dataclass(frozen=True)
class BlockMap:
    """A one-block map given by a symbol map between alphabets."""

    source: Alphabet
    target: Alphabet
    images: tuple[int, ...]

    @classmethod
    def from_dict(cls, source: Alphabet, target: Alphabet | Sequence[str], mapping: Mapping[str, str]) -> BlockMap:
        if not isinstance(target, Alphabet):
            target = Alphabet(tuple(target))
        missing = set(source.symbols) - set(mapping)
        if missing:
            raise SFTError(f"block map not total; missing {sorted(missing)}")
        return cls(source, target, tuple(target.index(mapping[s]) for s in source.symbols))

    def __call__(self, symbol_id: int) -> int:
        return self.images[symbol_id]


# --------------------------------------------------------------------------
# constraint filling

class Filler:
    """Backtracking search for colorings of free cells around fixed ones.

    Every translate of the shape lying inside ``free + fixed`` must be allowed.
    With ``universal=True`` every translate that meets the region but sticks
    out of it must be allowed for every outside part that some allowed window
    carries. A result then sits next to any locally admissible surrounding.
    """

    def __init__(self, s: Syntax, free: Sequence[Cell], fixed: Mapping[Cell, int] | None = None,
                 universal: bool = False):
        self.syntax = s
        self.free = [tuple(c) for c in free]
        fixed = {tuple(c): v for c, v in (fixed or {}).items()}
        self.fixed = fixed
        index = {c: i for i, c in enumerate(self.free)}
        if len(index) != len(self.free) or any(c in fixed for c in index):
            raise SFTError("free cells must be distinct and disjoint from fixed cells")
        domain = set(index) | set(fixed)
        self.upfront_ok = True
        self.checks: list[list[tuple[tuple, frozenset]]] = [[] for _ in self.free]
        seen = set()
        offsets = s.offsets
        for c in domain:
            for o in offsets:
                u = _sub(c, o)
                if u in seen:
                    continue
                seen.add(u)
                cells = [_add(u, o2) for o2 in offsets]
                inside = tuple(x in domain for x in cells)
                if all(inside):
                    table = s.allowed
                elif universal:
                    table = s.safe_table(inside)
                else:
                    continue
                src = tuple((index[x], None) if x in index else (-1, fixed[x]) for x in cells if x in domain)
                last = max(i for i, _ in src)
                if last < 0:
                    if tuple(v for _, v in src) not in table:
                        self.upfront_ok = False
                else:
                    self.checks[last].append((src, table))

    def _ok(self, i: int, vals: list[int]) -> bool:
        for src, table in self.checks[i]:
            if tuple(vals[j] if j >= 0 else v for j, v in src) not in table:
                return False
        return True

    def __iter__(self) -> Iterator[list[int]]:
        """Yield value lists (aligned with ``free``); the list is reused, copy it."""
        if not self.upfront_ok:
            return
        n = len(self.free)
        if n == 0:
            yield []
            return
        k = len(self.syntax.alphabet)
        vals = [-1] * n
        i = 0
        ok = self._ok
        while i >= 0:
            vals[i] += 1
            if vals[i] >= k:
                vals[i] = -1
                i -= 1
                continue
            if ok(i, vals):
                if i == n - 1:
                    yield vals
                else:
                    i += 1

    def first(self) -> dict[Cell, int] | None:
        for vals in self:
            return dict(zip(self.free, vals))
        return None

    def count(self, limit: int | None = None) -> int:
        c = 0
        for _ in self:
            c += 1
            if limit is not None and c > limit:
                raise BudgetExceeded(f"more than {limit} fillings")
        return c

    def patterns(self, limit: int | None = None) -> Iterator[Pattern]:
        a = self.syntax.alphabet
        c = 0
        for vals in self:
            c += 1
            if limit is not None and c > limit:
                raise BudgetExceeded(f"more than {limit} patterns")
            cells = dict(self.fixed)
            cells.update(zip(self.free, vals))
            yield Pattern(a, cells)


def _check_compatible(p: Pattern, s: Syntax):
    if p.alphabet != s.alphabet:
        raise AlphabetMismatch("pattern and syntax use different alphabets")
    if len(p) and p.dim != s.dim:
        raise DimensionMismatch(f"pattern dimension {p.dim} != syntax dimension {s.dim}")


def is_locally_admissible(p: Pattern, s: Syntax) -> bool:
    """True iff every translate of the shape inside ``p``'s domain is allowed."""
    _check_compatible(p, s)
    return Filler(s, [], p.as_dict()).upfront_ok


# --------------------------------------------------------------------------
# structural reductions

def _window_name(alphabet: Alphabet, vals: Sequence[int]) -> str:
    if len(vals) == 1:
        return alphabet.name(vals[0])
    return "[" + ",".join(alphabet.name(v) for v in vals) + "]"


@lru_cache(maxsize=64)
def recode_one_step(s: Syntax) -> tuple[Syntax, Shape]:
    """Higher-block recoding onto the unit cube shape.

    Returns the recoded syntax and the window box; new symbols are the
    locally admissible window patterns (cells in row-major order). Locally
    admissible ``{1..n}^d`` patterns of the result correspond to locally
    admissible patterns of ``s`` on ``{1..n}^d + window``.
    """
    d = s.dim
    w = tuple(max(side - 1, 1) for side in s.shape.sides)
    window = box(w)
    windows = [tuple(v) for v in Filler(s, window)]
    if not windows:
        raise SFTError("syntax allows no window pattern; nothing to recode")
    ids = {v: i for i, v in enumerate(windows)}
    alphabet = Alphabet(tuple(_window_name(s.alphabet, v) for v in windows))
    cube = box((2,) * d)
    union = box(tuple(x + 1 for x in w))
    pos = {c: i for i, c in enumerate(union)}
    table = set()
    for vals in Filler(s, union):
        key = []
        for e in cube:
            key.append(ids[tuple(vals[pos[_add(e, c)]] for c in window)])
        table.add(tuple(key))
    return Syntax(alphabet, tuple(cube), "allowed", frozenset(table)), Shape(frozenset(window))


def _pair_alphabet(a: Alphabet, b: Alphabet) -> Alphabet:
    return Alphabet(tuple(f"({x},{y})" for x in a for y in b))


def product(s1: Syntax, s2: Syntax) -> Syntax:
    """Product syntax over the pair alphabet on the common bounding box.

    Locally admissible counts factor exactly on rectangles whose sides are at
    least the common box sides.
    """
    if s1.dim != s2.dim:
        raise DimensionMismatch(f"product of {s1.dim}D and {s2.dim}D syntaxes")
    sides = tuple(max(a, b) for a, b in zip(s1.shape.sides, s2.shape.sides))
    cells = box(sides)
    t1 = [tuple(v) for v in Filler(s1, cells)]
    t2 = [tuple(v) for v in Filler(s2, cells)]
    if len(t1) * len(t2) > DEFAULT_STATE_LIMIT:
        raise BudgetExceeded("product table too large")
    k2 = len(s2.alphabet)
    table = frozenset(tuple(x * k2 + y for x, y in zip(p, q)) for p in t1 for q in t2)
    return Syntax(_pair_alphabet(s1.alphabet, s2.alphabet), tuple(cells), "allowed", table)


def lift_dimension(s: Syntax) -> Syntax:
    """Add a new last axis along which layers are independent copies of ``s``."""
    offsets = rowmajor(o + (0,) for o in s.offsets)
    order = {o + (0,): i for i, o in enumerate(s.offsets)}
    perm = [order[o] for o in offsets]
    table = frozenset(tuple(t[i] for i in perm) for t in s.table)
    return Syntax(s.alphabet, tuple(offsets), s.mode, table)


def apply_block_map(p: Pattern, m: BlockMap) -> Pattern:
    if p.alphabet != m.source:
        raise AlphabetMismatch("pattern alphabet is not the block map's source")
    return Pattern(m.target, {c: m.images[v] for c, v in p.items()})


# --------------------------------------------------------------------------
# stock syntaxes

def full_shift(k: int | Sequence[str] = 2, d: int = 1) -> Syntax:
    symbols = tuple(str(i) for i in range(k)) if isinstance(k, int) else tuple(k)
    a = Alphabet(symbols)
    return Syntax(a, ((0,) * d,), "allowed", frozenset((i,) for i in range(len(a))))


def golden_mean() -> Syntax:
    return Syntax.build(["0", "1"], [(0,), (1,)], "forbidden", [("1", "1")])


def hard_squares() -> Syntax:
    """No two 1s horizontally or vertically adjacent (2x2 window form)."""
    cells = box((2, 2))
    bad = []
    for vals in itertools.product("01", repeat=4):
        p = dict(zip(cells, vals))
        pairs = [((0, 0), (1, 0)), ((0, 1), (1, 1)), ((0, 0), (0, 1)), ((1, 0), (1, 1))]
        if any(p[a] == p[b] == "1" for a, b in pairs):
            bad.append(p)
    return Syntax.build(["0", "1"], cells, "forbidden", bad)


def constant_sft(k: int = 2, d: int = 2) -> Syntax:
    """Every unit cube is monochromatic (a reducible toy system)."""
    cells = box((2,) * d)
    return Syntax(Alphabet(tuple(str(i) for i in range(k))), tuple(cells), "allowed",
                  frozenset((i,) * len(cells) for i in range(k)))


def empty_sft(d: int = 1, k: int = 2) -> Syntax:
    return Syntax(Alphabet(tuple(str(i) for i in range(k))), ((0,) * d,), "allowed", frozenset())


BUILTINS = {
    "golden-mean": lambda *a: golden_mean(),
    "hard-squares": lambda *a: hard_squares(),
    "full-shift": lambda k="2", d="1": full_shift(int(k), int(d)),
    "constant": lambda k="2", d="2": constant_sft(int(k), int(d)),
}


def builtin(spec: str) -> Syntax:
    """``golden-mean``, ``hard-squares``, ``full-shift:K[:D]``, ``constant:K[:D]``."""
    name, *args = spec.split(":")
    if name not in BUILTINS:
        raise SFTError(f"unknown builtin syntax {name!r}")
    return BUILTINS[name](*args)


# --------------------------------------------------------------------------
# JSON definitions

def syntax_from_json(obj: Mapping) -> Syntax:
    try:
        alphabet = Alphabet(tuple(obj["alphabet"]))
        d = int(obj["dimension"])
        offsets = [tuple(o) for o in obj["shape"]]
        mode = obj.get("mode", "allowed")
        pats = [{tuple(off): sym for off, sym in p} for p in obj["patterns"]]
    except (KeyError, TypeError) as e:
        raise SFTError(f"malformed SFT definition: {e}") from None
    if any(len(o) != d for o in offsets):
        raise DimensionMismatch("shape offsets do not match the declared dimension")
    return Syntax.build(alphabet, offsets, mode, pats)


def syntax_to_json(s: Syntax) -> dict:
    a = s.alphabet
    return {
        "alphabet": list(a.symbols),
        "dimension": s.dim,
        "shape": [list(o) for o in s.offsets],
        "mode": s.mode,
        "patterns": [[[list(o), a.name(v)] for o, v in zip(s.offsets, t)] for t in sorted(s.table)],
    }


def load_syntax(path_or_builtin: str) -> Syntax:
    if path_or_builtin.startswith("builtin:"):
        return builtin(path_or_builtin[len("builtin:"):])
    with open(path_or_builtin, encoding="utf-8") as f:
        return syntax_from_json(json.load(f))
