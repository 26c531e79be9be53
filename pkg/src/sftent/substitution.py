"""Square substitution rules: block expansion, block admissibility, unique
derivation at finite depth, and the zero-entropy counting bound."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import Alphabet, BudgetExceeded, Pattern, SFTError
from .geometry import BOARD_SYMBOLS, BoardSpec
from .numerics import Interval, log2_interval

BULLET, CIRCLE = "•", "∘"
DEFAULT_CELL_LIMIT = 2**24


@dataclass(frozen=True)
class SubstitutionRule:
    """``images[a]`` is a k x k tuple-of-rows, row 0 at the bottom (y = 1)."""

    alphabet: Alphabet
    k: int
    images: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.k < 2:
            raise SFTError("expansion factor must be at least 2")
        if len(self.images) != len(self.alphabet):
            raise SFTError("every symbol needs an image")
        n = len(self.alphabet)
        for img in self.images:
            if len(img) != self.k or any(len(row) != self.k or not all(0 <= v < n for v in row) for row in img):
                raise SFTError("images must be total k x k squares over the alphabet")

    @classmethod
    def from_rows(cls, alphabet: Sequence[str] | Alphabet, images: Mapping[str, Sequence[Sequence[str]]]) -> SubstitutionRule:
        """Images given as matrices, top row first."""
        a = alphabet if isinstance(alphabet, Alphabet) else Alphabet(tuple(alphabet))
        missing = set(a.symbols) - set(images)
        if missing:
            raise SFTError(f"no image for {sorted(missing)}")
        k = len(images[a.symbols[0]])
        imgs = tuple(tuple(tuple(a.index(v) for v in row) for row in reversed(images[s])) for s in a.symbols)
        return cls(a, k, imgs)

    @property
    def table(self) -> np.ndarray:
        """``(|alphabet|, k, k)`` array indexed ``[symbol, y, x]``."""
        return np.array(self.images, dtype=np.int32)

    def image_pattern(self, symbol: str | int) -> Pattern:
        img = self.images[self.alphabet.index(symbol)]
        return Pattern(self.alphabet, {(x + 1, y + 1): v for y, row in enumerate(img) for x, v in enumerate(row)})


def two_net_rule() -> SubstitutionRule:
    return SubstitutionRule.from_rows(
        [CIRCLE, BULLET],
        {BULLET: [[CIRCLE, BULLET], [BULLET, CIRCLE]], CIRCLE: [[CIRCLE, CIRCLE], [BULLET, CIRCLE]]},
    )


BUILTIN_RULES = {"2net": two_net_rule}


def rule_from_json(obj: Mapping) -> SubstitutionRule:
    try:
        rule = SubstitutionRule.from_rows(obj["alphabet"], obj["images"])
    except (KeyError, TypeError) as e:
        raise SFTError(f"malformed substitution rule: {e}") from None
    if "k" in obj and int(obj["k"]) != rule.k:
        raise SFTError("declared k does not match the image size")
    return rule


def load_rule(spec: str) -> SubstitutionRule:
    if spec in BUILTIN_RULES:
        return BUILTIN_RULES[spec]()
    with open(spec, encoding="utf-8") as f:
        return rule_from_json(json.load(f))


def _array_pattern(a: Alphabet, arr: np.ndarray) -> Pattern:
    h, w = arr.shape
    return Pattern(a, {(x + 1, y + 1): int(arr[y, x]) for y in range(h) for x in range(w)})


@dataclass(frozen=True)
class SBlock:
    level: int
    seed: int
    grid: np.ndarray  # [y, x], y = 0 is the bottom row
    alphabet: Alphabet

    @property
    def side(self) -> int:
        return self.grid.shape[0]

    @property
    def pattern(self) -> Pattern:
        return _array_pattern(self.alphabet, self.grid)

    def cells_of(self, symbol: str | int) -> set[tuple[int, int]]:
        """1-based cells carrying ``symbol``."""
        ys, xs = np.nonzero(self.grid == self.alphabet.index(symbol))
        return {(int(x) + 1, int(y) + 1) for x, y in zip(xs, ys)}


def substitute(rule: SubstitutionRule, grid: np.ndarray) -> np.ndarray:
    h, w = grid.shape
    k = rule.k
    return rule.table[grid].transpose(0, 2, 1, 3).reshape(h * k, w * k)


def expand(rule: SubstitutionRule, seed: str | int, n: int, cell_limit: int = DEFAULT_CELL_LIMIT) -> SBlock:
    """The level-``n`` s-block of ``seed`` (``k^n`` square)."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    if rule.k ** (2 * n) > cell_limit:
        raise BudgetExceeded(f"level-{n} block has {rule.k ** (2 * n)} cells, over the limit {cell_limit}")
    s = rule.alphabet.index(seed)
    grid = np.array([[s]], dtype=np.int32)
    for _ in range(n):
        grid = substitute(rule, grid)
    return SBlock(n, s, grid, rule.alphabet)


def _pattern_array(p: Pattern) -> tuple[np.ndarray, np.ndarray]:
    """Offsets (relative to the lower corner) and values of a 2D pattern."""
    lo = p.lower()
    items = sorted(p.items())
    offs = np.array([(c[0] - lo[0], c[1] - lo[1]) for c, _ in items], dtype=np.int64)
    vals = np.array([v for _, v in items], dtype=np.int32)
    return offs, vals


def occurs_in(p: Pattern, grid: np.ndarray) -> bool:
    """Whether some translate of ``p`` agrees with ``grid`` on ``p``'s domain."""
    offs, vals = _pattern_array(p)
    h, w = grid.shape
    pw, ph = offs[:, 0].max() + 1, offs[:, 1].max() + 1
    if pw > w or ph > h:
        return False
    ok = np.ones((h - ph + 1, w - pw + 1), dtype=bool)
    for (dx, dy), v in zip(offs, vals):
        ok &= grid[dy:dy + h - ph + 1, dx:dx + w - pw + 1] == v
        if not ok.any():
            return False
    return True


def admissible_in_block(rule: SubstitutionRule, p: Pattern, search_level: int,
                        cell_limit: int = DEFAULT_CELL_LIMIT) -> bool:
    """Whether ``p`` appears in some level-``search_level`` s-block."""
    if p.alphabet != rule.alphabet:
        raise SFTError("pattern alphabet differs from the rule's")
    if p.dim != 2:
        raise SFTError("substitution patterns are two-dimensional")
    return any(occurs_in(p, expand(rule, s, search_level, cell_limit).grid) for s in range(len(rule.alphabet)))


@dataclass(frozen=True)
class Derivation:
    unique: bool
    depth: int
    witness: Pattern | None = None  # central square with two derivations
    derivations: tuple = ()


def _derivations(rule: SubstitutionRule, central: np.ndarray, origin: int, limit: int = 4) -> list[tuple[tuple[int, int], dict]]:
    """All (phase, preimage on fully covered supercells) reproducing ``central``.

    ``origin`` is the 0-based coordinate of the central square inside the
    block. A supercell only partly covered must admit at least one symbol.
    Fully covered supercells with several fitting symbols yield several
    preimages.
    """
    k = rule.k
    tab = rule.table
    size = central.shape[0]
    out = []
    for px, py in itertools.product(range(k), repeat=2):
        # supercell j covers block coords [px + jk, px + jk + k); shift to central coords
        xs = range(((origin - px) // k), ((origin + size - 1 - px) // k) + 1)
        ys = range(((origin - py) // k), ((origin + size - 1 - py) // k) + 1)
        choices: dict[tuple[int, int], list[int]] = {}
        feasible = True
        for jx in xs:
            for jy in ys:
                x0, y0 = px + jx * k - origin, py + jy * k - origin
                cx0, cx1 = max(x0, 0), min(x0 + k, size)
                cy0, cy1 = max(y0, 0), min(y0 + k, size)
                seen = central[cy0:cy1, cx0:cx1]
                sub = tab[:, cy0 - y0:cy1 - y0, cx0 - x0:cx1 - x0]
                fits = [a for a in range(len(tab)) if np.array_equal(sub[a], seen)]
                if not fits:
                    feasible = False
                    break
                if (cx1 - cx0, cy1 - cy0) == (k, k):
                    choices[(jx, jy)] = fits
            if not feasible:
                break
        if not feasible:
            continue
        keys = sorted(choices)
        # two preimages already settle ambiguity; don't expand the full product
        for combo in itertools.islice(itertools.product(*(choices[c] for c in keys)), limit):
            out.append(((px, py), dict(zip(keys, combo))))
    return out


def check_unique_derivation(rule: SubstitutionRule, depth: int, cell_limit: int = DEFAULT_CELL_LIMIT,
                            max_witness_derivations: int = 4) -> Derivation:
    """Check that the central ``(k^depth - 2k)``-square of every level-``depth``
    block has a single derivation (phase plus preimage of the fully covered
    supercells). A one-symbol rule is unique by definition."""
    if depth < 2:
        raise ValueError("depth must be at least 2")
    k = rule.k
    if len(rule.alphabet) == 1:
        return Derivation(True, depth)
    for s in range(len(rule.alphabet)):
        grid = expand(rule, s, depth, cell_limit).grid
        K = grid.shape[0]
        central = grid[k:K - k, k:K - k]
        ders = _derivations(rule, central, k)
        if len(ders) != 1:
            witness = _array_pattern(rule.alphabet, central)
            return Derivation(False, depth, witness, tuple(ders[:max_witness_derivations]))
    return Derivation(True, depth)


def zero_entropy_bound(rule: SubstitutionRule, n: int, m: int) -> Interval:
    """``((floor(n/k^m) - 2)^2 log2|S|) / n^2 + 4 k^m log2|S| / n``.

    Exact (a point interval) when the alphabet size is a power of two.
    """
    km = rule.k**m
    if m < 0 or n <= km:
        raise ValueError("zero-entropy bound needs n > k^m")
    coeff = Fraction((n // km - 2) ** 2, n * n) + Fraction(4 * km, n)
    return log2_interval(len(rule.alphabet)).scale(coeff)


def subpattern_count(rule: SubstitutionRule, seed: str | int, n: int, j: int) -> int:
    """Distinct ``j x j`` windows of the level-``n`` block of ``seed``."""
    grid = expand(rule, seed, n).grid
    K = grid.shape[0]
    if j > K:
        return 0
    wins = sliding_window_view(grid, (j, j)).reshape(-1, j * j)
    return len(np.unique(wins, axis=0))


def board_mismatches(rule: SubstitutionRule, seed: str | int, n: int, limit: int = 20,
                     cell_limit: int = DEFAULT_CELL_LIMIT) -> list[tuple[int, int, str, str]]:
    """Compare the level-``n`` block of a 5 x 5 rule with the n-board.

    Symbols that are box characters must match the board's direction symbol
    at that cell; any other symbol means "off the board". Returns up to
    ``limit`` rows ``(x, y, found, expected)``, with ``" "`` for off-board.
    """
    if rule.k != 5:
        raise SFTError(f"board rules expand by 5, this one by {rule.k}")
    if n < 1:
        raise ValueError("n must be at least 1")
    blk = expand(rule, seed, n, cell_limit)
    b = BoardSpec(n)
    names = rule.alphabet.symbols
    bad = []
    for y in range(1, b.side + 1):
        for x in range(1, b.side + 1):
            found = names[blk.grid[y - 1, x - 1]]
            found = found if found in BOARD_SYMBOLS else " "
            expected = b.symbol((x, y)) or " "
            if found != expected:
                bad.append((x, y, found, expected))
                if len(bad) >= limit:
                    return bad
    return bad
