"""The base layer: a 2-net with 0/1 column marks kept constant on each net
level by row arrows."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Alphabet, BudgetExceeded, Pattern
from .geometry import net_level
from .substitution import BULLET, CIRCLE

THIN, THICK, BLANK = "↔", "⇔", "."
ARROW_OF_BIT = {0: THIN, 1: THICK}
DEFAULT_SIDE_LIMIT = 4096


@dataclass(frozen=True)
class LevelColoring:
    """Bits ``rho_1..rho_L``; ``rho_n = 0`` beyond ``L``."""

    bits: tuple[int, ...] = ()

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("level bits must be 0 or 1")

    @classmethod
    def parse(cls, text: str) -> LevelColoring:
        text = text.strip()
        if text in ("", "-", "()"):
            return cls(())
        return cls(tuple(int(c) for c in text))

    @property
    def L(self) -> int:
        return len(self.bits)

    def rho(self, n: int | None) -> int:
        return self.bits[n - 1] if n is not None and 1 <= n <= len(self.bits) else 0

    def __str__(self):
        return "".join(map(str, self.bits)) or "-"


def all_colorings(L: int) -> list[LevelColoring]:
    """Every coloring of length at most ``L`` (the empty one first)."""
    out = [LevelColoring(())]
    for n in range(1, L + 1):
        out.extend(LevelColoring(tuple((m >> (n - 1 - i)) & 1 for i in range(n))) for m in range(2**n))
    return out


@dataclass(frozen=True)
class XPattern:
    """Three layers on ``{1..w} x {1..h}``; each is a tuple of rows, bottom row first."""

    net: tuple[tuple[bool, ...], ...]
    bits: tuple[tuple[int, ...], ...]
    arrows: tuple[tuple[str, ...], ...]

    @property
    def height(self) -> int:
        return len(self.net)

    @property
    def width(self) -> int:
        return len(self.net[0]) if self.net else 0

    def cell(self, x: int, y: int) -> tuple[bool, int, str]:
        return self.net[y - 1][x - 1], self.bits[y - 1][x - 1], self.arrows[y - 1][x - 1]

    def replace(self, x: int, y: int, *, net=None, bit=None, arrow=None) -> XPattern:
        def put(layer, v):
            if v is None:
                return layer
            rows = [list(r) for r in layer]
            rows[y - 1][x - 1] = v
            return tuple(tuple(r) for r in rows)

        return XPattern(put(self.net, net), put(self.bits, bit), put(self.arrows, arrow))

    def bullets(self) -> set[tuple[int, int]]:
        return {(x + 1, y + 1) for y, row in enumerate(self.net) for x, b in enumerate(row) if b}

    def to_pattern(self) -> Pattern:
        """As a core pattern over the layered alphabet, symbols like ``•1⇔``."""
        a = layered_alphabet()
        return Pattern(a, {(x + 1, y + 1): _layer_name(*self.cell(x + 1, y + 1))
                           for y in range(self.height) for x in range(self.width)})

    def render(self) -> str:
        """Three text lines per row (net, bit, arrow), top row first."""
        lines = []
        for y in range(self.height, 0, -1):
            lines.append(" ".join(BULLET if self.net[y - 1][x] else CIRCLE for x in range(self.width)))
            lines.append(" ".join(str(b) for b in self.bits[y - 1]))
            lines.append(" ".join(self.arrows[y - 1]))
        return "\n".join(lines)


def _layer_name(net: bool, bit: int, arrow: str) -> str:
    return f"{BULLET if net else CIRCLE}{bit}{arrow}"


def layered_alphabet() -> Alphabet:
    return Alphabet(tuple(_layer_name(n, b, a) for n in (False, True) for b in (0, 1) for a in (BLANK, THIN, THICK)))


def build_x_pattern(rho: LevelColoring, n: int, side_limit: int = DEFAULT_SIDE_LIMIT) -> XPattern:
    """The ``n x n`` base pattern over the standard net."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > side_limit:
        raise BudgetExceeded(f"side {n} exceeds the limit {side_limit}")
    lv = [net_level(c) for c in range(1, n + 1)]
    col_bit = [rho.rho(v) for v in lv]
    present = set(lv)
    net, bits, arrows = [], [], []
    for y in range(n):
        ly = lv[y]
        net.append(tuple(lv[x] == ly for x in range(n)))
        bits.append(tuple(col_bit))
        arrow = ARROW_OF_BIT[rho.rho(ly)] if ly in present else BLANK
        arrows.append((arrow,) * n)
    return XPattern(tuple(net), tuple(bits), tuple(arrows))


def x_violations(p: XPattern) -> list[str]:
    """Human-readable list of broken adjacency rules (empty if none)."""
    out = []
    h, w = p.height, p.width
    for y in range(1, h + 1):
        for x in range(1, w + 1):
            net, bit, arrow = p.cell(x, y)
            if y < h and p.bits[y][x - 1] != bit:
                out.append(f"bit changes between ({x},{y}) and ({x},{y + 1})")
            if x < w and p.arrows[y - 1][x] != arrow:
                out.append(f"arrow changes between ({x},{y}) and ({x + 1},{y})")
            if net and arrow != ARROW_OF_BIT[bit]:
                out.append(f"bullet at ({x},{y}) carries bit {bit} with arrow {arrow}")
    return out


def check_x_constraints(p: XPattern) -> bool:
    """Columns carry one bit, rows one arrow (blank included), and every
    bullet's arrow matches its bit."""
    return not x_violations(p)


def delta_exact(rho: LevelColoring) -> Fraction:
    return sum((Fraction(b, 2**n) for n, b in enumerate(rho.bits, 1)), Fraction(0))


def column_frequency(rho: LevelColoring, n: int) -> Fraction:
    """Share of the columns ``1..n`` marked 1."""
    if n < 1:
        raise ValueError("n must be positive")
    return Fraction(sum(rho.rho(net_level(c)) for c in range(1, n + 1)), n)


def count_ones_by_level(rho: LevelColoring, n: int) -> int:
    """Number of 1-columns among ``1..n`` via level counts (no per-column loop).

    Level ``m`` holds ``floor((n + 2^(m-1)) / 2^m)`` of the first ``n`` columns.
    """
    return sum(b * ((n + 2 ** (m - 1)) // 2**m) for m, b in enumerate(rho.bits, 1))


def column_frequency_fast(rho: LevelColoring, n: int) -> Fraction:
    if n < 1:
        raise ValueError("n must be positive")
    return Fraction(count_ones_by_level(rho, n), n)

