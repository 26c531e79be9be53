"""2-nets and base-5 boards.

``I_1 = {1, 2, 4, 5}`` and ``I_{n+1} = I_n + 5^n * {0, 1, 3, 4}``, so the
elements of ``I = U I_n`` are exactly the positive ``p`` whose ``p - 1`` has
no base-5 digit 2, and the k-th smallest is obtained by reading ``k - 1`` in
base 4 with digits renamed 0, 1, 3, 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .core import BudgetExceeded, SFTError

DEFAULT_BOARD_LIMIT = 25**4
_DIGITS = (0, 1, 3, 4)


# --------------------------------------------------------------------------
# 2-nets

@dataclass(frozen=True)
class TwoNetSpec:
    """Levels ``1..L``: ``I_n = 2^n Z + t_n`` and ``J_n = 2^n Z + u_n``.

    ``standard=True`` means ``t_n = u_n = 2^(n-1)`` for every ``n`` (no cap).
    """

    offsets: tuple[tuple[int, int], ...] = ()
    standard: bool = False

    @classmethod
    def standard_net(cls) -> TwoNetSpec:
        return cls((), True)

    def offset(self, n: int, axis: int = 0) -> int | None:
        if self.standard:
            return 2 ** (n - 1)
        if 1 <= n <= len(self.offsets):
            return self.offsets[n - 1][axis]
        return None

    @property
    def levels(self) -> int | None:
        return None if self.standard else len(self.offsets)

    def disjoint_on(self, window: range, axis: int = 0) -> bool:
        """Whether the finitely many levels are pairwise disjoint on ``window``."""
        if self.standard:
            return True
        seen: set[int] = set()
        for n in range(1, len(self.offsets) + 1):
            t = self.offset(n, axis)
            pts = {c for c in window if (c - t) % 2**n == 0}
            if seen & pts:
                return False
            seen |= pts
        return True


def nu2(c: int) -> int:
    """2-adic valuation of a nonzero integer."""
    if c == 0:
        raise ValueError("valuation of 0 is infinite")
    return (c & -c).bit_length() - 1


def net_level(c: int, net: TwoNetSpec | None = None, axis: int = 0) -> int | None:
    """The level ``n`` with ``c`` in ``I_n`` (``J_n`` for ``axis=1``), or None."""
    net = net or TwoNetSpec.standard_net()
    if net.standard:
        if c == 0:
            raise SFTError("0 lies in no level of the standard net")
        return nu2(c) + 1
    hits = [n for n in range(1, len(net.offsets) + 1) if (c - net.offset(n, axis)) % 2**n == 0]
    if len(hits) > 1:
        raise SFTError(f"net levels overlap at {c}")
    return hits[0] if hits else None


def net_cells(n: int, net: TwoNetSpec | None = None) -> set[tuple[int, int]]:
    """``E`` restricted to ``{1..n}^2``: cells whose row and column share a level."""
    lv = [net_level(c, net) for c in range(1, n + 1)]
    lh = [net_level(c, net, 1) for c in range(1, n + 1)]
    return {(x + 1, y + 1) for x in range(n) for y in range(n) if lv[x] is not None and lv[x] == lh[y]}


# --------------------------------------------------------------------------
# the sets I_n

def i_set(n: int, limit: int = 4**10) -> list[int]:
    """``I_n`` sorted; ``|I_n| = 4^n``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if 4**n > limit:
        raise BudgetExceeded(f"|I_{n}| = 4^{n} exceeds the limit {limit}")
    cur = [1, 2, 4, 5]
    for j in range(1, n):
        step = 5**j
        cur = [x + t * step for t in _DIGITS for x in cur]
    return cur


def i_enum(k: int) -> int:
    """The k-th smallest element of ``I`` (1-based)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    m, p, val = k - 1, 1, 0
    while m:
        m, d = divmod(m, 4)
        val += _DIGITS[d] * p
        p *= 5
    return val + 1


def i_index(p: int) -> int | None:
    """Inverse of :func:`i_enum`; None if ``p`` is not in ``I``."""
    if p < 1:
        return None
    m, q, idx = p - 1, 1, 0
    while m:
        m, d = divmod(m, 5)
        if d == 2:
            return None
        idx += _DIGITS.index(d) * q
        q *= 4
    return idx + 1


def in_i(p: int) -> bool:
    return i_index(p) is not None


# --------------------------------------------------------------------------
# boards

# direction sets (N, E, S, W) -> box-drawing symbol
_SYMBOLS = {
    frozenset("NS"): "│", frozenset("EW"): "─",
    frozenset("NE"): "└", frozenset("NW"): "┘", frozenset("SE"): "┌", frozenset("SW"): "┐",
    frozenset("EWS"): "┬", frozenset("EWN"): "┴", frozenset("NSE"): "├", frozenset("NSW"): "┤",
    frozenset("NESW"): "┼",
}
BOARD_SYMBOLS = frozenset(_SYMBOLS.values())
CORNERS = frozenset("└┘┌┐")
TEES = frozenset("┬┴├┤")
CROSS = "┼"


def direction_symbol(dirs: frozenset[str]) -> str:
    return _SYMBOLS[dirs]


@dataclass(frozen=True)
class BoardSpec:
    """The n-board ``B_n`` inside ``{1..5^n}^2``.

    A cell on a column line ``{i} x [1, 5^n]`` links to its vertical
    neighbours, a cell on a row line to its horizontal ones; nodes lie on
    both. Links never leave the square.
    """

    n: int

    @property
    def side(self) -> int:
        return 5**self.n

    @cached_property
    def lines(self) -> tuple[int, ...]:
        return tuple(i_set(self.n))

    @cached_property
    def _line_set(self) -> frozenset[int]:
        return frozenset(self.lines)

    def is_cell(self, c: tuple[int, int]) -> bool:
        x, y = c
        s = self.side
        return 1 <= x <= s and 1 <= y <= s and (x in self._line_set or y in self._line_set)

    def is_node(self, c: tuple[int, int]) -> bool:
        return c[0] in self._line_set and c[1] in self._line_set

    @cached_property
    def cells(self) -> frozenset[tuple[int, int]]:
        s, L = self.side, self.lines
        col = {(x, y) for x in L for y in range(1, s + 1)}
        row = {(x, y) for y in L for x in range(1, s + 1)}
        return frozenset(col | row)

    @property
    def nodes(self) -> list[tuple[int, int]]:
        return [(x, y) for y in self.lines for x in self.lines]

    def directions(self, c: tuple[int, int]) -> frozenset[str]:
        x, y = c
        s = self.side
        dirs = set()
        if x in self._line_set:
            if y < s:
                dirs.add("N")
            if y > 1:
                dirs.add("S")
        if y in self._line_set:
            if x < s:
                dirs.add("E")
            if x > 1:
                dirs.add("W")
        return frozenset(dirs)

    def symbol(self, c: tuple[int, int]) -> str | None:
        return direction_symbol(self.directions(c)) if self.is_cell(c) else None

    def render(self, blank: str = " ") -> str:
        s = self.side
        rows = []
        for y in range(s, 0, -1):
            rows.append("".join(self.symbol((x, y)) or blank for x in range(1, s + 1)))
        return "\n".join(rows)


def board(n: int, limit: int = DEFAULT_BOARD_LIMIT) -> BoardSpec:
    if n < 1:
        raise ValueError("n must be at least 1")
    if 25**n > limit:
        raise BudgetExceeded(f"board of side 5^{n} exceeds the render limit {limit}")
    return BoardSpec(n)


def board_size(n: int) -> int:
    """``|B_n| = 2 * 4^n * 5^n - 16^n``."""
    return 2 * 4**n * 5**n - 16**n


def board_density(n: int) -> Fraction:
    if n < 1:
        raise ValueError("n must be at least 1")
    return Fraction(board_size(n), 25**n)


# --------------------------------------------------------------------------
# residue positions

def order_of_5(N: int) -> int:
    """Least ``q >= 1`` with ``5^q = 1 mod 2^N``."""
    mod = 2**N
    q, x = 1, 5 % mod
    while x != 1 % mod:
        x = x * 5 % mod
        q += 1
    return q


@dataclass(frozen=True)
class ResiduePositions:
    """``p_t = 1 + 5^q + ... + 5^(tq)`` for ``t = 1..2^N``.

    Values and enumeration indices grow like ``5^(q 2^N)``; they are only
    materialized on request (``value_limit`` digits). Residues and 2-adic
    levels are computed modulo ``2^K`` without building the big numbers.
    """

    N: int
    q: int

    @property
    def count(self) -> int:
        return 2**self.N

    def residues(self, K: int | None = None) -> list[int]:
        """``p_t mod 2^K`` (``K`` defaults to ``N``)."""
        mod = 2 ** (K or self.N)
        f = pow(5, self.q, mod)
        out, term, acc = [], 1, 1 % mod
        for _ in range(self.count):
            term = term * f % mod
            acc = (acc + term) % mod
            out.append(acc)
        return out

    def levels(self, cap: int) -> list[int | None]:
        """Standard-net level of every ``p_t``, or None if it exceeds ``cap``."""
        K = cap
        out = []
        for r in self.residues(K):
            out.append(None if r == 0 else nu2(r) + 1)
        return out

    def values(self, max_bits: int = 1 << 16) -> list[int]:
        if self.q * self.count * 2.33 > max_bits:
            raise BudgetExceeded(f"positions have about {int(self.q * self.count * 2.33)} bits")
        f, term, acc, out = 5**self.q, 1, 1, []
        for _ in range(self.count):
            term *= f
            acc += term
            out.append(acc)
        return out

    def indices(self, max_bits: int = 1 << 16) -> list[int]:
        """Enumeration indices: ``i_enum(index) = value``."""
        if self.q * self.count * 2 > max_bits:
            raise BudgetExceeded(f"indices have about {self.q * self.count * 2} bits")
        f, term, acc, out = 4**self.q, 1, 1, []
        for _ in range(self.count):
            term *= f
            acc += term
            out.append(acc)
        return out


def residue_positions(N: int) -> ResiduePositions:
    if N < 1:
        raise ValueError("N must be at least 1")
    return ResiduePositions(N, order_of_5(N))
