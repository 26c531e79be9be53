"""Turing machines on a one-sided tape, the pruning loop, and machines laid out
on boards.

A board of level ``n`` has ``4^n`` node columns (tape cells ``0..4^n-1``)
and ``4^n`` node rows (configurations ``c_0..c_{4^n-1}``). Row cells between
two nodes carry the pair of node configurations they join; column cells
between two node rows carry the ``(u, v, w)`` triple read below them.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .basex import LevelColoring
from .core import BudgetExceeded, SFTError
from .geometry import BoardSpec, residue_positions

LEFT, RIGHT = "L", "R"


@dataclass(frozen=True)
class TuringMachine:
    states: tuple[str, ...]
    tape: tuple[str, ...]
    initial: str
    halting: frozenset[str]
    rules: Mapping[tuple[str, str], tuple[str, str, str]]

    def __post_init__(self):
        if not {"0", "1"} <= set(self.tape):
            raise SFTError("tape alphabet must contain 0 and 1")
        st = set(self.states)
        if self.initial not in st or not set(self.halting) <= st:
            raise SFTError("initial and halting states must be states")
        for (s, a), (w, mv, nxt) in self.rules.items():
            if s not in st or nxt not in st or a not in self.tape or w not in self.tape or mv not in (LEFT, RIGHT):
                raise SFTError(f"malformed rule {(s, a, w, mv, nxt)}")
        for s in st - set(self.halting):
            for a in self.tape:
                if (s, a) not in self.rules:
                    raise SFTError(f"transition missing for ({s}, {a})")
        object.__setattr__(self, "halting", frozenset(self.halting))
        object.__setattr__(self, "rules", dict(self.rules))

    def __hash__(self):
        return hash((self.states, self.tape, self.initial, self.halting, tuple(sorted(self.rules.items()))))

    @classmethod
    def from_json(cls, obj: Mapping) -> TuringMachine:
        try:
            rules = {(s, a): (w, mv, n) for s, a, w, mv, n in obj["rules"]}
            return cls(tuple(obj["states"]), tuple(obj["tape"]), obj["initial"], frozenset(obj["halting"]), rules)
        except (KeyError, TypeError, ValueError) as e:
            raise SFTError(f"malformed machine definition: {e}") from None

    def to_json(self) -> dict:
        return {
            "states": list(self.states), "tape": list(self.tape), "initial": self.initial,
            "halting": sorted(self.halting),
            "rules": [[s, a, w, mv, n] for (s, a), (w, mv, n) in sorted(self.rules.items())],
        }


def load_machine(path: str) -> TuringMachine:
    if path in BUILTIN_MACHINES:
        return BUILTIN_MACHINES[path]()
    with open(path, encoding="utf-8") as f:
        return TuringMachine.from_json(json.load(f))


@dataclass(frozen=True)
class CellConfig:
    data: str
    state: str | None = None

    def __str__(self):
        return self.data if self.state is None else f"{self.data}@{self.state}"


# --------------------------------------------------------------------------
# simulation

@dataclass
class RunResult:
    halted: bool
    t: int  # halting time, or the number of steps run
    fell_off: bool = False
    configs: list[tuple[CellConfig, ...]] | None = None

    @property
    def running(self) -> bool:
        return not self.halted


def _input_reader(bits, pad: str = "0") -> Callable[[int], str]:
    if callable(bits):
        return lambda i: str(bits(i))
    seq = [str(b) for b in bits]
    return lambda i: seq[i] if i < len(seq) else pad


def run_bounded(m: TuringMachine, bits, steps: int, history: bool = False, width: int | None = None) -> RunResult:
    """Simulate at most ``steps`` steps from the initial state at cell 0.

    ``bits`` is a sequence (padded with ``0``) or a function of the cell
    index. With ``history`` the configurations ``c_0..c_t`` are returned,
    each cut to ``width`` cells (default: every cell touched or given).
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    read = _input_reader(bits)
    tape: dict[int, str] = {}
    head, state = 0, m.initial
    n_given = 0 if callable(bits) else len(bits)
    configs = [] if history else None

    def snapshot():
        w = width if width is not None else max(n_given, max(tape, default=-1) + 1, head + 1)
        return tuple(CellConfig(tape.get(i, read(i)), state if i == head else None) for i in range(w))

    for t in range(steps + 1):
        if history:
            configs.append(snapshot())
        if state in m.halting:
            return RunResult(True, t, False, configs)
        if t == steps:
            break
        sym = tape.get(head, read(head))
        w, mv, nxt = m.rules[(state, sym)]
        tape[head] = w
        state = nxt
        head += 1 if mv == RIGHT else -1
        if head < 0:
            if history:
                configs.append(tuple(CellConfig(c.data) for c in snapshot()))
            return RunResult(True, t + 1, True, configs)
    return RunResult(False, steps, False, configs)


def local_transition(m: TuringMachine, u: CellConfig | None, v: CellConfig, w: CellConfig | None) -> CellConfig | None:
    """``T(u, v, w)``: the next configuration of the middle cell.

    ``u = None`` marks cell 0. Returns None when the state read in the
    window is halting (no successor exists).
    """
    present = [c for c in (u, v, w) if c is not None and c.state is not None]
    if len(present) > 1:
        raise SFTError("more than one machine state in the window")
    if v.state is not None:
        if v.state in m.halting:
            return None
        wr, _, _ = m.rules[(v.state, v.data)]
        return CellConfig(wr)
    for nb, toward in ((u, RIGHT), (w, LEFT)):
        if nb is not None and nb.state is not None:
            if nb.state in m.halting:
                return None
            _, mv, nxt = m.rules[(nb.state, nb.data)]
            return CellConfig(v.data, nxt) if mv == toward else v
    return v


def step_row(m: TuringMachine, row: Sequence[CellConfig]) -> tuple[tuple[CellConfig, ...] | None, bool]:
    """Apply ``T`` across a finite row; returns (next row or None if halting, fell off left)."""
    out = []
    for i, v in enumerate(row):
        u = row[i - 1] if i > 0 else None
        w = row[i + 1] if i + 1 < len(row) else None
        nv = local_transition(m, u, v, w)
        if nv is None:
            return None, False
        out.append(nv)
    fell = row[0].state is not None and m.rules[(row[0].state, row[0].data)][1] == LEFT
    return tuple(out), fell


# --------------------------------------------------------------------------
# stock machines

def right_scanner() -> TuringMachine:
    """Walks right, halting after reading a 1."""
    return TuringMachine(("scan", "halt"), ("0", "1"), "scan", frozenset({"halt"}),
                         {("scan", "0"): ("0", RIGHT, "scan"), ("scan", "1"): ("1", RIGHT, "halt")})


def right_walker() -> TuringMachine:
    """Never halts: walks right rewriting what it reads."""
    return TuringMachine(("walk", "halt"), ("0", "1"), "walk", frozenset({"halt"}),
                         {("walk", "0"): ("0", RIGHT, "walk"), ("walk", "1"): ("1", RIGHT, "walk")})


def halt_now() -> TuringMachine:
    return TuringMachine(("halt",), ("0", "1"), "halt", frozenset({"halt"}), {})


def bouncer() -> TuringMachine:
    """Never halts: walks right and left between cells 0 and 1, copying its reads."""
    return TuringMachine(("a", "b", "halt"), ("0", "1"), "a", frozenset({"halt"}),
                         {("a", "0"): ("0", RIGHT, "b"), ("a", "1"): ("1", RIGHT, "b"),
                          ("b", "0"): ("0", LEFT, "a"), ("b", "1"): ("1", LEFT, "a")})


def left_faller() -> TuringMachine:
    """Moves left at once, so it falls off the tape at step 1."""
    return TuringMachine(("go", "halt"), ("0", "1"), "go", frozenset({"halt"}),
                         {("go", "0"): ("0", LEFT, "go"), ("go", "1"): ("1", LEFT, "go")})


def ones_counter(limit: int = 2) -> TuringMachine:
    """Walks right flipping bits and halts once it has read ``limit`` ones."""
    states = tuple(f"c{i}" for i in range(limit)) + ("halt",)
    rules = {}
    for i in range(limit):
        nxt = states[i + 1] if i + 1 < limit else "halt"
        rules[(states[i], "0")] = ("1", RIGHT, states[i])
        rules[(states[i], "1")] = ("0", RIGHT, nxt)
    return TuringMachine(states, ("0", "1"), states[0], frozenset({"halt"}), rules)


def zigzag() -> TuringMachine:
    """Writes 1 and returns to cell 0 after each new cell; halts on reading a 1 at the far end."""
    return TuringMachine(
        ("out", "back", "halt"), ("0", "1"), "out", frozenset({"halt"}),
        {("out", "0"): ("1", RIGHT, "out"), ("out", "1"): ("1", LEFT, "back"),
         ("back", "0"): ("0", LEFT, "back"), ("back", "1"): ("1", LEFT, "back")},
    )


BUILTIN_MACHINES = {
    "right-scanner": right_scanner, "right-walker": right_walker, "halt-now": halt_now, "bouncer": bouncer,
    "left-faller": left_faller, "ones-counter": ones_counter, "zigzag": zigzag,
}


# --------------------------------------------------------------------------
# pruning

@dataclass(frozen=True)
class RSeq:
    """A target sequence ``r(N)``: constant, or an explicit list ``r(1), r(2), ...``."""

    kind: str
    values: tuple[Fraction, ...]

    @classmethod
    def const(cls, q) -> RSeq:
        return cls("const", (Fraction(q),))

    @classmethod
    def of_list(cls, values) -> RSeq:
        if not values:
            raise SFTError("empty r-sequence")
        return cls("list", tuple(Fraction(v) for v in values))

    @classmethod
    def parse(cls, text: str) -> RSeq:
        """``const:p/q`` or ``list:a,b,c``."""
        kind, _, rest = text.partition(":")
        try:
            if kind == "const":
                return cls.const(Fraction(rest))
            if kind == "list":
                return cls.of_list([Fraction(v) for v in rest.split(",")])
        except (ValueError, ZeroDivisionError) as e:
            raise SFTError(f"bad r-sequence {text!r}: {e}") from None
        raise SFTError(f"unknown r-sequence kind in {text!r}")

    @classmethod
    def from_json(cls, obj: Mapping) -> RSeq:
        try:
            if obj["kind"] == "const":
                return cls.const(Fraction(int(obj["p"]), int(obj["q"])))
            if obj["kind"] == "list":
                return cls.of_list([Fraction(v) for v in obj["values"]])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise SFTError(f"malformed target: {e}") from None
        raise SFTError(f"unknown target kind {obj.get('kind')!r}")

    def __call__(self, N: int) -> Fraction:
        if self.kind == "const":
            return self.values[0]
        if not 1 <= N <= len(self.values):
            raise SFTError(f"r({N}) is not defined by the given list")
        return self.values[N - 1]

    def defined_upto(self) -> int | None:
        return None if self.kind == "const" else len(self.values)

    def __str__(self):
        if self.kind == "const":
            return f"const:{self.values[0]}"
        return "list:" + ",".join(map(str, self.values))


@lru_cache(maxsize=None)
def _level_histogram(N: int, cap: int) -> tuple[tuple[int, int], ...]:
    """Standard-net levels of the residue positions of ``M_N`` (0 marks > cap)."""
    levels = residue_positions(N).levels(cap)
    return tuple(sorted(Counter(0 if v is None else v for v in levels).items()))


@lru_cache(maxsize=None)
def _leftover_level(N: int, cap: int) -> int:
    """Level of the single position whose level exceeds ``N`` (0 if above ``cap``)."""
    levels = residue_positions(N).levels(cap)
    left = [0 if v is None else v for v in levels if v is None or v > N]
    if len(left) != 1:
        raise AssertionError(f"expected one leftover position for N={N}, got {len(left)}")
    return left[0]


@dataclass(frozen=True)
class PruneStep:
    N: int
    r: Fraction
    delta: Fraction
    rho_prime: int
    identity_ok: bool


@dataclass
class PruneOutcome:
    halted: bool
    N: int  # halting iteration, or the last iteration run
    trace: list[PruneStep] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return f"halted at N={self.N}" if self.halted else f"survived through N={self.N}"


MAX_PRUNE_N = 16


def delta_N(rho: LevelColoring, N: int) -> tuple[Fraction, int]:
    """``(delta_N, rho')``: share of 1-bits over the residue positions of ``M_N``."""
    if N > MAX_PRUNE_N:
        raise BudgetExceeded(f"N={N} exceeds the residue-position limit {MAX_PRUNE_N}")
    cap = max(rho.L, N) + 1
    ones = sum(c * rho.rho(lv or None) for lv, c in _level_histogram(N, cap))
    lv = _leftover_level(N, cap)
    return Fraction(ones, 2**N), rho.rho(lv or None)


def prune_run(rho: LevelColoring, r: RSeq, N_max: int) -> PruneOutcome:
    """Run the pruning loop for ``N = 1..N_max``; halt once ``delta_N > r(N) + 2^-N``.

    Every step also records whether ``delta_N`` equals
    ``sum_{n<=N} rho_n 2^-n + rho' 2^-N`` exactly.
    """
    out = PruneOutcome(False, 0)
    for N in range(1, N_max + 1):
        d, rp = delta_N(rho, N)
        expected = sum((Fraction(rho.rho(n), 2**n) for n in range(1, N + 1)), Fraction(0)) + Fraction(rp, 2**N)
        rN = r(N)
        out.trace.append(PruneStep(N, rN, d, rp, d == expected))
        out.N = N
        if d > rN + Fraction(1, 2**N):
            out.halted = True
            return out
    return out


# --------------------------------------------------------------------------
# boards

@dataclass(frozen=True)
class Pair:
    left: CellConfig
    right: CellConfig


BLANK_CELL = None  # a missing neighbour in a triple


@dataclass(frozen=True)
class Triple:
    u: CellConfig | None
    v: CellConfig
    w: CellConfig | None


@dataclass
class Superimposed:
    board: BoardSpec
    cells: dict[tuple[int, int], object]
    input_bits: tuple[int, ...]


@dataclass(frozen=True)
class Infeasible:
    halt_step: int
    fell_off: bool = False


def board_superimpose(m: TuringMachine, b: BoardSpec, input_bits: Sequence[int]) -> Superimposed | Infeasible:
    """Lay the run on ``input_bits`` over the board, or report the halting step.

    Feasible iff the machine makes ``4^n`` steps without reaching a halting
    state (or leaving the tape); the last of these is checked at the top edge.
    """
    W = 4**b.n
    if len(input_bits) != W:
        raise SFTError(f"board level {b.n} needs {W} input bits, got {len(input_bits)}")
    run = run_bounded(m, list(input_bits), W, history=True, width=W)
    if run.halted:
        return Infeasible(run.t, run.fell_off)
    rows = run.configs[:W]
    xs = b.lines
    ys = b.lines
    col_of = {x: j for j, x in enumerate(xs)}
    row_of = {y: t for t, y in enumerate(ys)}
    cells: dict[tuple[int, int], object] = {}
    for (x, y) in b.cells:
        if x in col_of and y in row_of:
            cells[(x, y)] = rows[row_of[y]][col_of[x]]
        elif y in row_of:
            j = _prev_index(xs, x)
            cells[(x, y)] = Pair(rows[row_of[y]][j], rows[row_of[y]][j + 1])
        else:
            t, j = _prev_index(ys, y), col_of[x]
            row = rows[t]
            cells[(x, y)] = Triple(row[j - 1] if j > 0 else None, row[j], row[j + 1] if j + 1 < W else None)
    return Superimposed(b, cells, tuple(int(v) for v in input_bits))


def _prev_index(lines: Sequence[int], z: int) -> int:
    """Index of the last line strictly below ``z``."""
    lo, hi = 0, len(lines)
    while lo < hi:
        mid = (lo + hi) // 2
        if lines[mid] < z:
            lo = mid + 1
        else:
            hi = mid
    return lo - 1


def _neighbour_config(cells, b: BoardSpec, node: tuple[int, int], dx: int):
    """Configuration of the node to the left (dx=-1) or right (dx=+1), read locally."""
    x, y = node
    nb = (x + dx, y)
    if not b.is_cell(nb):
        return BLANK_CELL, True
    val = cells.get(nb)
    if b.is_node(nb):
        return val, isinstance(val, CellConfig)
    if not isinstance(val, Pair):
        return None, False
    return (val.left if dx < 0 else val.right), True


def verify_superimposed(p: Superimposed, m: TuringMachine, b: BoardSpec | None = None,
                        input_bits: Sequence[int] | None = None) -> bool:
    """Check the local rules at every board cell; see :func:`superimposed_violations`."""
    return not superimposed_violations(p, m, b, input_bits, first_only=True)


def superimposed_violations(p: Superimposed, m: TuringMachine, b: BoardSpec | None = None,
                            input_bits: Sequence[int] | None = None, first_only: bool = False) -> list[str]:
    b = b or p.board
    cells = p.cells
    bits = p.input_bits if input_bits is None else tuple(input_bits)
    out: list[str] = []

    def bad(msg):
        out.append(msg)
        return first_only

    if set(cells) != set(b.cells):
        return ["pattern domain differs from the board"]
    bottom, top, left = b.lines[0], b.lines[-1], b.lines[0]
    col_index = {x: j for j, x in enumerate(b.lines)}
    for c in sorted(b.cells, key=lambda c: (c[1], c[0])):
        x, y = c
        val = cells[c]
        if b.is_node(c):
            if not isinstance(val, CellConfig) or val.data not in m.tape:
                if bad(f"node {c} lacks a configuration"):
                    return out
                continue
            if val.state is not None and (val.state not in m.states or val.state in m.halting):
                if bad(f"node {c} carries state {val.state!r}"):
                    return out
            lft, ok1 = _neighbour_config(cells, b, c, -1)
            rgt, ok2 = _neighbour_config(cells, b, c, +1)
            if not (ok1 and ok2):
                if bad(f"node {c} has malformed row neighbours"):
                    return out
                continue
            # the cell above must carry this node's window
            above = (x, y + 1)
            if y != top and not b.is_node(above):
                tr = cells.get(above)
                if tr != Triple(lft, val, rgt):
                    if bad(f"triple above node {c} does not match"):
                        return out
            # leaving the tape at column 1 is a halt
            if x == left and val.state is not None and m.rules.get((val.state, val.data), (0, RIGHT))[1] == LEFT:
                if bad(f"head leaves the tape at {c}"):
                    return out
            if y == bottom:
                want_state = m.initial if x == left else None
                if val.state != want_state or val.data != str(bits[col_index[x]]):
                    if bad(f"bottom node {c} breaks the initial configuration"):
                        return out
            else:
                below = (x, y - 1)
                if b.is_node(below):
                    bl, bo = cells[below], True
                    u, ok1 = _neighbour_config(cells, b, below, -1)
                    w, ok2 = _neighbour_config(cells, b, below, +1)
                    window = Triple(u, bl, w) if ok1 and ok2 and isinstance(bl, CellConfig) else None
                else:
                    window = cells.get(below)
                if not isinstance(window, Triple):
                    if bad(f"no window below node {c}"):
                        return out
                    continue
                try:
                    nxt = local_transition(m, window.u, window.v, window.w)
                except (SFTError, KeyError):
                    nxt = None
                if nxt != val:
                    if bad(f"node {c} is not T of the window below"):
                        return out
            if y == top and val.state is not None:
                # the step after the top row must not halt
                if m.rules[(val.state, val.data)][2] in m.halting:
                    if bad(f"the step after top node {c} halts"):
                        return out
            continue
        on_row = y in col_index  # row lines use the same index set
        if on_row:
            if not isinstance(val, Pair):
                if bad(f"row cell {c} lacks a pair"):
                    return out
                continue
            for dx, pick in ((-1, "left"), (1, "right")):
                nb = (x + dx, y)
                nv = cells.get(nb)
                if b.is_node(nb):
                    if getattr(val, pick) != nv:
                        if bad(f"pair at {c} does not pick up node {nb}"):
                            return out
                elif nv != val:
                    if bad(f"pair changes between {c} and {nb}"):
                        return out
        else:
            if not isinstance(val, Triple):
                if bad(f"column cell {c} lacks a triple"):
                    return out
                continue
            up = (x, y + 1)
            if not b.is_node(up) and cells.get(up) != val:
                if bad(f"triple changes between {c} and {up}"):
                    return out
    return out
