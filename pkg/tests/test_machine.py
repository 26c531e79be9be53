import json
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftent.basex import LevelColoring, delta_exact
from sftent.core import BudgetExceeded, SFTError
from sftent.geometry import board
from sftent.machine import (
    CellConfig,
    RSeq,
    Superimposed,
    TuringMachine,
    board_superimpose,
    bouncer,
    delta_N,
    halt_now,
    load_machine,
    local_transition,
    prune_run,
    right_scanner,
    right_walker,
    run_bounded,
    step_row,
    superimposed_violations,
    verify_superimposed,
)


@st.composite
def machines(draw):
    n = draw(st.integers(1, 4))
    states = tuple(f"q{i}" for i in range(n)) + ("h",)
    tape = ("0", "1", "x") if draw(st.booleans()) else ("0", "1")
    rules = {}
    for s in states[:-1]:
        for a in tape:
            rules[(s, a)] = (draw(st.sampled_from(tape)), draw(st.sampled_from("LR")), draw(st.sampled_from(states)))
    return TuringMachine(states, tape, "q0", frozenset({"h"}), rules)


@settings(max_examples=1000)
@given(machines(), st.lists(st.integers(0, 1), min_size=1, max_size=8), st.integers(0, 10))
def test_row_composition_matches_simulation(m, bits, t):
    width = len(bits) + t + 2
    run = run_bounded(m, bits, t + 1, history=True, width=width)
    if len(run.configs) < t + 2 or run.fell_off:
        return
    row = run.configs[t]
    if any(c.state in m.halting for c in row):
        return
    nxt, fell = step_row(m, row)
    assert not fell
    assert nxt == run.configs[t + 1]


def test_run_examples():
    assert run_bounded(halt_now(), [0], 10).t == 0 and run_bounded(halt_now(), [0], 10).halted
    r = run_bounded(right_scanner(), [0, 0, 1, 0], 10)
    assert r.halted and r.t == 3
    assert run_bounded(right_scanner(), [0] * 5, 100).running


def test_local_transition_examples():
    m = right_walker()
    a, b = CellConfig("0"), CellConfig("1")
    assert local_transition(m, a, b, a) == b
    assert local_transition(m, None, CellConfig("1", "walk"), a) == CellConfig("1")
    assert local_transition(m, CellConfig("0", "walk"), b, None) == CellConfig("1", "walk")
    with pytest.raises(SFTError):
        local_transition(m, CellConfig("0", "walk"), CellConfig("1", "walk"), None)


def test_machine_json(tmp_path):
    for m in (right_scanner(), bouncer()):
        f = tmp_path / "m.json"
        f.write_text(json.dumps(m.to_json()), encoding="utf-8")
        assert load_machine(str(f)) == m
    bad = right_scanner().to_json()
    bad["rules"] = bad["rules"][:1]
    with pytest.raises(SFTError):
        TuringMachine.from_json(bad)
    with pytest.raises(SFTError):
        TuringMachine(("a",), ("0", "2"), "a", frozenset({"a"}), {})


# --- pruning ----------------------------------------------------------------

def test_prune_examples():
    half = RSeq.const(Fraction(1, 2))
    out = prune_run(LevelColoring((1, 1)), half, 8)
    assert out.halted and out.N == 3
    assert [s.delta for s in out.trace] == [1, Fraction(3, 4), Fraction(3, 4)]
    assert not prune_run(LevelColoring((0,)), RSeq.const(0), 8).halted
    surv = prune_run(LevelColoring((1,)), half, 8)
    assert not surv.halted and surv.N == 8
    assert all(s.identity_ok for s in surv.trace)


@given(st.lists(st.integers(0, 1), max_size=6).map(lambda b: LevelColoring(tuple(b))),
       st.integers(0, 16), st.integers(1, 9))
def test_pruning_is_monotone_in_iterations(rho, k, N):
    r = RSeq.const(Fraction(k, 16))
    a, b = prune_run(rho, r, N), prune_run(rho, r, N + 1)
    assert not a.halted or (b.halted and b.N == a.N)
    assert b.trace[: len(a.trace)] == a.trace


@given(st.lists(st.integers(0, 1), max_size=6).map(lambda b: LevelColoring(tuple(b))), st.integers(0, 16))
def test_halting_dichotomy(rho, k):
    # delta - h is a multiple of 2^-max(L,4), so halting needs N > max(L, 4)
    h = Fraction(k, 16)
    assert prune_run(rho, RSeq.const(h), max(rho.L, 4) + 1).halted == (delta_exact(rho) > h)


def test_halting_can_need_more_than_l_plus_3():
    out = prune_run(LevelColoring((1,)), RSeq.const(Fraction(7, 16)), 8)
    assert out.halted and out.N == 5


def test_trace_depends_only_on_read_levels():
    rho = LevelColoring((1, 0, 1))
    longer = LevelColoring((1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1))
    r = RSeq.const(Fraction(3, 4))
    assert prune_run(rho, r, 5).trace == prune_run(longer, r, 5).trace


def test_rseq_formats():
    assert RSeq.parse("const:1/2")(7) == Fraction(1, 2)
    lst = RSeq.parse("list:3/4,5/8")
    assert lst(2) == Fraction(5, 8) and lst.defined_upto() == 2
    with pytest.raises(SFTError):
        lst(3)
    assert RSeq.from_json({"kind": "list", "values": ["3/4", "5/8"]}) == lst
    assert RSeq.from_json({"kind": "const", "p": 1, "q": 2}) == RSeq.parse("const:1/2")
    for bad in ("nope:1", "const:x", "list:"):
        with pytest.raises(SFTError):
            RSeq.parse(bad)


def test_delta_budget():
    with pytest.raises(BudgetExceeded):
        delta_N(LevelColoring((1,)), 40)


# --- boards -----------------------------------------------------------------

def node_rows(p: Superimposed):
    b = p.board
    return [[p.cells[(x, y)] for x in b.lines] for y in b.lines]


def test_board_examples():
    b = board(1)
    res = board_superimpose(right_walker(), b, [1, 0, 1, 1])
    rows = node_rows(res)
    assert len(rows) == 4 and all([c.data for c in row] == ["1", "0", "1", "1"] for row in rows)
    assert [next(i for i, c in enumerate(row) if c.state) for row in rows] == [0, 1, 2, 3]
    bad = board_superimpose(right_scanner(), b, [1, 0, 0, 0])
    assert bad.halt_step == 1
    assert verify_superimposed(board_superimpose(right_scanner(), b, [0, 0, 0, 0]), right_scanner())
    with pytest.raises(SFTError):
        board_superimpose(right_walker(), b, [0, 0])


def test_verifier_catches_local_damage():
    b = board(1)
    m = right_walker()
    res = board_superimpose(m, b, [0, 1, 0, 0])
    node = (b.lines[2], b.lines[1])
    cells = dict(res.cells)
    cells[node] = CellConfig("1" if cells[node].data == "0" else "0", cells[node].state)
    assert not verify_superimposed(replace(res, cells=cells), m)
    corner = (b.lines[0], b.lines[0])
    cells = dict(res.cells)
    cells[corner] = CellConfig(cells[corner].data)
    assert superimposed_violations(replace(res, cells=cells), m)
