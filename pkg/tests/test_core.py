import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftent.core import (
    Alphabet,
    AlphabetMismatch,
    BlockMap,
    BudgetExceeded,
    DimensionMismatch,
    Filler,
    Pattern,
    SFTError,
    Syntax,
    apply_block_map,
    box,
    builtin,
    empty_sft,
    full_shift,
    golden_mean,
    hard_squares,
    is_locally_admissible,
    lift_dimension,
    load_syntax,
    product,
    recode_one_step,
    rect,
    syntax_from_json,
    syntax_to_json,
)
from sftent.counting import count_1d, count_rect, enumerate_locally_admissible

BIN = Alphabet(("0", "1"))


def brute_count(s: Syntax, cells) -> int:
    """Direct definition: every translate of the shape inside the region is allowed."""
    cells = list(cells)
    dom = set(cells)
    allowed = s.allowed
    translates = []
    for c in cells:
        win = [tuple(ci + oi for ci, oi in zip(c, o)) for o in s.offsets]
        if all(w in dom for w in win):
            translates.append(win)
    idx = {c: i for i, c in enumerate(cells)}
    total = 0
    for vals in itertools.product(range(len(s.alphabet)), repeat=len(cells)):
        total += all(tuple(vals[idx[w]] for w in win) in allowed for win in translates)
    return total


# --- is_locally_admissible -------------------------------------------------

def test_single_cell_full_shift():
    assert is_locally_admissible(Pattern.from_word(BIN, "1"), full_shift(2))


def test_forbidden_word_present():
    s = Syntax.build(["0", "1"], [(0,), (1,)], "forbidden", [("1", "1")])
    assert not is_locally_admissible(Pattern.from_word(BIN, "0110"), s)
    assert is_locally_admissible(Pattern.from_word(BIN, "0101"), s)


def test_checkerboard_hard_squares():
    p = Pattern.from_rows(BIN, [["1", "0"], ["0", "1"]])
    assert is_locally_admissible(p, hard_squares())
    q = Pattern.from_rows(BIN, [["1", "1"], ["0", "0"]])
    assert not is_locally_admissible(q, hard_squares())


def test_admissibility_errors():
    with pytest.raises(AlphabetMismatch):
        is_locally_admissible(Pattern.from_word(Alphabet(("a", "b")), "ab"), golden_mean())
    with pytest.raises(DimensionMismatch):
        is_locally_admissible(Pattern.from_word(BIN, "01"), hard_squares())


# --- patterns ---------------------------------------------------------------

def test_grid_text_round_trip():
    text = "1 0 0\n0 0 1"
    p = Pattern.from_grid_text(BIN, text)
    assert p.to_grid_text() == text
    # first line is the top row
    assert p.name((1, 2)) == "1" and p.name((3, 1)) == "1"


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=6, unique=True),
       st.tuples(st.integers(-5, 5), st.integers(-5, 5)), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_appears_at_translation_invariant(cells, u, v):
    a = Pattern(BIN, {c: (c[0] + c[1]) % 2 for c in cells})
    big = Pattern(BIN, {(x, y): (x + y) % 2 for x in range(-12, 13) for y in range(-12, 13)})
    assert a.appears_at(big, u) == a.translate(v).appears_at(big, (u[0] - v[0], u[1] - v[1]))


def test_congruence_is_equivalence():
    a = Pattern.from_word(BIN, "011")
    b = a.translate((5,))
    c = b.translate((-2,))
    assert a.congruent(a) and a.congruent(b) and b.congruent(a) and a.congruent(c)
    assert not a.congruent(Pattern.from_word(BIN, "010"))


# --- recoding ---------------------------------------------------------------

def test_recode_identity_on_one_step():
    s = hard_squares()
    rec, win = recode_one_step(s)
    assert win.sides == (1, 1)
    assert len(rec.table) == len(s.allowed)
    for n in range(1, 4):
        assert count_rect(rec, n, n).count == count_rect(s, n, n).count


def test_recode_forbidden_111():
    s = Syntax.build(["0", "1"], [(0,), (1,), (2,)], "forbidden", [("1", "1", "1")])
    rec, win = recode_one_step(s)
    assert len(rec.alphabet) == 4
    assert win.sides == (2,)
    # exactly one transition is missing: 11 -> 11
    assert len(rec.allowed) == 4 * 2 - 1


@pytest.mark.parametrize("n", range(1, 11))
@pytest.mark.parametrize("s", [golden_mean(), Syntax.build(["0", "1"], [(0,), (1,), (2,)], "forbidden", [("1", "1", "1")])],
                         ids=["golden", "no111"])
def test_recode_1d_bijection(s, n):
    rec, win = recode_one_step(s)
    assert count_1d(rec, n) == brute_count(s, rect(n + win.sides[0] - 1))


@pytest.mark.parametrize("n", range(1, 5))
def test_recode_2d_bijection(n):
    s = Syntax.build(["0", "1"], [(0, 0), (1, 0), (2, 0), (0, 1)], "forbidden",
                     [{(0, 0): "1", (1, 0): "1", (2, 0): "1", (0, 1): "1"},
                      {(0, 0): "0", (1, 0): "1", (2, 0): "0", (0, 1): "1"}])
    rec, win = recode_one_step(s)
    w, h = win.sides
    assert count_rect(rec, n, n).count == brute_count(s, rect(n + w - 1, n + h - 1))


# --- product / lift / block maps -------------------------------------------

def test_product_examples():
    p = product(full_shift(2), full_shift(3))
    assert count_1d(p, 2) == 36
    g = product(golden_mean(), golden_mean())
    assert count_1d(g, 3) == 25
    e = product(golden_mean(), empty_sft(1))
    assert count_1d(e, 2) == 0


@pytest.mark.parametrize("n", range(1, 5))
def test_product_counts_multiply(n):
    a = Syntax.build(["a", "b", "c"], [(0,), (1,)], "forbidden", [("a", "b"), ("c", "c")])
    b = golden_mean()
    assert brute_count(product(a, b), rect(n)) == brute_count(a, rect(n)) * brute_count(b, rect(n))
    hs = hard_squares()
    if n <= 3:
        g2 = lift_dimension(golden_mean())
        assert count_rect(product(hs, g2), n, n).count == count_rect(hs, n, n).count * count_rect(g2, n, n).count


def test_product_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        product(golden_mean(), hard_squares())


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lift_count_identity(n):
    assert count_rect(lift_dimension(full_shift(3)), n, n).count == 3 ** (n * n)
    g = lift_dimension(golden_mean())
    assert brute_count(g, rect(n, n)) == count_1d(golden_mean(), n) ** n
    assert count_rect(lift_dimension(empty_sft(1)), n, n).count == 0


def test_block_maps():
    ab = Alphabet(("a", "b"))
    p = Pattern.from_word(ab, "abab")
    ident = BlockMap.from_dict(ab, ["a", "b"], {"a": "a", "b": "b"})
    assert apply_block_map(p, ident) == p
    z = BlockMap.from_dict(ab, ["z"], {"a": "z", "b": "z"})
    assert apply_block_map(p, z).to_grid_text() == "z z z z"
    hs = Pattern.from_rows(BIN, [["1", "0"], ["0", "1"]])
    eo = apply_block_map(hs, BlockMap.from_dict(BIN, ["e", "o"], {"0": "e", "1": "o"}))
    assert {c for c, v in eo.items() if eo.alphabet.name(v) == "o"} == {c for c, v in hs.items() if v == 1}
    with pytest.raises(SFTError):
        BlockMap.from_dict(ab, ["z"], {"a": "z"})
    with pytest.raises(AlphabetMismatch):
        apply_block_map(Pattern.from_word(BIN, "01"), z)


# --- definitions ------------------------------------------------------------

def test_json_round_trip(tmp_path):
    for s in (golden_mean(), hard_squares(), full_shift(3, 2)):
        obj = syntax_to_json(s)
        f = tmp_path / "s.json"
        f.write_text(json.dumps(obj), encoding="utf-8")
        t = load_syntax(str(f))
        assert t.allowed == s.allowed and t.offsets == s.offsets


def test_json_errors():
    with pytest.raises(SFTError):
        syntax_from_json({"alphabet": ["0"]})
    with pytest.raises(DimensionMismatch):
        syntax_from_json({"alphabet": ["0"], "dimension": 2, "shape": [[0]], "patterns": []})
    with pytest.raises(SFTError):
        builtin("no-such")


def test_filler_limit():
    with pytest.raises(BudgetExceeded):
        Filler(full_shift(2, 2), rect(4, 4)).count(limit=100)


def test_enumerate_examples():
    words = enumerate_locally_admissible(golden_mean(), rect(2))
    assert sorted(p.to_grid_text() for p in words) == ["0 0", "0 1", "1 0"]
    assert len(enumerate_locally_admissible(full_shift(2, 2), rect(2, 2))) == 16
    assert enumerate_locally_admissible(empty_sft(2), rect(2, 2)) == set()


@settings(max_examples=40)
@given(st.sets(st.tuples(*[st.sampled_from("01")] * 4), max_size=16), st.integers(1, 3), st.integers(1, 3))
def test_downward_closed(table, n, m):
    cells = box((2, 2))
    s = Syntax.build(["0", "1"], cells, "allowed", [dict(zip(cells, t)) for t in table])
    big = enumerate_locally_admissible(s, rect(n + 1, m + 1))
    small = enumerate_locally_admissible(s, rect(n, m))
    assert {p.restrict(rect(n, m)) for p in big} <= small
