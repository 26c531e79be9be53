from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sftent.basex import (
    THICK,
    THIN,
    LevelColoring,
    all_colorings,
    build_x_pattern,
    check_x_constraints,
    column_frequency,
    column_frequency_fast,
    delta_exact,
)
from sftent.geometry import net_cells

colorings = st.lists(st.integers(0, 1), max_size=8).map(lambda b: LevelColoring(tuple(b)))


def test_build_examples():
    p = build_x_pattern(LevelColoring((0,)), 2)
    assert all(b == 0 for row in p.bits for b in row)
    assert p.bullets() == {(1, 1), (2, 2)}
    assert p.arrows[0] == p.arrows[1] == (THIN, THIN)
    r = build_x_pattern(LevelColoring((0, 1)), 3)
    assert r.arrows[1] == (THICK,) * 3 and r.arrows[0] == (THIN,) * 3
    q = build_x_pattern(LevelColoring((1, 0)), 4)
    assert q.bits[0] == (1, 0, 1, 0)
    assert all(b == 0 for row in build_x_pattern(LevelColoring(()), 5).bits for b in row)


@given(colorings, st.integers(1, 24))
def test_built_patterns_pass(rho, n):
    p = build_x_pattern(rho, n)
    assert check_x_constraints(p)
    assert p.bullets() == {c for c in net_cells(n) if c[0] <= n and c[1] <= n}


def test_constraint_violations():
    p = build_x_pattern(LevelColoring((1, 0, 1)), 8)
    x, y = 3, 2
    assert not check_x_constraints(p.replace(x, y, bit=1 - p.cell(x, y)[1]))
    row = 3
    flipped = THIN if p.arrows[row - 1][0] == THICK else THICK
    assert not check_x_constraints(p.replace(1, row, arrow=flipped))


def test_delta_examples():
    assert delta_exact(LevelColoring((1,))) == Fraction(1, 2)
    assert delta_exact(LevelColoring((1, 1))) == Fraction(3, 4)
    assert delta_exact(LevelColoring(())) == 0


def test_frequency_examples():
    assert column_frequency(LevelColoring((1,)), 4) == Fraction(1, 2)
    assert column_frequency(LevelColoring((0, 1)), 4) == Fraction(1, 4)
    for L in range(1, 7):
        assert column_frequency(LevelColoring((1,) * L), 2**L) == Fraction(2**L - 1, 2**L)


@given(colorings, st.integers(1, 300))
def test_fast_frequency_and_error_bound(rho, n):
    f = column_frequency(rho, n)
    assert column_frequency_fast(rho, n) == f
    if n >= 2**rho.L:
        assert abs(f - delta_exact(rho)) <= Fraction(rho.L + 2, n)


@given(colorings, st.integers(1, 8), st.integers(1, 40))
def test_levels_are_independent(rho, m, n):
    bits = list(rho.bits) + [0] * max(0, m - rho.L)
    bits[m - 1] ^= 1
    other = LevelColoring(tuple(bits))
    a, b = build_x_pattern(rho, n).bits[0], build_x_pattern(other, n).bits[0]
    from sftent.geometry import net_level
    for c in range(1, n + 1):
        assert (a[c - 1] != b[c - 1]) == (net_level(c) == m)


def test_all_colorings():
    assert len(all_colorings(3)) == 1 + 2 + 4 + 8
    with pytest.raises(ValueError):
        LevelColoring((2,))
