from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sftent.core import BudgetExceeded
from sftent.geometry import (
    BOARD_SYMBOLS,
    TwoNetSpec,
    board,
    board_density,
    i_enum,
    i_index,
    i_set,
    in_i,
    net_level,
    order_of_5,
    residue_positions,
)


def test_net_level_examples():
    assert net_level(6) == 2 and net_level(1) == 1
    only_even = TwoNetSpec(offsets=((0, 0),))
    assert net_level(3, only_even) is None
    with pytest.raises(ValueError):
        net_level(0)


@given(st.integers(1, 10**6))
def test_standard_levels_partition(c):
    lv = net_level(c)
    assert c % 2**lv == 2 ** (lv - 1)
    assert 2**lv <= 2 * c


def test_standard_net_disjoint():
    assert TwoNetSpec.standard_net().disjoint_on(range(1, 2000))


def test_i_set_examples():
    assert i_set(1) == [1, 2, 4, 5]
    assert i_set(2) == [1, 2, 4, 5, 6, 7, 9, 10, 16, 17, 19, 20, 21, 22, 24, 25]
    assert len(i_set(3)) == 64


@pytest.mark.parametrize("n", range(1, 7))
def test_i_set_recursion_disjoint(n):
    prev = i_set(n - 1) if n > 1 else None
    cur = i_set(n)
    if prev:
        parts = [[p + t * 5 ** (n - 1) for p in prev] for t in (0, 1, 3, 4)]
        assert sum(len(set(p)) for p in parts) == len(set().union(*map(set, parts))) == len(cur)
        assert sorted(set().union(*map(set, parts))) == cur


@pytest.mark.parametrize("k,n", [(k, n) for k in range(1, 4) for n in range(k + 1, 6)])
def test_nested_periodicity(k, n):
    small, big = set(i_set(k)), set(i_set(n))
    for t in (0, 1, 3, 4):
        assert {p + t * 5**k for p in small} <= big


def test_enumeration():
    assert (i_enum(1), i_enum(5), i_enum(16)) == (1, 6, 25)
    assert [i_enum(k) for k in range(1, 4**3 + 1)] == i_set(3)


@given(st.integers(1, 10**9))
def test_enumeration_inverse(k):
    p = i_enum(k)
    assert in_i(p) and i_index(p) == k


def test_i_index_rejects_gaps():
    assert i_index(3) is None and not in_i(3)


def test_board_examples():
    b1 = board(1)
    assert len(b1.cells) == 24
    assert b1.symbol((1, 1)) == "└"
    assert len(board(2).nodes) == 256


@pytest.mark.parametrize("n", [1, 2])
def test_board_symbols(n):
    b = board(n)
    for c in b.cells:
        sym = b.symbol(c)
        assert sym in BOARD_SYMBOLS
        if not b.is_node(c):
            assert sym in ("│", "─")


def test_board_density():
    assert board_density(1) == Fraction(24, 25)
    assert board_density(2) == Fraction(544, 625)
    ds = [board_density(n) for n in range(1, 12)]
    assert all(b < a for a, b in zip(ds, ds[1:]))


def test_residue_positions_examples():
    r1 = residue_positions(1)
    assert r1.q == 1 and r1.values() == [6, 31] and r1.residues() == [0, 1]
    assert [order_of_5(N) for N in (1, 2, 3, 4, 5)] == [1, 1, 2, 4, 8]


@pytest.mark.parametrize("N", range(1, 5))
def test_residue_positions_in_i(N):
    rp = residue_positions(N)
    vals, idx = rp.values(), rp.indices()
    assert all(in_i(v) for v in vals)
    assert [i_enum(k) for k in idx] == vals


def test_residue_budget():
    with pytest.raises(BudgetExceeded):
        residue_positions(12).values(max_bits=1000)
    assert sorted(residue_positions(12).residues()) == list(range(2**12))
