import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sftent.basex import LevelColoring, all_colorings, delta_exact
from sftent.machine import RSeq
from sftent.realization import (
    LOWER_KIND,
    UPPER_KIND,
    TargetSpec,
    density_realization_report,
    entropy_bracket,
    free_layer_log2,
    surviving_levels,
)
from sftent.basex import column_frequency

C = LevelColoring


def test_survivors_examples():
    got = set(surviving_levels(2, TargetSpec.const(Fraction(1, 2)), 4))
    assert got == {C(()), C((0,)), C((1,)), C((0, 0)), C((0, 1)), C((1, 0))}
    assert len(surviving_levels(3, TargetSpec.const(1), 5)) == 15
    assert all(not any(r.bits) for r in surviving_levels(3, TargetSpec.const(0), 6))


@given(st.integers(0, 16), st.integers(1, 5), st.integers(1, 7))
def test_survivor_containments(k, L, N):
    h = Fraction(k, 16)
    t = TargetSpec.const(h)
    surv = set(surviving_levels(L, t, N))
    assert surv >= {r for r in all_colorings(L) if delta_exact(r) <= h}
    assert surv <= {r for r in all_colorings(L) if delta_exact(r) <= h + Fraction(2, 2**N)}
    assert set(surviving_levels(L, t, N + 1)) <= surv


def test_bracket_examples():
    half = TargetSpec.const(Fraction(1, 2))
    b = entropy_bracket(half, 8, 3, 6)
    assert b.lower == Fraction(1, 2) and b.upper == Fraction(1, 2) + Fraction(1, 2**7)
    assert b.lower_kind == LOWER_KIND and b.upper_kind == UPPER_KIND
    z = entropy_bracket(TargetSpec.const(0), 8, 3, 6)
    assert (z.lower, z.upper) == (0, Fraction(1, 2**7))
    one = entropy_bracket(TargetSpec.const(1), 8, 3, 6)
    assert one.lower == Fraction(7, 8) and one.upper == 1 + Fraction(1, 2**7)


def test_bracket_without_claimed_limit():
    t = TargetSpec(RSeq.const(Fraction(1, 2)), None)
    b = entropy_bracket(t, 8, 3, 6)
    assert b.upper == Fraction(1, 2) + Fraction(1, 2**7) + Fraction(1, 2**5)


@pytest.mark.parametrize("L", range(1, 7))
def test_sandwich_shrinks_along_powers_of_two(L):
    h = Fraction(5, 8)
    t = TargetSpec.const(h)
    n = 2**L
    b = entropy_bracket(t, n, L, L + 4)
    assert b.lower <= h <= b.upper
    assert b.upper - b.lower <= Fraction(1, 2 ** (n - 1)) + Fraction(L + 2, n)


def test_free_layer_count_is_frequency_times_area():
    for rho in all_colorings(4):
        for n in (3, 8, 13):
            assert free_layer_log2(rho, n) == column_frequency(rho, n) * n * n


def test_density_report():
    rows = density_realization_report(TargetSpec.const(Fraction(1, 2)), [4, 8, 16, 32])
    gaps = [r.gap for r in rows]
    assert all(g >= 0 for g in gaps)
    assert all(g <= Fraction(4 + 2, r.n) for g, r in zip(gaps, rows))
    assert all(r.max_frequency == 0 for r in density_realization_report(TargetSpec.const(0), [4, 8]))


def test_list_target_excludes_large_densities(tmp_path):
    vals = [Fraction(1, 2) + Fraction(1, 2 ** (i + 2)) for i in range(10)]
    f = tmp_path / "t.json"
    f.write_text(json.dumps({"kind": "list", "values": [str(v) for v in vals]}), encoding="utf-8")
    t = TargetSpec.from_file(str(f), Fraction(1, 2))
    surv = surviving_levels(4, t, 8)
    assert all(delta_exact(r) <= Fraction(1, 2) for r in surv)
    with pytest.raises(ValueError):
        entropy_bracket(t, 0, 4, 8)
