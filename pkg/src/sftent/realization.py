"""Entropy brackets around a target number ``h``.

Lower ends are witnessed: a level coloring that survives pruning, with the
free binary layer placed on its 1-columns, gives ``2^(f_n n^2)`` distinct
patterns on ``F_n``. Upper ends use the asymptotic form ``h + 2^(-n+1)``
and are labelled as such.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .basex import LevelColoring, all_colorings, column_frequency_fast, count_ones_by_level, delta_exact
from .machine import RSeq, prune_run

LOWER_KIND = "witness-certified"
UPPER_KIND = "cited-asymptotic"


@dataclass(frozen=True)
class TargetSpec:
    r: RSeq
    h: Fraction | None = None

    @classmethod
    def const(cls, q, with_h: bool = True) -> TargetSpec:
        q = Fraction(q)
        return cls(RSeq.const(q), q if with_h else None)

    @classmethod
    def from_file(cls, path: str, h: Fraction | None = None) -> TargetSpec:
        with open(path, encoding="utf-8") as f:
            return cls(RSeq.from_json(json.load(f)), h)


def surviving_levels(L: int, t: TargetSpec, N: int) -> list[LevelColoring]:
    """Colorings of length at most ``L`` still running after ``N`` pruning iterations."""
    return [rho for rho in all_colorings(L) if not prune_run(rho, t.r, N).halted]


def free_layer_log2(rho: LevelColoring, n: int) -> int:
    """log2 of the number of free-layer fillings of ``F_n`` over one base pattern."""
    return count_ones_by_level(rho, n) * n


@dataclass(frozen=True)
class EntropyBracket:
    n: int
    lower: Fraction
    upper: Fraction
    witness: LevelColoring
    lower_kind: str = LOWER_KIND
    upper_kind: str = UPPER_KIND


def entropy_bracket(t: TargetSpec, n: int, L: int, N: int,
                    survivors: list[LevelColoring] | None = None) -> EntropyBracket:
    if n < 1:
        raise ValueError("n must be positive")
    surv = surviving_levels(L, t, N) if survivors is None else survivors
    if not surv:
        raise ValueError("no coloring survives pruning")
    freqs = [(column_frequency_fast(rho, n), rho) for rho in surv]
    lower, witness = max(freqs, key=lambda fr: (fr[0], -len(fr[1].bits)))
    eps = Fraction(1, 2 ** (n - 1))
    if t.h is not None:
        upper = t.h + eps
    else:
        upper = t.r(N) + eps + Fraction(1, 2 ** (N - 1))
    return EntropyBracket(n, lower, upper, witness)


@dataclass(frozen=True)
class DensityRow:
    n: int
    max_frequency: Fraction
    witness: LevelColoring
    gap: Fraction | None
    max_delta: Fraction


def density_realization_report(t: TargetSpec, n_list, L: int = 4, N: int = 8) -> list[DensityRow]:
    """Per ``n``: the largest surviving column frequency and its gap to ``h``."""
    surv = surviving_levels(L, t, N)
    max_delta = max(delta_exact(r) for r in surv)
    rows = []
    for n in n_list:
        f, w = max(((column_frequency_fast(r, n), r) for r in surv), key=lambda fr: (fr[0], -len(fr[1].bits)))
        rows.append(DensityRow(n, f, w, None if t.h is None else t.h - f, max_delta))
    return rows
