"""Entropy brackets around a constant target for growing square sides."""

import argparse
from dataclasses import dataclass
from fractions import Fraction

from sftent.numerics import fmt_decimal
from sftent.realization import TargetSpec, entropy_bracket, surviving_levels


@dataclass(frozen=True)
class Config:
    target: Fraction = Fraction(5, 8)
    L: int = 5
    N: int = 8
    sides: tuple[int, ...] = (2, 4, 8, 16, 32, 64)


def main(cfg: Config) -> None:
    t = TargetSpec.const(cfg.target)
    surv = surviving_levels(cfg.L, t, cfg.N)
    print("n\tlower\tupper\twitness\tlower_kind\tupper_kind")
    for n in cfg.sides:
        b = entropy_bracket(t, n, cfg.L, cfg.N, surv)
        print(f"{n}\t{fmt_decimal(b.lower)}\t{fmt_decimal(b.upper)}\t{b.witness}\t{b.lower_kind}\t{b.upper_kind}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--target", type=Fraction, default=Config.target)
    ap.add_argument("--L", type=int, default=Config.L)
    ap.add_argument("--N", type=int, default=Config.N)
    ap.add_argument("--sides", type=lambda t: tuple(int(x) for x in t.split(",")), default=Config.sides)
    a = ap.parse_args()
    main(Config(a.target, a.L, a.N, a.sides))
