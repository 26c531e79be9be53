"""Bracket the entropy of a few SFTs between lower and upper terms."""

import argparse
from dataclasses import dataclass

from sftent import builtin
from sftent.irreducible import SqueezeBudget, entropy_to_precision
from sftent.numerics import fmt_decimal


@dataclass(frozen=True)
class Config:
    systems: tuple[str, ...] = ("full-shift:2:2", "hard-squares")
    precision: int = 2
    k_max: int = 3


def main(cfg: Config) -> None:
    print("system\tk\tupper\tlower")
    for name in cfg.systems:
        res = entropy_to_precision(builtin(name), cfg.precision, SqueezeBudget(k_max=cfg.k_max))
        for k, u, lo in res.history:
            low = "-" if lo is None or lo.is_neg_inf else fmt_decimal(lo.lo)
            print(f"{name}\t{k}\t{fmt_decimal(u.hi)}\t{low}")
        status = "ok" if res.ok else f"incomplete ({res.note})"
        print(f"# {name}: [{fmt_decimal(res.s_n)}, {fmt_decimal(res.u)}] width {fmt_decimal(res.width)} {status}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("systems", nargs="*", default=list(Config.systems))
    ap.add_argument("--precision", type=int, default=Config.precision, help="target width is 1/precision")
    ap.add_argument("--k-max", type=int, default=Config.k_max)
    a = ap.parse_args()
    main(Config(tuple(a.systems), a.precision, a.k_max))
