"""Which level colorings survive the pruning loop for a constant target."""

import argparse
from dataclasses import dataclass
from fractions import Fraction

from sftent.basex import all_colorings, delta_exact
from sftent.machine import RSeq, prune_run


@dataclass(frozen=True)
class Config:
    target: Fraction = Fraction(5, 8)
    L: int = 6
    N: int = 10


def main(cfg: Config) -> None:
    r = RSeq.const(cfg.target)
    print("rho\tdelta\tverdict\tidentity")
    survivors = 0
    for rho in all_colorings(cfg.L):
        out = prune_run(rho, r, cfg.N)
        survivors += not out.halted
        ok = all(st.identity_ok for st in out.trace)
        print(f"{rho}\t{delta_exact(rho)}\t{out.verdict}\t{'ok' if ok else 'FAIL'}")
    print(f"# {survivors} of {len(all_colorings(cfg.L))} colorings survive N={cfg.N} for r={cfg.target}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--target", type=Fraction, default=Config.target)
    ap.add_argument("--L", type=int, default=Config.L)
    ap.add_argument("--N", type=int, default=Config.N)
    a = ap.parse_args()
    main(Config(a.target, a.L, a.N))
