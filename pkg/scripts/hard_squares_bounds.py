"""Upper entropy terms for hard squares next to a transfer-matrix strip estimate."""

import argparse
from dataclasses import dataclass

from sftent import hard_squares, upper_entropy_terms
from sftent.counting import strip_entropy_estimate
from sftent.numerics import fmt_decimal


@dataclass(frozen=True)
class Config:
    n_max: int = 9
    strip_width: int = 12


def main(cfg: Config) -> None:
    s = hard_squares()
    seq = upper_entropy_terms(s, cfg.n_max)
    print("n\tupper_hi")
    for n, iv in seq.terms:
        print(f"{n}\t{fmt_decimal(iv.hi)}")
    if seq.truncated:
        print(f"# truncated: {seq.truncated}")
    est = strip_entropy_estimate(s, cfg.strip_width)
    print(f"# strip estimate (width {cfg.strip_width}): [{fmt_decimal(est.lo)}, {fmt_decimal(est.hi)}]")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    ap.add_argument("--strip-width", type=int, default=Config.strip_width)
    a = ap.parse_args()
    main(Config(a.n_max, a.strip_width))
