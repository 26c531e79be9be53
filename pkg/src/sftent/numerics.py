"""Rational interval enclosures for base-2 logarithms of exact counts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv
from mpmath.libmp import to_rational

# Working precision (bits) for the interval logarithm; comfortably above the
# 2**-40 width target even after dividing by small region sizes.
LOG_PREC = 128
TARGET_WIDTH = Fraction(1, 2**40)


@dataclass(frozen=True)
class Interval:
    """Closed rational interval ``[lo, hi]``.

    ``lo is None`` marks the degenerate minus-infinity enclosure used for
    log2 of a zero count.
    """

    lo: Fraction | None
    hi: Fraction | None

    @classmethod
    def point(cls, q) -> Interval:
        q = Fraction(q)
        return cls(q, q)

    @classmethod
    def neg_inf(cls) -> Interval:
        return cls(None, None)

    @property
    def is_neg_inf(self) -> bool:
        return self.lo is None

    @property
    def width(self) -> Fraction:
        if self.is_neg_inf:
            return Fraction(0)
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if self.is_neg_inf:
            return False
        return self.lo <= x <= self.hi

    def __add__(self, other: Interval) -> Interval:
        if self.is_neg_inf or other.is_neg_inf:
            return Interval.neg_inf()
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: Interval) -> Interval:
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def scale(self, q) -> Interval:
        """Multiply by a nonnegative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("scale factor must be nonnegative")
        if self.is_neg_inf:
            return self if q else Interval.point(0)
        return Interval(self.lo * q, self.hi * q)


def _exact_power_of_two(q: Fraction) -> int | None:
    n, d = q.numerator, q.denominator
    if n > 0 and n & (n - 1) == 0 and d & (d - 1) == 0:
        return n.bit_length() - d.bit_length()
    return None


def _iv_endpoints(x) -> tuple[Fraction, Fraction]:
    a, b = x._mpi_
    return Fraction(*map(int, to_rational(a))), Fraction(*map(int, to_rational(b)))


def log2_interval(value, per: int = 1) -> Interval:
    """Enclosure of ``log2(value) / per`` for a positive rational ``value``.

    Exact when ``value`` is a power of two; otherwise an outward-rounded
    interval of width well below ``TARGET_WIDTH``. Zero gives ``neg_inf``.
    """
    q = Fraction(value)
    if q < 0:
        raise ValueError("log2 of a negative number")
    if per <= 0:
        raise ValueError("per must be positive")
    if q == 0:
        return Interval.neg_inf()
    e = _exact_power_of_two(q)
    if e is not None:
        return Interval.point(Fraction(e, per))
    # split off the binary exponent so the mpmath argument stays moderate
    shift = q.numerator.bit_length() - q.denominator.bit_length()
    saved = iv.prec
    iv.prec = LOG_PREC
    try:
        frac = iv.mpf(q.numerator) / iv.mpf(q.denominator) / iv.mpf(2) ** shift
        lg = iv.log(frac) / iv.log(iv.mpf(2))
        lo, hi = _iv_endpoints(lg)
    finally:
        iv.prec = saved
    return Interval((lo + shift) / per, (hi + shift) / per)


def log2_ratio_interval(lo_value, hi_value) -> Interval:
    """Enclosure of ``log2`` over a positive rational range ``[lo_value, hi_value]``."""
    if lo_value <= 0:
        return Interval.neg_inf()
    a = log2_interval(lo_value)
    b = log2_interval(hi_value)
    return Interval(a.lo, b.hi)


def fmt_rational(q) -> str:
    """Render an exact rational as ``p/q`` (or ``p`` when integral)."""
    if q is None:
        return "-inf"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fmt_decimal(q, places: int = 12) -> str:
    """Decimal rendering rounded half-away-from-zero to ``places`` digits."""
    if q is None:
        return "-inf"
    q = Fraction(q)
    sign = "-" if q < 0 else ""
    q = abs(q)
    scaled = q * 10**places
    whole = scaled.numerator // scaled.denominator
    if (scaled - whole) * 2 >= 1:
        whole += 1
    digits = str(whole).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}" if places else sign + digits
