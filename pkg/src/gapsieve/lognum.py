"""Sign + natural-log-magnitude arithmetic.

Quantities in the constants chain span e^{-16000} .. e^{+7000}, far outside
any fixed-range float, so nothing at that scale is ever exponentiated: a
value is carried as (sign, log|value|) with the log held as an mpmath float
at the working precision (default 80 bits, comfortably above the 60-bit
contract). Precision is process-global, mpmath-style; use working_precision()
to change it temporarily.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

import mpmath as mp

DEFAULT_PRECISION_BITS = 80

mp.mp.prec = DEFAULT_PRECISION_BITS


def set_precision(bits: int) -> None:
    if bits < 53:
        raise ValueError("working precision below double precision is not supported")
    mp.mp.prec = bits


def get_precision() -> int:
    return mp.mp.prec


@contextmanager
def working_precision(bits: int):
    old = mp.mp.prec
    set_precision(bits)
    try:
        yield
    finally:
        mp.mp.prec = old


def lse(log_terms) -> mp.mpf:
    """log(sum(exp(t))) for an iterable of logs of positive terms."""
    logs = [mp.mpf(t) for t in log_terms]
    if not logs:
        raise ValueError("empty log-sum-exp")
    m = max(logs)
    return m + mp.log(mp.fsum(mp.exp(t - m) for t in logs))


class LogNumber:
    """A real number as sign in {-1, 0, +1} and natural log of magnitude."""

    __slots__ = ("sign", "logmag")

    def __init__(self, sign: int, logmag=0):
        if sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {sign}")
        self.sign = sign
        self.logmag = mp.mpf(logmag) if sign != 0 else mp.mpf(0)

    @classmethod
    def zero(cls) -> "LogNumber":
        return cls(0)

    @classmethod
    def one(cls) -> "LogNumber":
        return cls(1, 0)

    @classmethod
    def from_ln(cls, ln_value, sign: int = 1) -> "LogNumber":
        return cls(sign, mp.mpf(ln_value))

    @classmethod
    def from_float(cls, x) -> "LogNumber":
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, mp.log(abs(mp.mpf(x))))

    @classmethod
    def from_int(cls, n: int) -> "LogNumber":
        if n == 0:
            return cls.zero()
        return cls(1 if n > 0 else -1, mp.log(abs(n)))

    @classmethod
    def from_fraction(cls, q: Fraction) -> "LogNumber":
        if q == 0:
            return cls.zero()
        s = 1 if q > 0 else -1
        return cls(s, mp.log(abs(q.numerator)) - mp.log(q.denominator))

    def __mul__(self, other: "LogNumber") -> "LogNumber":
        s = self.sign * other.sign
        if s == 0:
            return LogNumber.zero()
        return LogNumber(s, self.logmag + other.logmag)

    def __truediv__(self, other: "LogNumber") -> "LogNumber":
        if other.sign == 0:
            raise ZeroDivisionError("division by LogNumber zero")
        if self.sign == 0:
            return LogNumber.zero()
        return LogNumber(self.sign * other.sign, self.logmag - other.logmag)

    def __neg__(self) -> "LogNumber":
        return LogNumber(-self.sign, self.logmag)

    def __add__(self, other: "LogNumber") -> "LogNumber":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        if self.sign == other.sign:
            a, b = self.logmag, other.logmag
            m, lo = (a, b) if a >= b else (b, a)
            return LogNumber(self.sign, m + mp.log1p(mp.exp(lo - m)))
        # opposite signs: the larger magnitude wins
        if self.logmag == other.logmag:
            return LogNumber.zero()
        big, small = (self, other) if self.logmag > other.logmag else (other, self)
        return LogNumber(big.sign, big.logmag + mp.log1p(-mp.exp(small.logmag - big.logmag)))

    def __sub__(self, other: "LogNumber") -> "LogNumber":
        return self + (-other)

    def pow(self, e: int) -> "LogNumber":
        if self.sign == 0:
            if e <= 0:
                raise ZeroDivisionError("0 to a nonpositive power")
            return LogNumber.zero()
        s = self.sign if e % 2 else 1
        return LogNumber(s, self.logmag * e)

    def ln(self) -> mp.mpf:
        """Natural log; requires a positive value."""
        if self.sign <= 0:
            raise ValueError(f"ln of nonpositive LogNumber (sign={self.sign})")
        return self.logmag

    def to_float(self) -> float:
        """Collapse to a double; overflows to inf / underflows to 0 silently."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * float(mp.exp(self.logmag))
        except OverflowError:
            return self.sign * float("inf")

    def __lt__(self, other: "LogNumber") -> bool:
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        return self.sign * self.logmag < other.sign * other.logmag

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogNumber):
            return NotImplemented
        return self.sign == other.sign and (self.sign == 0 or self.logmag == other.logmag)

    def __hash__(self):
        return hash((self.sign, self.logmag))

    def __le__(self, other: "LogNumber") -> bool:
        return self == other or self < other

    def __repr__(self) -> str:
        if self.sign == 0:
            return "LogNumber(0)"
        s = "-" if self.sign < 0 else ""
        return f"LogNumber({s}exp({mp.nstr(self.logmag, 12)}))"
