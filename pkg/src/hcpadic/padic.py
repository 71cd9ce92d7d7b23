"""Elements of Q_p at finite, explicitly tracked precision.

A non-zero value is stored as ``p**valuation * unit`` where ``unit`` is an
integer in ``[1, p**precision)`` prime to p, known modulo ``p**precision``.
Zero is only ever "zero at precision": it remembers the absolute order
``O(p**m)`` to which it is known.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from .errors import (
    PadicZeroDivisionError,
    PrecisionError,
    PrimeMismatchError,
)

DEFAULT_PRECISION = 48

INF = math.inf


def vp(n: int, p: int) -> int:
    """Exponent of p in the non-zero integer n."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _split(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


class PadicNumber:
    __slots__ = ("prime", "_ord", "unit", "precision")

    def __init__(self, prime: int, valuation: int, unit: int, precision: int):
        if prime < 2:
            raise ValueError(f"prime must be >= 2, got {prime}")
        if unit == 0:
            # zero at absolute precision `valuation`
            self.prime = prime
            self._ord = valuation
            self.unit = 0
            self.precision = 0
            return
        if precision < 1:
            raise ValueError("a non-zero value needs precision >= 1")
        if unit % prime == 0:
            raise ValueError("unit must be prime to p; use PadicNumber.normalize")
        self.prime = prime
        self._ord = valuation
        self.unit = unit % prime**precision
        self.precision = precision

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls, prime: int, absprec: int = DEFAULT_PRECISION) -> PadicNumber:
        return cls(prime, absprec, 0, 0)

    @classmethod
    def normalize(cls, prime: int, valuation: int, u: int, absprec: int) -> PadicNumber:
        """Canonical form of ``p**valuation * u`` known modulo ``p**absprec``."""
        if absprec <= valuation:
            return cls.zero(prime, absprec)
        u %= prime ** (absprec - valuation)
        if u == 0:
            return cls.zero(prime, absprec)
        s, u = _split(u, prime)
        valuation += s
        return cls(prime, valuation, u, absprec - valuation)

    @classmethod
    def from_residue(cls, r: int, prime: int, absprec: int) -> PadicNumber:
        """The p-adic integer known only as ``r mod p**absprec``."""
        return cls.normalize(prime, 0, r, absprec)

    @classmethod
    def from_rational(
        cls, numerator: int, denominator: int = 1, prime: int = 2,
        precision: int = DEFAULT_PRECISION,
    ) -> PadicNumber:
        """Image of numerator/denominator in Q_p with `precision` unit digits."""
        if denominator == 0:
            raise ZeroDivisionError("zero denominator")
        if precision < 1:
            raise ValueError("precision must be >= 1")
        if numerator == 0:
            return cls.zero(prime, precision)
        a, num = _split(numerator, prime)
        b, den = _split(denominator, prime)
        mod = prime**precision
        return cls(prime, a - b, num * pow(den, -1, mod) % mod, precision)

    @classmethod
    def coerce(cls, x, prime: int, precision: int = DEFAULT_PRECISION) -> PadicNumber:
        if isinstance(x, PadicNumber):
            if x.prime != prime:
                raise PrimeMismatchError(f"{x.prime}-adic value where {prime}-adic expected")
            return x
        if isinstance(x, (int, Rational)):
            q = Fraction(x)
            return cls.from_rational(q.numerator, q.denominator, prime, precision)
        raise TypeError(f"cannot interpret {type(x).__name__} as a {prime}-adic number")

    # -- basic accessors --------------------------------------------------

    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def valuation(self):
        """gamma(x); ``math.inf`` for zero at precision."""
        return INF if self.unit == 0 else self._ord

    @property
    def absprec(self) -> int:
        """The value is known modulo ``p**absprec``."""
        return self._ord + self.precision

    def norm(self) -> Fraction:
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.prime) ** (-self._ord)

    def unit_digits(self) -> list[int]:
        """Base-p digits of the unit part, least significant first."""
        out, u = [], self.unit
        for _ in range(self.precision):
            u, d = divmod(u, self.prime)
            out.append(d)
        return out

    def digits(self, count: int, start: int | None = None) -> list[int]:
        """Coefficients x_j of p**j for j = start, ..., start + count - 1.

        `start` defaults to ``min(0, valuation)`` so that integers list their
        expansion from p**0 (``digits(-3 in Q_3, 3) == [0, 2, 2]``).
        """
        if start is None:
            start = 0 if self.unit == 0 else min(0, self._ord)
        if start + count > self.absprec:
            raise PrecisionError(
                f"digits up to p^{start + count - 1} requested, known only mod p^{self.absprec}"
            )
        if self.unit == 0:
            return [0] * count
        ud = self.unit_digits()
        return [ud[j - self._ord] if j >= self._ord else 0 for j in range(start, start + count)]

    def residue(self, m: int) -> int:
        """Integer representative in [0, p**m) of a p-adic integer."""
        if m > self.absprec:
            raise PrecisionError(f"residue mod p^{m} of a value known mod p^{self.absprec}")
        if self.unit == 0:
            return 0
        if self._ord < 0:
            raise ValueError("residue of a non-integral p-adic number")
        return self.unit * self.prime**self._ord % self.prime**m

    def to_fraction(self) -> Fraction:
        """A rational representative (exact for the stored digits)."""
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.prime) ** self._ord

    def with_absprec(self, absprec: int) -> PadicNumber:
        """Forget digits beyond ``p**absprec``."""
        if absprec > self.absprec:
            raise PrecisionError("cannot invent digits")
        if self.unit == 0:
            return PadicNumber.zero(self.prime, absprec)
        return PadicNumber.normalize(self.prime, self._ord, self.unit, absprec)

    # -- arithmetic -------------------------------------------------------

    def _other(self, other) -> PadicNumber:
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise PrimeMismatchError(f"cannot combine {self.prime}-adic and {other.prime}-adic values")
            return other
        if isinstance(other, (int, Rational)):
            q = Fraction(other)
            if q == 0:
                return PadicNumber.zero(self.prime, max(self.absprec, 1) + 1)
            v = vp(q.numerator, self.prime) - vp(q.denominator, self.prime)
            prec = max(1, self.precision, self.absprec - v)
            return PadicNumber.from_rational(q.numerator, q.denominator, self.prime, prec)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        a, p = self, self.prime
        t = min(a.absprec, b.absprec)
        if a.unit == 0:
            return b.with_absprec(t) if b.absprec > t else b
        if b.unit == 0:
            return a.with_absprec(t) if a.absprec > t else a
        v = min(a._ord, b._ord)
        u = a.unit * p ** (a._ord - v) + b.unit * p ** (b._ord - v)
        return PadicNumber.normalize(p, v, u, t)

    __radd__ = __add__

    def __neg__(self):
        if self.unit == 0:
            return self
        return PadicNumber(self.prime, self._ord, -self.unit, self.precision)

    def __pos__(self):
        return self

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self + (-b)

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return b + (-self)

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        a, p = self, self.prime
        if a.unit == 0 or b.unit == 0:
            if a.unit == 0 and b.unit == 0:
                return PadicNumber.zero(p, a._ord + b._ord)
            z, nz = (a, b) if a.unit == 0 else (b, a)
            return PadicNumber.zero(p, z._ord + nz._ord)
        n = min(a.precision, b.precision)
        return PadicNumber(p, a._ord + b._ord, a.unit * b.unit, n)

    __rmul__ = __mul__

    def inverse(self) -> PadicNumber:
        if self.unit == 0:
            raise PadicZeroDivisionError(
                f"division by a value indistinguishable from 0 mod {self.prime}^{self._ord}"
            )
        mod = self.prime**self.precision
        return PadicNumber(self.prime, -self._ord, pow(self.unit, -1, mod), self.precision)

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        if b.unit == 0:
            raise PadicZeroDivisionError(
                f"division by a value indistinguishable from 0 mod {b.prime}^{b._ord}"
            )
        if self.unit == 0:
            return PadicNumber.zero(self.prime, self._ord - b._ord)
        return self * b.inverse()

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return b / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicNumber(self.prime, 0, 1, max(self.precision, 1))
        if self.unit == 0:
            return PadicNumber.zero(self.prime, self._ord * n)
        mod = self.prime**self.precision
        return PadicNumber(self.prime, self._ord * n, pow(self.unit, n, mod), self.precision)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        raise TypeError("p-adic values have no absolute equality; use congruent(a, b, m)")

    __hash__ = None

    def congruent(self, other, m: int) -> bool:
        return congruent(self, other, m)

    # -- rendering --------------------------------------------------------

    def __str__(self) -> str:
        p = self.prime
        if self.unit == 0:
            return f"O({p}^{self._ord})"
        terms = []
        for j, d in enumerate(self.unit_digits()):
            if j == 0:
                terms.append(str(d))
            elif d:
                terms.append(f"{d}·{p}" if j == 1 else f"{d}·{p}^{j}")
        return f"{p}^{self._ord} * ({' + '.join(terms)}) + O({p}^{self.absprec})"

    def __repr__(self) -> str:
        return f"<{self.prime}-adic {self}>"

    def to_json(self) -> dict:
        """``{prime, valuation, digits, precision}``; zero has valuation None
        and `precision` holding its absolute order."""
        if self.unit == 0:
            return {"prime": self.prime, "valuation": None, "digits": [], "precision": self._ord}
        return {
            "prime": self.prime,
            "valuation": self._ord,
            "digits": self.unit_digits(),
            "precision": self.precision,
        }

    @classmethod
    def from_json(cls, data: dict) -> PadicNumber:
        p = data["prime"]
        if data["valuation"] is None:
            return cls.zero(p, data["precision"])
        digits = data["digits"]
        if len(digits) != data["precision"]:
            raise ValueError("digit count does not match precision")
        unit = sum(d * p**j for j, d in enumerate(digits))
        return cls(p, data["valuation"], unit, data["precision"])


def from_rational(numerator: int, denominator: int, prime: int,
                  precision: int = DEFAULT_PRECISION) -> PadicNumber:
    return PadicNumber.from_rational(numerator, denominator, prime, precision)


def congruent(a: PadicNumber, b, m: int) -> bool:
    """a ≡ b (mod p**m); both operands must be known to at least p**m."""
    d = a - b
    if d.absprec < m:
        raise PrecisionError(f"congruence mod p^{m} needs operands known mod p^{m}, have p^{d.absprec}")
    return d.valuation >= m


def valuation(a: PadicNumber):
    return a.valuation


def norm(a: PadicNumber) -> Fraction:
    return a.norm()
