"""Exact scalar arithmetic over the rationals or a prime field.

Rationals are represented by ``fractions.Fraction`` (arbitrary precision,
automatically in lowest terms with positive denominator).  Prime field
elements are plain ints in ``[0, p)``.  No floating point is used anywhere.

The prime is capped so that products and row-length accumulations of
residues always fit in signed 64-bit integers inside the elimination
kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import InputError

# residues < 2**20 keep dot products of length < 2**22 inside int64
MAX_PRIME = 1 << 20


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: characteristic 0 means the rationals,
    characteristic p means integers mod the prime p."""

    characteristic: int

    def __post_init__(self):
        c = self.characteristic
        if c == 0:
            return
        if not isinstance(c, int) or not _is_prime(c):
            raise InputError("field characteristic must be 0 or a prime, got %r" % (c,))
        if c >= MAX_PRIME:
            raise InputError(
                "prime %d too large; primes must be < 2**20 so modular "
                "arithmetic stays inside 64-bit integers" % c
            )

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    def zero(self):
        return Fraction(0) if self.characteristic == 0 else 0

    def one(self):
        return Fraction(1) if self.characteristic == 0 else 1

    def coerce(self, value):
        """Turn ints, 'p/q' strings, or Fractions into a canonical element."""
        p = self.characteristic
        if p == 0:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, int):
                return Fraction(value)
            if isinstance(value, str):
                try:
                    return Fraction(value)
                except (ValueError, ZeroDivisionError) as exc:
                    raise InputError("bad rational literal %r: %s" % (value, exc))
            raise InputError("cannot coerce %r into the rationals" % (value,))
        if isinstance(value, int):
            return value % p
        if isinstance(value, str):
            try:
                frac = Fraction(value)
            except (ValueError, ZeroDivisionError) as exc:
                raise InputError("bad scalar literal %r: %s" % (value, exc))
            den = frac.denominator % p
            if den == 0:
                raise InputError("denominator of %r vanishes mod %d" % (value, p))
            return (frac.numerator % p) * pow(den, -1, p) % p
        if isinstance(value, Fraction):
            return self.coerce(str(value))
        raise InputError("cannot coerce %r into F_%d" % (value, p))

    def add(self, a, b):
        return (a + b) % self.characteristic if self.characteristic else a + b

    def sub(self, a, b):
        return (a - b) % self.characteristic if self.characteristic else a - b

    def mul(self, a, b):
        return (a * b) % self.characteristic if self.characteristic else a * b

    def neg(self, a):
        return (-a) % self.characteristic if self.characteristic else -a

    def inv(self, a):
        p = self.characteristic
        if p == 0:
            if a == 0:
                raise ZeroDivisionError("inverse of 0")
            return Fraction(1) / a
        if a % p == 0:
            raise ZeroDivisionError("inverse of 0 mod %d" % p)
        return pow(a, -1, p)

    def is_zero(self, a) -> bool:
        return a == 0

    def scalar_repr(self, a) -> str:
        """Canonical string form used in reports ('3', '-1/2', ...)."""
        return str(a)


QQ = FieldSpec(0)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)
