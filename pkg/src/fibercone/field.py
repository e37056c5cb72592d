"""Exact coefficient fields: the rationals and prime fields.

Polynomial code stores raw coefficient values (``int`` residues for a prime
field, :class:`fractions.Fraction` for the rationals) and goes through the
owning :class:`Field` for anything beyond ring operations.  ``FieldScalar``
wraps a value together with its field for standalone arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

DEFAULT_PRIME = 32003


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Base class.  ``p`` is the characteristic (0 for the rationals)."""

    p = 0
    name = ""

    def __call__(self, value) -> FieldScalar:
        return FieldScalar(self, self.convert(value))

    def __eq__(self, other):
        return type(self) is type(other) and self.p == other.p

    def __hash__(self):
        return hash((type(self).__name__, self.p))

    def __repr__(self):
        return self.name

    zero = 0
    one = 1


class RationalField(Field):
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def convert(self, value) -> Fraction:
        if isinstance(value, FieldScalar):
            value = value.value
        if isinstance(value, float):
            raise TypeError("floating-point coefficients are not supported")
        return Fraction(value)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("division by zero in QQ")
        return 1 / Fraction(a)

    def normalize(self, a):
        return a

    def random_element(self, rng, bound: int = 9):
        return Fraction(rng.randint(-bound, bound))

    def to_str(self, a) -> str:
        return str(a)


class PrimeField(Field):
    def __init__(self, p: int = DEFAULT_PRIME):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.zero = 0
        self.one = 1

    def convert(self, value) -> int:
        if isinstance(value, FieldScalar):
            value = value.value
        if isinstance(value, Fraction):
            return value.numerator * self.inv(value.denominator % self.p) % self.p
        if isinstance(value, float):
            raise TypeError("floating-point coefficients are not supported")
        return int(value) % self.p

    def inv(self, a):
        a %= self.p
        if not a:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return pow(a, self.p - 2, self.p)

    def normalize(self, a):
        return a % self.p

    def random_element(self, rng, bound: int = 0):
        return rng.randrange(self.p)

    def to_str(self, a) -> str:
        # symmetric representative keeps printed polynomials readable
        return str(a - self.p if a > self.p // 2 else a)


QQ = RationalField()


def field_from_name(name: str) -> Field:
    """``"QQ"`` or ``"F<p>"``/``"Fp<p>"``."""
    if name == "QQ":
        return QQ
    digits = name[2:] if name.startswith("Fp") else name[1:]
    if name.startswith("F") and digits.isdigit():
        return PrimeField(int(digits))
    raise ValueError(f"unknown field {name!r}")


class FieldScalar:
    """An element of a :class:`Field`, always held in canonical form."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = field.convert(value)

    def _coerce(self, other) -> FieldScalar:
        if isinstance(other, FieldScalar):
            if other.field != self.field:
                raise ValueError("field mismatch")
            return other
        return FieldScalar(self.field, other)

    def _wrap(self, value) -> FieldScalar:
        return FieldScalar(self.field, value)

    def __add__(self, other):
        return self._wrap(self.value + self._coerce(other).value)

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.value - self._coerce(other).value)

    def __rsub__(self, other):
        return self._wrap(self._coerce(other).value - self.value)

    def __mul__(self, other):
        return self._wrap(self.value * self._coerce(other).value)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def inverse(self) -> FieldScalar:
        return self._wrap(self.field.inv(self.value))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.convert(other)
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return bool(self.value)

    def __repr__(self):
        return f"{self.field.name}({self.value})"

    def __str__(self):
        return self.field.to_str(self.value)
