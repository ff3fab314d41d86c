"""Exact coefficient fields: GF(2) and the rationals."""
from fractions import Fraction


class Field:
    name = None

    def coerce(self, x):
        raise NotImplementedError

    def is_zero(self, x):
        return x == 0

    def __repr__(self):
        return f"<field {self.name}>"


class _GF2(Field):
    name = "gf2"
    zero = 0
    one = 1

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator % 2 == 0:
                raise ZeroDivisionError("denominator is zero in GF(2)")
            return x.numerator % 2
        return int(x) % 2

    def add(self, a, b):
        return a ^ b

    def sub(self, a, b):
        return a ^ b

    def neg(self, a):
        return a

    def mul(self, a, b):
        return a & b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def sign(self, i):
        return 1


class _Rationals(Field):
    name = "q"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / a

    def div(self, a, b):
        return a / b

    def sign(self, i):
        return Fraction(-1 if i % 2 else 1)


GF2 = _GF2()
Q = _Rationals()
FIELDS = {"gf2": GF2, "q": Q}


def get_field(tag):
    """Resolve a field tag ('gf2', 'q', or a Field instance)."""
    if isinstance(tag, Field):
        return tag
    try:
        return FIELDS[str(tag).lower()]
    except KeyError:
        raise ValueError(f"unknown field {tag!r}; expected one of {sorted(FIELDS)}") from None
