"""Exact scalar fields: prime fields F_p and the rationals.

Scalars are plain Python values (ints in [0, p) for F_p, `fractions.Fraction`
for Q) interpreted relative to a `Field` object.  All arithmetic is exact;
there is no floating point anywhere in this package.
"""

from __future__ import annotations

from fractions import Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """Common interface for the two supported exact fields."""

    p: int  # 0 means characteristic zero (rationals)

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("catsl2.Field", self.p))

    # subclasses provide: zero, one, of, add, sub, mul, neg, inv, is_zero


class Fp(Field):
    """The prime field F_p, elements stored as ints in [0, p)."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"field order must be prime, got {p}")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def __repr__(self):
        return f"Fp({self.p})"

    def of(self, x) -> int:
        if isinstance(x, Fraction):
            return self.mul(x.numerator % self.p, self.inv(x.denominator % self.p))
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def primitive_root(self) -> int:
        """Smallest primitive root mod p (deterministic 'generic q')."""
        if self.p == 2:
            return 1
        order = self.p - 1
        prime_factors = []
        m, d = order, 2
        while d * d <= m:
            if m % d == 0:
                prime_factors.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            prime_factors.append(m)
        for g in range(2, self.p):
            if all(pow(g, order // q, self.p) != 1 for q in prime_factors):
                return g
        raise RuntimeError("no primitive root found")  # unreachable for prime p


class QQ(Field):
    """The rational numbers, elements stored as Fraction (lowest terms)."""

    def __init__(self):
        self.p = 0
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __repr__(self):
        return "QQ()"

    def of(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0


_Q = QQ()
_FP_CACHE: dict[int, Fp] = {}


def rationals() -> QQ:
    return _Q


def prime_field(p: int) -> Fp:
    if p not in _FP_CACHE:
        _FP_CACHE[p] = Fp(p)
    return _FP_CACHE[p]


def parse_field(token: str) -> Field:
    """Parse a CLI field token: 'q' for the rationals, 'fp:<prime>' for F_p."""
    token = token.strip().lower()
    if token == "q":
        return rationals()
    if token.startswith("fp:"):
        return prime_field(int(token[3:]))
    raise ValueError(f"unknown field token {token!r} (expected 'q' or 'fp:<prime>')")


def scalar_str(field: Field, a) -> str:
    return str(a)


def parse_scalar(field: Field, s: str):
    """Parse 'n' or 'n/d' in the given field."""
    return field.of(Fraction(s))
