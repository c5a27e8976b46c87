"""Exact scalar arithmetic: prime fields, rationals and extended binomials.

Rationals are :class:`fractions.Fraction`; prime-field elements are plain
``int`` residues in ``[0, p)`` with the modulus carried by a :class:`GF`
instance.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import InvalidModulus

DEFAULT_PRIMES = (31991, 104729)

# Deterministic Miller-Rabin witnesses for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=256)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def field_inv(a: int, p: int) -> int:
    """Inverse of ``a`` modulo the prime ``p``."""
    if not is_prime(p):
        raise InvalidModulus(f"{p} is not prime")
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


def binomial_ext(n: int, k: int) -> int:
    """Binomial coefficient extended polynomially to any integer ``n``.

    ``binomial_ext(n, k) = n (n-1) ... (n-k+1) / k!``, so e.g.
    ``binomial_ext(-1, 4) == 1`` and ``binomial_ext(3, 4) == 0``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    num = 1
    for i in range(k):
        num *= n - i
    return num // factorial(k)


class QQField:
    """The rational numbers as a coefficient domain."""

    characteristic = 0

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, QQField)

    def __hash__(self):
        return hash("QQ")

    def convert(self, x) -> Fraction:
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
            raise ZeroDivisionError("division by zero in QQ")
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    def to_str(self, a) -> str:
        return str(a)


class GF:
    """The prime field ``Z/pZ``; elements are ints in ``[0, p)``."""

    def __init__(self, p: int):
        p = int(p)
        if not is_prime(p):
            raise InvalidModulus(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def convert(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        return field_inv(a, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def symmetric(self, a: int) -> int:
        """Representative of ``a`` in ``(-p/2, p/2]``."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a

    def to_str(self, a) -> str:
        return str(self.symmetric(a))


QQ = QQField()
