"""Base fields: GF(p) for a prime p < 2**31, or the rationals.

Scalars are plain Python values in canonical form: an ``int`` in
``range(p)`` for prime fields and a ``fractions.Fraction`` for the
rationals (``Fraction`` is always reduced with a positive denominator).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterator, Optional, Union

from .errors import UnsupportedFieldError

Scalar = Union[int, Fraction]

MAX_PRIME = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == "prime":
            if self.p is None or not (2 <= self.p < MAX_PRIME) or not is_prime(self.p):
                raise ValueError(f"GF(p) needs a prime 2 <= p < 2**31, got {self.p!r}")
        elif self.kind == "rational":
            if self.p is not None:
                raise ValueError("the rational field has no modulus")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", int(p))

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls("rational")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``"5"``, ``"GF(5)"`` or ``"Q"``."""
        t = str(text).strip()
        if t.upper() in ("Q", "QQ", "RATIONAL"):
            return cls.rational()
        if t.upper().startswith("GF(") and t.endswith(")"):
            t = t[3:-1]
        return cls.prime(int(t))

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    def __str__(self):
        return f"GF({self.p})" if self.is_prime else "Q"

    @property
    def zero(self) -> Scalar:
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.is_prime else Fraction(1)

    def canon(self, x) -> Scalar:
        if self.is_prime:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def inv(self, x: Scalar) -> Scalar:
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.is_prime:
            return pow(x, -1, self.p)
        return Fraction(1) / x

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return (a + b) % self.p if self.is_prime else a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return (a - b) % self.p if self.is_prime else a - b

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return (a * b) % self.p if self.is_prime else a * b

    def neg(self, a: Scalar) -> Scalar:
        return (-a) % self.p if self.is_prime else -a

    def elements(self) -> Iterator[int]:
        if not self.is_prime:
            raise UnsupportedFieldError("the rationals cannot be enumerated")
        return iter(range(self.p))

    def random(self, rng, lo: int = -3, hi: int = 3) -> Scalar:
        """Uniform element of GF(p), or a small random rational."""
        if self.is_prime:
            return rng.randrange(self.p)
        num = rng.randint(lo, hi)
        den = rng.randint(1, max(1, hi))
        return Fraction(num, den)

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p} if self.is_prime else {"kind": "rational"}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        kind = obj.get("kind")
        if kind == "prime":
            return cls.prime(obj["p"])
        if kind == "rational":
            return cls.rational()
        raise ValueError(f"unknown field kind {kind!r}")
