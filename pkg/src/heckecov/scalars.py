"""Exact scalars: Gaussian rationals extended by square roots of integers.

A :class:`Scalar` is a finite sum ``sum_d c_d * sqrt(d)`` where every radicand
``d`` is a squarefree positive integer and every coefficient ``c_d`` lies in
Q(i).  The ring is closed under +, -, *, conjugation and inversion of nonzero
elements, and real elements can be compared with zero exactly.

Text form (lossless)::

    "0", "3/4", "-i*1/2", "1+2*sqrt(3)-i*5/7*sqrt(6)"
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Union

from flint import fmpz

Number = Union[int, Fraction, "Scalar"]

_ZERO = Fraction(0)


@lru_cache(maxsize=4096)
def square_decompose(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` squarefree (``n > 0``)."""
    if n <= 0:
        raise ValueError("square_decompose needs a positive integer")
    s, d = 1, 1
    for p, e in fmpz(n).factor():
        s *= int(p) ** (e // 2)
        if e % 2:
            d *= int(p)
    return s, d


def _smallest_prime(n: int) -> int:
    return n if n < 2 else int(fmpz(n).factor()[0][0])


class Scalar:
    """Element of Q(i)(sqrt 2, sqrt 3, ...), stored as {radicand: (re, im)}."""

    __slots__ = ("_t", "_h")

    def __init__(self, value: Number = 0, imag: Number = 0):
        if isinstance(value, Scalar):
            if imag:
                raise TypeError("imag must be rational when value is a Scalar")
            self._t = value._t
        else:
            re_, im_ = Fraction(value), Fraction(imag)
            self._t = {1: (re_, im_)} if (re_ or im_) else {}
        self._h = None

    @classmethod
    def _raw(cls, terms: dict) -> Scalar:
        obj = cls.__new__(cls)
        obj._t = terms
        obj._h = None
        return obj

    @classmethod
    def coerce(cls, x: Number) -> Scalar:
        return x if isinstance(x, Scalar) else cls(x)

    @classmethod
    def sqrt(cls, q: Union[int, Fraction]) -> Scalar:
        """Exact square root of a nonnegative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("sqrt of a negative rational")
        if q == 0:
            return cls()
        s, d = square_decompose(q.numerator * q.denominator)
        return cls._raw({d: (Fraction(s, q.denominator), _ZERO)})

    @property
    def terms(self) -> dict:
        return dict(self._t)

    # --- arithmetic -----------------------------------------------------
    def __add__(self, other: Number) -> Scalar:
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = Scalar(other)
            else:
                return NotImplemented
        t = dict(self._t)
        for d, (a, b) in other._t.items():
            if d in t:
                c, e = t[d]
                a, b = a + c, b + e
                if a or b:
                    t[d] = (a, b)
                else:
                    del t[d]
            else:
                t[d] = (a, b)
        return Scalar._raw(t)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar._raw({d: (-a, -b) for d, (a, b) in self._t.items()})

    def __sub__(self, other: Number) -> Scalar:
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other: Number) -> Scalar:
        return Scalar.coerce(other) - self

    def __mul__(self, other: Number) -> Scalar:
        if isinstance(other, (int, Fraction)):
            if not other:
                return Scalar()
            return Scalar._raw({d: (a * other, b * other) for d, (a, b) in self._t.items()})
        if not isinstance(other, Scalar):
            return NotImplemented
        t: dict = {}
        for d1, (a1, b1) in self._t.items():
            for d2, (a2, b2) in other._t.items():
                if d1 == 1:
                    g, d = 1, d2
                elif d2 == 1:
                    g, d = 1, d1
                else:
                    g = math.gcd(d1, d2)
                    d = (d1 // g) * (d2 // g)
                re_ = (a1 * a2 - b1 * b2) * g
                im_ = (a1 * b2 + b1 * a2) * g
                if d in t:
                    c, e = t[d]
                    re_, im_ = re_ + c, im_ + e
                t[d] = (re_, im_)
        return Scalar._raw({d: v for d, v in t.items() if v[0] or v[1]})

    __rmul__ = __mul__

    def conjugate(self) -> Scalar:
        return Scalar._raw({d: (a, -b) for d, (a, b) in self._t.items()})

    conj = conjugate

    def inverse(self) -> Scalar:
        if not self._t:
            raise ZeroDivisionError("inverse of zero scalar")
        if set(self._t) == {1}:
            a, b = self._t[1]
            n = a * a + b * b
            return Scalar._raw({1: (a / n, -b / n)})
        # Split x = A + B*sqrt(p) over the subfield without sqrt(p), then use
        # 1/x = (A - B*sqrt(p)) / (A^2 - p*B^2).
        p = _smallest_prime(max(d for d in self._t if d > 1))
        A, B = self._split(p)
        sp = Scalar._raw({p: (Fraction(1), _ZERO)})
        norm = A * A - B * B * p
        return (A - B * sp) * norm.inverse()

    def _split(self, p: int) -> tuple[Scalar, Scalar]:
        A, B = {}, {}
        for d, v in self._t.items():
            if d % p:
                A[d] = v
            else:
                B[d // p] = v
        return Scalar._raw(A), Scalar._raw(B)

    def __truediv__(self, other: Number) -> Scalar:
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if not isinstance(other, Scalar):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Number) -> Scalar:
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> Scalar:
        if n < 0:
            return self.inverse() ** (-n)
        out, base = Scalar(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # --- predicates -----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self._t)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    def is_rational(self) -> bool:
        return not self._t or (set(self._t) == {1} and self._t[1][1] == 0)

    def is_real(self) -> bool:
        return all(b == 0 for _, b in self._t.values())

    def is_gaussian(self) -> bool:
        return set(self._t) <= {1}

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._t.get(1, (_ZERO, _ZERO))[0]

    def real_part(self) -> Scalar:
        return Scalar._raw({d: (a, _ZERO) for d, (a, _) in self._t.items() if a})

    def imag_part(self) -> Scalar:
        return Scalar._raw({d: (b, _ZERO) for d, (_, b) in self._t.items() if b})

    def sign(self) -> int:
        """Exact sign of a real scalar (-1, 0 or 1)."""
        if not self.is_real():
            raise ValueError(f"sign of non-real scalar {self}")
        if not self._t:
            return 0
        if set(self._t) == {1}:
            return 1 if self._t[1][0] > 0 else -1
        p = _smallest_prime(max(d for d in self._t if d > 1))
        A, B = self._split(p)
        sa, sb = A.sign(), B.sign()
        if sb == 0 or sa == sb:
            return sa if sa else sb
        if sa == 0:
            return sb
        return sa * (A * A - B * B * p).sign()

    def abs2(self) -> Scalar:
        return self * self.conjugate()

    # --- text -----------------------------------------------------------
    def __str__(self) -> str:
        if not self._t:
            return "0"
        out = []
        for d in sorted(self._t):
            a, b = self._t[d]
            for c, imag in ((a, False), (b, True)):
                if not c:
                    continue
                sign = "-" if c < 0 else "+"
                mag = abs(c)
                body = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
                if imag:
                    body = "i*" + body
                if d != 1:
                    body += f"*sqrt({d})"
                out.append(sign + body)
        s = "".join(out)
        return s[1:] if s.startswith("+") else s

    def __repr__(self) -> str:
        return f"Scalar('{self}')"

    @classmethod
    def parse(cls, text: str) -> Scalar:
        text = text.replace(" ", "")
        if text in ("0", "", "+0", "-0"):
            return cls()
        pos = 0
        total = cls()
        while pos < len(text):
            m = _TERM.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse scalar {text!r} at {pos}")
            sign, imag, num, den, rad = m.groups()
            c = Fraction(int(num), int(den) if den else 1)
            if sign == "-":
                c = -c
            d = int(rad) if rad else 1
            s, dd = square_decompose(d)
            if dd != d:
                raise ValueError(f"radicand {d} is not squarefree")
            term = cls._raw({d: (_ZERO, c) if imag else (c, _ZERO)})
            total = total + term
            pos = m.end()
        return total


_TERM = re.compile(r"([+-]?)(i\*)?(\d+)(?:/(\d+))?(?:\*sqrt\((\d+)\))?")

ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
