"""Group oracles with exact element encodings.

Every group exposes ``mul``, ``inv``, ``identity``, ``sort_key`` (a fixed total
order used to pick canonical coset representatives) and ``contains``.  Finite
groups also expose ``elements()``.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Sequence
from fractions import Fraction
from typing import Any

Element = Any


class ConfigurationError(ValueError):
    """Raised when group or instance data fails a structural spot-check."""


class Group:
    name = "group"

    def mul(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inv(self, a: Element) -> Element:
        raise NotImplementedError

    def identity(self) -> Element:
        raise NotImplementedError

    def sort_key(self, a: Element) -> tuple:
        raise NotImplementedError

    def contains(self, a: Element) -> bool:
        return True

    def eq(self, a: Element, b: Element) -> bool:
        return a == b

    def elements(self) -> list[Element]:
        raise TypeError(f"{self.name} is not enumerable")

    @property
    def is_finite(self) -> bool:
        return False

    def prod(self, *xs: Element) -> Element:
        out = self.identity()
        for x in xs:
            out = self.mul(out, x)
        return out

    def format(self, a: Element) -> str:
        return str(a)

    def check_axioms(self, samples: Sequence[Element]) -> bool:
        e = self.identity()
        for a in samples:
            if not (self.eq(self.mul(a, e), a) and self.eq(self.mul(e, a), a)):
                return False
            if not self.eq(self.mul(a, self.inv(a)), e):
                return False
        for a, b, c in itertools.product(samples, repeat=3):
            if not self.eq(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c))):
                return False
        return True


class SymmetricGroup(Group):
    """Permutations of {0..n-1} as image tuples; ``(a*b)(i) = a(b(i))``."""

    def __init__(self, n: int):
        self.n = n
        self.name = f"S{n}"

    def mul(self, a, b):
        return tuple(a[i] for i in b)

    def inv(self, a):
        out = [0] * len(a)
        for i, ai in enumerate(a):
            out[ai] = i
        return tuple(out)

    def identity(self):
        return tuple(range(self.n))

    def sort_key(self, a):
        return tuple(a)

    def contains(self, a):
        return isinstance(a, tuple) and sorted(a) == list(range(self.n))

    def elements(self):
        return [tuple(p) for p in itertools.permutations(range(self.n))]

    @property
    def is_finite(self):
        return True

    def cycle(self, *points: int):
        img = list(range(self.n))
        for i, p in enumerate(points):
            img[p] = points[(i + 1) % len(points)]
        return tuple(img)

    def format(self, a):
        seen, cycles = set(), []
        for i in range(self.n):
            if i in seen or a[i] == i:
                continue
            c, j = [], i
            while j not in seen:
                seen.add(j)
                c.append(str(j + 1))
                j = a[j]
            cycles.append("(" + " ".join(c) + ")")
        return "".join(cycles) or "e"


class CyclicGroup(Group):
    """Z/n written additively."""

    def __init__(self, n: int):
        self.n = n
        self.name = f"Z{n}"

    def mul(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return (-a) % self.n

    def identity(self):
        return 0

    def sort_key(self, a):
        return (a,)

    def contains(self, a):
        return isinstance(a, int) and 0 <= a < self.n

    def elements(self):
        return list(range(self.n))

    @property
    def is_finite(self):
        return True


def _prime_support(n: int) -> set[int]:
    out, p = set(), 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


class AdditiveRationals(Group):
    """Additive subgroup of Q: all of Q, or Z[1/p1,...] when ``primes`` is given.

    ``primes=()`` gives the integers.
    """

    def __init__(self, primes: Iterable[int] | None = None):
        self.primes = None if primes is None else tuple(primes)
        if self.primes is None:
            self.name = "Q"
        elif not self.primes:
            self.name = "Z"
        else:
            self.name = "Z[1/" + ",".join(map(str, self.primes)) + "]"

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def identity(self):
        return Fraction(0)

    def sort_key(self, a):
        return (a,)

    def contains(self, a):
        if not isinstance(a, (int, Fraction)):
            return False
        if self.primes is None:
            return True
        return _prime_support(Fraction(a).denominator) <= set(self.primes)


class MultiplicativeRationals(Group):
    """Positive rationals under multiplication, optionally generated by ``primes``."""

    def __init__(self, primes: Iterable[int] | None = None):
        self.primes = None if primes is None else tuple(primes)
        self.name = "Q+*" if self.primes is None else "<" + ",".join(map(str, self.primes)) + ">"

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / Fraction(a)

    def identity(self):
        return Fraction(1)

    def sort_key(self, a):
        return (a,)

    def contains(self, a):
        if not isinstance(a, (int, Fraction)) or a <= 0:
            return False
        if self.primes is None:
            return True
        a = Fraction(a)
        return (_prime_support(a.numerator) | _prime_support(a.denominator)) <= set(self.primes)


def _fmt_q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class SemidirectProduct(Group):
    """N x| Q with ``(n1,q1)(n2,q2) = (n1 * (q1 . n2), q1 q2)``."""

    def __init__(self, n_group: Group, q_group: Group, action: Callable[[Element, Element], Element]):
        self.n_group = n_group
        self.q_group = q_group
        self.action = action
        self.name = f"{n_group.name}x|{q_group.name}"

    def mul(self, a, b):
        (n1, q1), (n2, q2) = a, b
        return (self.n_group.mul(n1, self.action(q1, n2)), self.q_group.mul(q1, q2))

    def inv(self, a):
        n, q = a
        qi = self.q_group.inv(q)
        return (self.action(qi, self.n_group.inv(n)), qi)

    def identity(self):
        return (self.n_group.identity(), self.q_group.identity())

    def sort_key(self, a):
        return self.n_group.sort_key(a[0]) + self.q_group.sort_key(a[1])

    def contains(self, a):
        return (isinstance(a, tuple) and len(a) == 2
                and self.n_group.contains(a[0]) and self.q_group.contains(a[1]))

    def eq(self, a, b):
        return self.n_group.eq(a[0], b[0]) and self.q_group.eq(a[1], b[1])

    def n(self, n) -> tuple:
        return (n, self.q_group.identity())

    def q(self, q) -> tuple:
        return (self.n_group.identity(), q)

    @property
    def is_finite(self):
        return self.n_group.is_finite and self.q_group.is_finite

    def elements(self):
        return [(n, q) for n in self.n_group.elements() for q in self.q_group.elements()]

    def format(self, a):
        n, q = a
        fn = _fmt_q(n) if isinstance(n, (int, Fraction)) else self.n_group.format(n)
        fq = _fmt_q(q) if isinstance(q, (int, Fraction)) else self.q_group.format(q)
        return f"({fn},{fq})"


def semidirect_product(n_group: Group, q_group: Group,
                       action: Callable[[Element, Element], Element],
                       samples: tuple[Sequence, Sequence] | None = None) -> SemidirectProduct:
    """Build N x| Q, spot-checking that ``action`` is by automorphisms.

    ``samples`` is ``(n_samples, q_samples)``; every pair is checked for
    closure in N, additivity in n and compatibility with multiplication in Q.
    """
    if samples is not None:
        ns, qs = samples
        for q in qs:
            for n in ns:
                for r in (q, q_group.inv(q)):
                    if not n_group.contains(action(r, n)):
                        raise ConfigurationError(f"action of {r} moves {n} outside {n_group.name}")
            for n1, n2 in itertools.product(ns, repeat=2):
                if action(q, n_group.mul(n1, n2)) != n_group.mul(action(q, n1), action(q, n2)):
                    raise ConfigurationError(f"action of {q} is not additive on ({n1}, {n2})")
            for q2 in qs:
                for n in ns:
                    if action(q_group.mul(q, q2), n) != action(q, action(q2, n)):
                        raise ConfigurationError(f"action is not a homomorphism at ({q}, {q2})")
        for n in ns:
            if action(q_group.identity(), n) != n:
                raise ConfigurationError("identity of Q acts nontrivially")
    return SemidirectProduct(n_group, q_group, action)


def divide_action(q, n):
    """The Bost-Connes action ``q . n = n / q``."""
    return Fraction(n) / Fraction(q)


def trivial_action(q, n):
    return n
