"""Built-in Hecke pairs.

Finite pairs come back as :class:`HeckePair`; the semidirect ones (the
one-prime Bost-Connes pair, the full Bost-Connes pair, and a normal
trivial-action pair) come back as :class:`SemidirectHeckeInstance`.
"""

from __future__ import annotations

import random
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .groups import (AdditiveRationals, ConfigurationError, CyclicGroup, MultiplicativeRationals,
                     SymmetricGroup, divide_action, semidirect_product, trivial_action)
from .pair import HeckePair
from .semigroup import OreSemigroupSpec, SemidirectHeckeInstance, commutative_ore_witness


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str  # "finite" or "semidirect"
    build: Callable
    defaults: Mapping
    description: str


def _perm_parity(a) -> int:
    seen, parity = set(), 0
    for i in range(len(a)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = a[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def s3_s2() -> HeckePair:
    g = SymmetricGroup(3)
    return HeckePair(g, [g.cycle(0, 1)], lambda a: a[2] == 2, name="s3-s2")


def s4_s3() -> HeckePair:
    g = SymmetricGroup(4)
    return HeckePair(g, [g.cycle(0, 1), g.cycle(0, 1, 2)], lambda a: a[3] == 3, name="s4-s3")


def z4_normal() -> HeckePair:
    g = CyclicGroup(4)
    return HeckePair(g, [2], lambda a: a % 2 == 0, name="z4-normal")


def s3_a3() -> HeckePair:
    g = SymmetricGroup(3)
    return HeckePair(g, [g.cycle(0, 1, 2)], lambda a: _perm_parity(a) == 0, name="s3-a3")


def bc_coset_rep(x):
    """Canonical representative of (n, q)H for H = Z: (n, q)(k, 1) = (n + k/q, q)."""
    n, q = Fraction(x[0]), Fraction(x[1])
    return ((n * q) % 1 / q, q)


def _is_int(n) -> bool:
    return Fraction(n).denominator == 1


def _positive_integer_in(primes):
    def contains(q):
        q = Fraction(q)
        if q.denominator != 1 or q < 1:
            return False
        if primes is None:
            return True
        m = q.numerator
        for p in primes:
            while m % p == 0:
                m //= p
        return m == 1
    return contains


def _bc_window(p: int, den_exp: int, q_exp: int) -> list:
    out = []
    den = p ** den_exp
    for k in range(-q_exp, q_exp + 1):
        q = Fraction(p) ** k
        j = 0
        while Fraction(j, den) < 1 / q:
            out.append((Fraction(j, den), q))
            j += 1
    return out


def bc_one_prime(p: int = 2, window: int = 3, q_exp: int = 2) -> SemidirectHeckeInstance:
    """(Z[1/p] x| p^Z, Z) with S = p^N; probe denominators up to p^window."""
    p, window, q_exp = int(p), int(window), int(q_exp)
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ConfigurationError(f"p = {p} is not prime")
    nq = AdditiveRationals((p,))
    qq = MultiplicativeRationals((p,))
    samples = ([Fraction(1), Fraction(1, p), Fraction(3, p * p)], [Fraction(p), Fraction(1, p)])
    g = semidirect_product(nq, qq, divide_action, samples)
    pair = HeckePair(g, [(Fraction(1), Fraction(1))], lambda x: x[1] == 1 and _is_int(x[0]),
                     coset_rep=bc_coset_rep, name=f"bc-one-prime(p={p})")
    s_spec = OreSemigroupSpec(qq, (Fraction(p),), _positive_integer_in((p,)), commutative_ore_witness)

    def sampler(rng: random.Random, kind: str):
        if kind == "s":
            return (Fraction(0), Fraction(p) ** rng.randint(0, 2))
        d = p ** rng.randint(0, window)
        n = Fraction(rng.randint(-2 * d, 2 * d), d)
        if kind == "n":
            return (n, Fraction(1))
        return (n, Fraction(p) ** rng.randint(-q_exp, q_exp))

    return SemidirectHeckeInstance(pair, s_spec, name=f"bc-one-prime(p={p})",
                                   window=_bc_window(p, window, q_exp), sampler=sampler,
                                   n_samples=[Fraction(1, p), Fraction(5, p ** 3)],
                                   params={"p": p, "window": window, "q_exp": q_exp})


BC_PROBE_PRIMES = (2, 3, 5, 7)


def bc_full(window: int = 1) -> SemidirectHeckeInstance:
    """(Q x| Q+*, Z) with S = N*; probes use the primes 2, 3, 5, 7 (probe-verified only)."""
    window = int(window)
    nq = AdditiveRationals(None)
    qq = MultiplicativeRationals(None)
    samples = ([Fraction(1), Fraction(1, 6), Fraction(2, 35)], [Fraction(2), Fraction(3, 5)])
    g = semidirect_product(nq, qq, divide_action, samples)
    pair = HeckePair(g, [(Fraction(1), Fraction(1))], lambda x: x[1] == 1 and _is_int(x[0]),
                     coset_rep=bc_coset_rep, name="bc-full")
    s_spec = OreSemigroupSpec(qq, tuple(Fraction(p) for p in BC_PROBE_PRIMES),
                              _positive_integer_in(None), commutative_ore_witness)

    def rand_q(rng, lo):
        q = Fraction(1)
        for p in rng.sample(BC_PROBE_PRIMES, 2):
            q *= Fraction(p) ** rng.randint(lo, 1)
        return q

    def sampler(rng: random.Random, kind: str):
        if kind == "s":
            return (Fraction(0), rand_q(rng, 0))
        d = 1
        for p in rng.sample(BC_PROBE_PRIMES, 2):
            d *= p ** rng.randint(0, window)
        n = Fraction(rng.randint(-2 * d, 2 * d), d)
        if kind == "n":
            return (n, Fraction(1))
        return (n, rand_q(rng, -1))

    win = [(Fraction(0), Fraction(1))] + [(Fraction(j, p), Fraction(1)) for p in BC_PROBE_PRIMES for j in range(1, p)]
    win += [(Fraction(0), Fraction(p) ** k) for p in BC_PROBE_PRIMES for k in (-1, 1)]
    return SemidirectHeckeInstance(pair, s_spec, name="bc-full", window=win, sampler=sampler,
                                   n_samples=[Fraction(1, 6), Fraction(3, 35)],
                                   params={"window": window, "probe_primes": list(BC_PROBE_PRIMES)},
                                   term_budget=16,
                                   default_probes={"triples": 100, "pairs": 60, "lemma": 40, "z": 20, "functions": 20})


def trivial_action_pair(p: int = 2, q_exp: int = 2) -> SemidirectHeckeInstance:
    """(Z x p^Z, 2Z): a direct product, so H is normal in G and R is identically 1."""
    p, q_exp = int(p), int(q_exp)
    nq = AdditiveRationals(())
    qq = MultiplicativeRationals((p,))
    g = semidirect_product(nq, qq, trivial_action, ([Fraction(1), Fraction(-3)], [Fraction(p)]))
    pair = HeckePair(g, [(Fraction(2), Fraction(1))], lambda x: x[1] == 1 and _is_int(x[0]) and x[0] % 2 == 0,
                     coset_rep=lambda x: (Fraction(x[0]) % 2, Fraction(x[1])), name=f"trivial-action(p={p})")
    s_spec = OreSemigroupSpec(qq, (Fraction(p),), _positive_integer_in((p,)), commutative_ore_witness)

    def sampler(rng: random.Random, kind: str):
        if kind == "s":
            return (Fraction(0), Fraction(p) ** rng.randint(0, 2))
        n = Fraction(rng.randint(-3, 3))
        if kind == "n":
            return (n, Fraction(1))
        return (n, Fraction(p) ** rng.randint(-q_exp, q_exp))

    win = [(Fraction(n), Fraction(p) ** k) for k in range(-q_exp, q_exp + 1) for n in (0, 1)]
    return SemidirectHeckeInstance(pair, s_spec, name=f"trivial-action(p={p})", window=win, sampler=sampler,
                                   n_samples=[Fraction(1), Fraction(3)], params={"p": p, "q_exp": q_exp})


CATALOG: dict[str, CatalogEntry] = {
    e.name: e for e in [
        CatalogEntry("s3-s2", "finite", s3_s2, {}, "S3 with the point stabiliser <(1 2)>"),
        CatalogEntry("s4-s3", "finite", s4_s3, {}, "S4 with the stabiliser of 4"),
        CatalogEntry("z4-normal", "finite", z4_normal, {}, "Z/4 with the normal subgroup 2Z/4"),
        CatalogEntry("s3-a3", "finite", s3_a3, {}, "S3 with the normal subgroup A3"),
        CatalogEntry("bc-one-prime", "semidirect", bc_one_prime, {"p": 2, "window": 3, "q_exp": 2},
                     "(Z[1/p] x| p^Z, Z), S = p^N"),
        CatalogEntry("bc-full", "semidirect", bc_full, {"window": 1},
                     "Bost-Connes pair (Q x| Q+*, Z), S = N*; probe-verified"),
        CatalogEntry("trivial-action", "semidirect", trivial_action_pair, {"p": 2, "q_exp": 2},
                     "(Z x p^Z, 2Z), normal with R = 1"),
    ]
}


def load_instance(name: str, params: Mapping | None = None):
    """Build and validate a catalog instance.  Unknown parameters are rejected."""
    try:
        entry = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown instance {name!r}; known: {', '.join(sorted(CATALOG))}") from None
    params = dict(params or {})
    unknown = set(params) - set(entry.defaults)
    if unknown:
        raise ConfigurationError(f"instance {name} takes no parameter(s) {sorted(unknown)}")
    return entry.build(**{**entry.defaults, **params})


def pair_of(inst) -> HeckePair:
    return inst.pair if isinstance(inst, SemidirectHeckeInstance) else inst
