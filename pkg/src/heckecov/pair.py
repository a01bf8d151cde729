"""Hecke pairs: left cosets, double cosets and the right-coset counting map R."""

from __future__ import annotations

import threading
from collections import deque
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

from .groups import ConfigurationError, Element, Group

DEFAULT_ORBIT_CAP = 10**6


class OrbitCapExceeded(RuntimeError):
    """not-a-Hecke-double-coset (or cap too small)"""


@dataclass(frozen=True, order=True)
class CosetKey:
    """Canonical label of a left coset xH; ordered by the group's total order."""

    order: tuple
    rep: Any = field(compare=False, hash=False)

    def __hash__(self) -> int:
        # keys of rational groups hash Fractions, which is slow; compute once
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.order)
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"CosetKey({self.rep!r})"


@dataclass(frozen=True, order=True)
class DoubleCosetKey:
    """Canonical label of HxH: the least left-coset key among its left cosets."""

    order: tuple
    rep: Any = field(compare=False, hash=False)

    def __hash__(self) -> int:
        # keys of rational groups hash Fractions, which is slow; compute once
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.order)
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"DoubleCosetKey({self.rep!r})"


class HeckePair:
    """A group G with a subgroup H given by generators and a membership test.

    ``coset_rep`` maps x to a canonical representative of xH.  When omitted,
    H must be finite: it is enumerated from the generators and the least
    element of xH (under ``group.sort_key``) is used.
    """

    def __init__(self, group: Group, h_generators: Sequence[Element],
                 in_h: Callable[[Element], bool], *,
                 coset_rep: Callable[[Element], Element] | None = None,
                 name: str = "", orbit_cap: int = DEFAULT_ORBIT_CAP):
        self.group = group
        self.h_generators = tuple(h_generators)
        self.in_h = in_h
        self.name = name or group.name
        self.orbit_cap = orbit_cap
        for h in self.h_generators:
            if not (in_h(h) and in_h(group.inv(h))):
                raise ConfigurationError(f"generator {group.format(h)} (or its inverse) is not in H")
        self._h_elements: list | None = None
        if coset_rep is None:
            self._h_elements = self._enumerate_h()
            coset_rep = self._min_rep
        self._coset_rep = coset_rep
        self._orbits: dict[CosetKey, tuple[CosetKey, ...]] = {}
        self._lock = threading.Lock()
        self._cosets: list[CosetKey] | None = None
        self._dcosets: list[DoubleCosetKey] | None = None
        self.products: dict = {}

    def __repr__(self) -> str:
        return f"HeckePair({self.name!r})"

    # --- H ------------------------------------------------------------------
    def _enumerate_h(self) -> list:
        g = self.group
        seen = {g.identity()}
        queue = deque(seen)
        while queue:
            x = queue.popleft()
            for h in self.h_generators:
                y = g.mul(h, x)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > self.orbit_cap:
                        raise OrbitCapExceeded("subgroup enumeration exceeded the orbit cap")
                    queue.append(y)
        return sorted(seen, key=g.sort_key)

    def _min_rep(self, x):
        g = self.group
        return min((g.mul(x, h) for h in self._h_elements), key=g.sort_key)

    @property
    def h_elements(self) -> list:
        if self._h_elements is None:
            raise TypeError("H is not enumerable for this pair")
        return list(self._h_elements)

    # --- keys -----------------------------------------------------------------
    def coset_key(self, x) -> CosetKey:
        if isinstance(x, CosetKey):
            return x
        r = self._coset_rep(x)
        return CosetKey(self.group.sort_key(r), r)

    def _orbit(self, x) -> tuple[CosetKey, ...]:
        start = self.coset_key(x)
        hit = self._orbits.get(start)
        if hit is not None:
            return hit
        g = self.group
        seen = {start}
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for h in self.h_generators:
                d = self.coset_key(g.mul(h, c.rep))
                if d not in seen:
                    seen.add(d)
                    if len(seen) > self.orbit_cap:
                        raise OrbitCapExceeded(
                            f"not-a-Hecke-double-coset (or cap too small): orbit of "
                            f"{g.format(start.rep)} exceeded {self.orbit_cap} cosets")
                    queue.append(d)
        orbit = tuple(sorted(seen))
        with self._lock:
            for c in orbit:
                self._orbits[c] = orbit
        return orbit

    def double_coset_key(self, x) -> DoubleCosetKey:
        if isinstance(x, DoubleCosetKey):
            return x
        if isinstance(x, CosetKey):
            x = x.rep
        least = self._orbit(x)[0]
        return DoubleCosetKey(least.order, least.rep)

    def left_cosets(self, x) -> list[CosetKey]:
        """The distinct left cosets uH contained in HxH, sorted."""
        if isinstance(x, (CosetKey, DoubleCosetKey)):
            x = x.rep
        return list(self._orbit(x))

    def R(self, x) -> int:
        """Right-coset counting map ``|H\\HxH| = |Hx^-1H/H|``."""
        if isinstance(x, (CosetKey, DoubleCosetKey)):
            x = x.rep
        return len(self._orbit(self.group.inv(x)))

    def L(self, x) -> int:
        """Number of left cosets in HxH (``R(x^-1)``)."""
        if isinstance(x, (CosetKey, DoubleCosetKey)):
            x = x.rep
        return len(self._orbit(x))

    # --- finite quotients -----------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.group.is_finite

    def cosets(self) -> list[CosetKey]:
        if self._cosets is None:
            if not self.is_finite:
                raise TypeError(f"G/H is not enumerable for {self.name}")
            self._cosets = sorted({self.coset_key(x) for x in self.group.elements()})
        return list(self._cosets)

    def double_cosets(self) -> list[DoubleCosetKey]:
        if self._dcosets is None:
            self._dcosets = sorted({self.double_coset_key(c.rep) for c in self.cosets()})
        return list(self._dcosets)

    def is_normal_on(self, samples: Sequence[Element]) -> bool:
        """True when every sampled HxH is the single coset xH."""
        return all(self.L(x) == 1 for x in samples)

    def fmt(self, x) -> str:
        if isinstance(x, (CosetKey, DoubleCosetKey)):
            x = x.rep
        return self.group.format(x)


def same_left_coset(pair: HeckePair, x, y) -> bool:
    g = pair.group
    return bool(pair.in_h(g.mul(g.inv(x), y)))


def left_cosets_in_double_coset(pair: HeckePair, x) -> list[CosetKey]:
    return pair.left_cosets(x)


def coset_count_R(pair: HeckePair, x) -> int:
    return pair.R(x)


def same_double_coset(pair: HeckePair, x, y) -> bool:
    return pair.double_coset_key(x) == pair.double_coset_key(y)
