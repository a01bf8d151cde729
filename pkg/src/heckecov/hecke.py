"""Exact arithmetic in the Hecke algebra of a Hecke pair.

Elements are finitely supported functions on H\\G/H with values in
:class:`~heckecov.scalars.Scalar`.  The product is convolution,

    (f g)(HxH) = sum over yH in G/H of f(HyH) g(Hy^-1 x H),

and the involution is ``f*(HxH) = conj f(Hx^-1 H)``.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .pair import DoubleCosetKey, HeckePair
from .reports import CheckReport
from .scalars import Scalar


class HeckeElement:
    __slots__ = ("pair", "_data")

    def __init__(self, pair: HeckePair, data: Mapping | None = None):
        self.pair = pair
        clean: dict[DoubleCosetKey, Scalar] = {}
        for k, v in (data or {}).items():
            key = pair.double_coset_key(k)
            v = Scalar.coerce(v)
            if key in clean:
                v = clean[key] + v
            if v:
                clean[key] = v
            else:
                clean.pop(key, None)
        self._data = clean

    @classmethod
    def basis(cls, pair: HeckePair, x) -> HeckeElement:
        """The characteristic function [HxH]."""
        return cls(pair, {pair.double_coset_key(x): 1})

    @classmethod
    def unit(cls, pair: HeckePair) -> HeckeElement:
        return cls.basis(pair, pair.group.identity())

    def items(self):
        return sorted(self._data.items())

    @property
    def support(self) -> list[DoubleCosetKey]:
        return sorted(self._data)

    def __getitem__(self, x) -> Scalar:
        return self._data.get(self.pair.double_coset_key(x), Scalar())

    def __len__(self) -> int:
        return len(self._data)

    def __bool__(self) -> bool:
        return bool(self._data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.pair is other.pair and self._data == other._data

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def __add__(self, other: HeckeElement) -> HeckeElement:
        data = dict(self._data)
        for k, v in other._data.items():
            data[k] = data[k] + v if k in data else v
        return HeckeElement(self.pair, data)

    def __neg__(self) -> HeckeElement:
        return HeckeElement(self.pair, {k: -v for k, v in self._data.items()})

    def __sub__(self, other: HeckeElement) -> HeckeElement:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return convolve(self.pair, self, other)
        s = Scalar.coerce(other)
        return HeckeElement(self.pair, {k: v * s for k, v in self._data.items()})

    def __rmul__(self, other):
        s = Scalar.coerce(other)
        return HeckeElement(self.pair, {k: s * v for k, v in self._data.items()})

    def star(self) -> HeckeElement:
        return involution(self.pair, self)

    def __repr__(self) -> str:
        fmt = self.pair.fmt
        body = " + ".join(f"({v})[H{fmt(k)}H]" for k, v in self.items())
        return body or "0"


def _basis_product(pair: HeckePair, a: DoubleCosetKey, b: DoubleCosetKey) -> dict[DoubleCosetKey, int]:
    cache = pair.products
    hit = cache.get((a, b))
    if hit is not None:
        return hit
    g = pair.group
    # Summing (f g)(HzH) over the L(z) left cosets of HzH counts the pairs
    # (yH in HaH, vH in HbH) with yv in HzH, for fixed representatives y.
    counts: dict[DoubleCosetKey, int] = defaultdict(int)
    right = [v.rep for v in pair.left_cosets(b)]
    for y in pair.left_cosets(a):
        for v in right:
            counts[pair.double_coset_key(g.mul(y.rep, v))] += 1
    out = {}
    for z, n in counts.items():
        q, r = divmod(n, pair.L(z))
        if r:
            raise ArithmeticError(f"non-integral structure constant at {pair.fmt(z)}")
        out[z] = q
    cache[(a, b)] = out
    return out


def convolve(pair: HeckePair, f: HeckeElement, g: HeckeElement) -> HeckeElement:
    acc: dict[DoubleCosetKey, Scalar] = {}
    for a, fa in f.items():
        for b, gb in g.items():
            coef = fa * gb
            for z, n in _basis_product(pair, a, b).items():
                term = coef * n
                acc[z] = acc[z] + term if z in acc else term
    return HeckeElement(pair, acc)


def involution(pair: HeckePair, f: HeckeElement) -> HeckeElement:
    inv = pair.group.inv
    return HeckeElement(pair, {pair.double_coset_key(inv(k.rep)): v.conjugate() for k, v in f.items()})


def product_counting_value(pair: HeckePair, a, b, x) -> int:
    """``|(HaH ∩ xHb^-1H)/H|``, counted coset by coset."""
    g = pair.group
    target = pair.double_coset_key(g.inv(b if not isinstance(b, DoubleCosetKey) else b.rep))
    xi = g.inv(x.rep if hasattr(x, "rep") else x)
    return sum(1 for y in pair.left_cosets(a)
               if pair.double_coset_key(g.mul(xi, y.rep)) == target)


def double_coset_product_lands(pair: HeckePair, a, b) -> bool:
    """True when HaHbH = HabH, checked on every product of coset representatives."""
    g = pair.group
    a = a.rep if hasattr(a, "rep") else a
    b = b.rep if hasattr(b, "rep") else b
    target = pair.double_coset_key(g.mul(a, b))
    right = [v.rep for v in pair.left_cosets(b)]
    return all(pair.double_coset_key(g.mul(y.rep, v)) == target
               for y in pair.left_cosets(a) for v in right)


def check_mult_identity(pair: HeckePair, a, b) -> CheckReport:
    """Check ``[HaH][HbH] = R(a)R(b)/R(ab) [HabH]`` when HaHbH = HabH."""
    g = pair.group
    a = a.rep if hasattr(a, "rep") else a
    b = b.rep if hasattr(b, "rep") else b
    ab = g.mul(a, b)
    product = HeckeElement.basis(pair, a) * HeckeElement.basis(pair, b)
    coef = Fraction(pair.R(a) * pair.R(b), pair.R(ab))
    predicted = HeckeElement(pair, {pair.double_coset_key(ab): coef})
    hyp = double_coset_product_lands(pair, a, b)
    equal = product == predicted
    return CheckReport(
        name="mult-identity",
        passed=equal if hyp else True,
        probes=1,
        details={"hypothesis": hyp, "equal": equal, "coefficient": str(coef),
                 "product": repr(product), "predicted": repr(predicted),
                 "a": pair.fmt(a), "b": pair.fmt(b)},
    )


@dataclass
class StructureTable:
    """Structure constants c^z_{xy} with [HxH][HyH] = sum_z c^z_{xy}[HzH]."""

    pair: HeckePair
    keys: list[DoubleCosetKey]
    entries: dict[tuple[DoubleCosetKey, DoubleCosetKey], dict[DoubleCosetKey, int]] = field(default_factory=dict)

    def __getitem__(self, xy):
        x, y = xy
        return self.entries[(self.pair.double_coset_key(x), self.pair.double_coset_key(y))]

    def coefficient(self, x, y, z) -> int:
        return self[x, y].get(self.pair.double_coset_key(z), 0)

    def rows(self) -> list[tuple[str, str, str, int]]:
        fmt = self.pair.fmt
        out = []
        for (x, y), row in sorted(self.entries.items()):
            for z, c in sorted(row.items()):
                out.append((fmt(x), fmt(y), fmt(z), c))
        return out


def structure_constants(pair: HeckePair, generators: Iterable) -> StructureTable:
    keys = sorted({pair.double_coset_key(x) for x in generators})
    table = StructureTable(pair, keys)
    for x in keys:
        for y in keys:
            table.entries[(x, y)] = dict(sorted(_basis_product(pair, x, y).items()))
    return table
