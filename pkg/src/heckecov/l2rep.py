"""The canonical representations on l2(G/H).

* ``M(f)`` multiplies by a function on cosets,
* ``rho([HaH])`` is right convolution, sending e_y to the indicator of yHa^-1H,
* ``lambda_x`` is the quasi-regular permutation e_y -> e_xy.

When G/H is finite every operator is materialized as an exact
:class:`~heckecov.linalg.Matrix` indexed by the sorted cosets; otherwise it is
a :class:`~heckecov.linalg.LazyOperator` and identities are certified on
explicit probe columns only.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping

from .hecke import HeckeElement
from .linalg import LazyOperator, Matrix, Operator, Vector, vadd, vclean, vscale
from .pair import CosetKey, DoubleCosetKey, HeckePair
from .reports import CheckReport
from .scalars import Scalar


def _build(pair: HeckePair, col: Callable, adj: Callable, name: str) -> Operator:
    if pair.is_finite:
        cosets = pair.cosets()
        return Matrix.from_columns(cosets, cosets, {c: col(c) for c in cosets})
    return LazyOperator(col, adj, name=name)


def indicator(pair: HeckePair, x) -> Vector:
    """The basis vector e_{xH}."""
    return {pair.coset_key(x): Scalar(1)}


def identity_op(pair: HeckePair) -> Operator:
    return _build(pair, lambda c: {c: Scalar(1)}, lambda c: {c: Scalar(1)}, "1")


def m_op(pair: HeckePair, f: Mapping | Callable) -> Operator:
    """Pointwise multiplication by ``f`` (a dict on cosets, or a callable)."""
    if callable(f):
        value = lambda c: Scalar.coerce(f(c))
    else:
        table = {pair.coset_key(k): Scalar.coerce(v) for k, v in f.items()}
        value = lambda c: table.get(c, Scalar())
    return _build(pair,
                  lambda c: vclean({c: value(c)}),
                  lambda c: vclean({c: value(c).conjugate()}),
                  "M")


def m_indicator(pair: HeckePair, x) -> Operator:
    """``M(e_{xH})``, the projection onto the line through e_{xH}."""
    return m_op(pair, {pair.coset_key(x): 1})


def _rho_column(pair: HeckePair, f: HeckeElement, c: CosetKey) -> Vector:
    g = pair.group
    out: Vector = {}
    for key, val in f.items():
        for u in pair.left_cosets(g.inv(key.rep)):
            tgt = pair.coset_key(g.mul(c.rep, u.rep))
            out = vadd(out, {tgt: val})
    return out


def rho_op(pair: HeckePair, f) -> Operator:
    """Right convolution by a Hecke element (or by ``[HaH]`` for a group element)."""
    if not isinstance(f, HeckeElement):
        f = HeckeElement.basis(pair, f)
    fs = f.star()
    return _build(pair, lambda c: _rho_column(pair, f, c), lambda c: _rho_column(pair, fs, c), "rho")


def lambda_op(pair: HeckePair, x) -> Operator:
    """Quasi-regular representation ``e_{yH} -> e_{xyH}``."""
    g = pair.group
    xi = g.inv(x)
    return _build(pair,
                  lambda c: {pair.coset_key(g.mul(x, c.rep)): Scalar(1)},
                  lambda c: {pair.coset_key(g.mul(xi, c.rep)): Scalar(1)},
                  "lambda")


def rank_one(pair: HeckePair, xi: Mapping, eta: Mapping) -> Operator:
    """``xi (x) conj(eta)``: zeta -> <zeta, eta> xi."""
    xi, eta = vclean(xi), vclean(eta)
    col = lambda c: vscale(eta[c].conjugate(), xi) if c in eta else {}
    adj = lambda c: vscale(xi[c].conjugate(), eta) if c in xi else {}
    return _build(pair, col, adj, "rank-one")


def zero_op(pair: HeckePair) -> Operator:
    return _build(pair, lambda c: {}, lambda c: {}, "0")


# --- probe windows --------------------------------------------------------------

def probe_columns(pair: HeckePair, anchors: Iterable, window: Iterable = ()) -> list[CosetKey]:
    """Anchor cosets, their one-step translates by H-generators, and a window."""
    g = pair.group
    out = set()
    for x in anchors:
        c = pair.coset_key(x)
        out.add(c)
        for h in pair.h_generators:
            out.add(pair.coset_key(g.mul(h, c.rep)))
    out.update(pair.coset_key(w) for w in window)
    return sorted(out)


def _compare(pair: HeckePair, lhs: Operator, rhs: Operator, columns) -> object:
    """``None`` when equal; a differing column otherwise.  Exhaustive when finite."""
    if isinstance(lhs, Matrix) and isinstance(rhs, Matrix):
        if lhs == rhs:
            return None
        return lhs.equal_on(rhs, lhs.cols)
    return lhs.equal_on(rhs, columns)


# --- identity checks ------------------------------------------------------------

def matrix_unit_formula_check(pair: HeckePair, x, y, window: Iterable = ()) -> CheckReport:
    """``M(e_x) rho([Hx^-1yH]) M(e_y) = e_x (x) conj(e_y)``."""
    g = pair.group
    lhs = m_indicator(pair, x) @ rho_op(pair, g.mul(g.inv(x), y)) @ m_indicator(pair, y)
    rhs = rank_one(pair, indicator(pair, x), indicator(pair, y))
    cols = probe_columns(pair, [x, y], window)
    bad = _compare(pair, lhs, rhs, cols)
    return CheckReport("matrix-unit-formula", bad is None, probes=1 if pair.is_finite else len(cols),
                       witness=None if bad is None else {"x": pair.fmt(x), "y": pair.fmt(y), "column": pair.fmt(bad)},
                       details={"scope": "exhaustive" if pair.is_finite else "verified on probe set"})


def check_rM(pair: HeckePair, a, y, window: Iterable = ()) -> CheckReport:
    """``rho([HaH]) M(e_y) = sum_{uH in Ha^-1H} e_{yu} (x) conj(e_y)``."""
    g = pair.group
    y = y.rep if isinstance(y, CosetKey) else y
    lhs = rho_op(pair, a) @ m_indicator(pair, y)
    xi: Vector = {}
    for u in pair.left_cosets(g.inv(a.rep if isinstance(a, DoubleCosetKey) else a)):
        xi = vadd(xi, indicator(pair, g.mul(y, u.rep)))
    rhs = rank_one(pair, xi, indicator(pair, y))
    cols = probe_columns(pair, [y], window)
    bad = _compare(pair, lhs, rhs, cols)
    return CheckReport("rM", bad is None, probes=1,
                       witness=None if bad is None else {"a": pair.fmt(a), "y": pair.fmt(y), "column": pair.fmt(bad)})


def check_lambda_rho_commute(pair: HeckePair, z, f, window: Iterable = ()) -> CheckReport:
    lam, rho = lambda_op(pair, z), rho_op(pair, f)
    cols = probe_columns(pair, [pair.group.identity()], window)
    bad = _compare(pair, lam @ rho, rho @ lam, cols)
    return CheckReport("lambda-rho-commute", bad is None, probes=1,
                       witness=None if bad is None else {"z": pair.fmt(z), "column": pair.fmt(bad)})


def check_adjoint_pairing(pair: HeckePair, op: Operator, vectors: list[Mapping]) -> CheckReport:
    """``<A xi, eta> = <xi, A* eta>`` on all ordered pairs of the given vectors."""
    from .linalg import inner
    adj = op.adjoint()
    n = 0
    for xi in vectors:
        for eta in vectors:
            n += 1
            if inner(op.apply(xi), eta) != inner(xi, adj.apply(eta)):
                return CheckReport("adjoint-pairing", False, probes=n, witness={"xi": str(xi), "eta": str(eta)})
    return CheckReport("adjoint-pairing", True, probes=n)
