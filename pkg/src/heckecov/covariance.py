"""Covariant pairs (nu, V) for a Hecke pair and the multiplicity decomposition.

A :class:`RepPair` bundles a representation ``nu`` of the coset functions and
a representation ``V`` of the Hecke algebra on one carrier.  On a finite
carrier every check is an exact matrix identity; on a lazy carrier (labels are
the cosets of an infinite G/H) checks run on explicit probe columns.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .groups import ConfigurationError
from .hecke import HeckeElement
from .l2rep import m_indicator, probe_columns, rank_one, indicator, rho_op
from .linalg import (LazyOperator, Matrix, Operator, kron, op_sum, orthonormal_basis,
                     psd_certificate, random_unitary)
from .pair import CosetKey, DoubleCosetKey, HeckePair
from .reports import CheckReport, merge
from .scalars import Scalar


class NotCovariantError(ValueError):
    def __init__(self, report: CheckReport):
        super().__init__(f"pair is not covariant: {report.witness}")
        self.report = report


class DegenerateError(ValueError):
    """nu is degenerate, or nu(e_H) has zero range."""


class UnequalRanksError(ValueError):
    def __init__(self, census: dict):
        super().__init__(f"projection ranks differ: {census}")
        self.census = census


class RepPair:
    """A pair (nu, V) on a common carrier.

    ``nu_fn(coset_key)`` returns nu(e_{xH}); ``v_fn(double_coset_key)`` returns
    V([HaH]).  ``carrier`` is the tuple of basis labels, or ``None`` for the
    lazy l2(G/H) carrier, where ``window`` lists extra probe elements and
    ``anchor_map(x)`` lists elements whose columns also matter when x is an
    anchor (pairs whose nu is translated away from the anchors need it).
    """

    def __init__(self, pair: HeckePair, nu_fn: Callable, v_fn: Callable,
                 carrier: Sequence | None = None, name: str = "", window: Iterable = (),
                 anchor_map: Callable | None = None):
        self.pair = pair
        self.anchor_map = anchor_map
        self._nu_fn = nu_fn
        self._v_fn = v_fn
        self.carrier = None if carrier is None else tuple(carrier)
        self.name = name
        self.window = tuple(window)
        self._nu: dict = {}
        self._v: dict = {}

    def __repr__(self) -> str:
        return f"RepPair({self.name!r})"

    @property
    def lazy(self) -> bool:
        return self.carrier is None

    def nu(self, x) -> Operator:
        key = self.pair.coset_key(x)
        hit = self._nu.get(key)
        if hit is None:
            hit = self._nu[key] = self._nu_fn(key)
        return hit

    def V(self, f) -> Operator:
        if isinstance(f, HeckeElement):
            return op_sum((self.V(k) * c for k, c in f.items()), self.zero())
        key = self.pair.double_coset_key(f)
        hit = self._v.get(key)
        if hit is None:
            hit = self._v[key] = self._v_fn(key)
        return hit

    def identity(self) -> Operator:
        if self.lazy:
            return LazyOperator(lambda l: {l: Scalar(1)}, lambda l: {l: Scalar(1)}, name="1")
        return Matrix.identity(self.carrier)

    def zero(self) -> Operator:
        if self.lazy:
            return LazyOperator(lambda l: {}, lambda l: {}, name="0")
        return Matrix.zero(self.carrier, self.carrier)

    def columns(self, anchors: Iterable) -> list | None:
        """Probe columns for lazy comparisons; ``None`` means exhaustive."""
        if not self.lazy:
            return None
        anchors = list(anchors)
        if self.anchor_map is not None:
            anchors += [y for x in anchors for y in self.anchor_map(_rep(x))]
        return probe_columns(self.pair, anchors, self.window)

    def differ(self, lhs: Operator, rhs: Operator, anchors: Iterable = ()):
        """``None`` when equal (exhaustively, or on probe columns), else a column label."""
        if isinstance(lhs, Matrix) and isinstance(rhs, Matrix):
            return None if lhs == rhs else (lhs.equal_on(rhs, lhs.cols) or "matrix")
        return lhs.equal_on(rhs, self.columns(anchors))

    def is_zero(self, op: Operator, anchors: Iterable = ()):
        if isinstance(op, Matrix):
            return None if op.is_zero() else (op.is_zero_on(op.cols) or "matrix")
        return op.is_zero_on(self.columns(anchors))


def _sum(rp: RepPair, ops: Iterable[Operator]) -> Operator:
    return op_sum(ops, rp.zero())


def _rep(x):
    return x.rep if isinstance(x, (CosetKey, DoubleCosetKey)) else x


def _label(pair: HeckePair, col) -> str:
    return pair.fmt(col) if isinstance(col, (CosetKey, DoubleCosetKey)) else str(col)


# --- builders -------------------------------------------------------------------

def mrho_pair(pair: HeckePair, window: Iterable = ()) -> RepPair:
    """(M, rho) on l2(G/H)."""
    carrier = pair.cosets() if pair.is_finite else None
    return RepPair(pair, lambda c: m_indicator(pair, c), lambda k: rho_op(pair, k),
                   carrier=carrier, name="M,rho", window=window)


def multiple_pair(pair: HeckePair, d: int) -> RepPair:
    """(1 (x) M, 1 (x) rho) on C^d (x) l2(G/H); labels ``(i, coset)``."""
    eye = Matrix.identity(range(d))
    carrier = [(i, c) for i in range(d) for c in pair.cosets()]
    return RepPair(pair, lambda c: kron(eye, m_indicator(pair, c)),
                   lambda k: kron(eye, rho_op(pair, k)), carrier=carrier, name=f"{d}x(M,rho)")


def conjugate_pair(rp: RepPair, W: Operator, name: str = "") -> RepPair:
    """(Ad W o nu, Ad W o V) for a unitary ``W`` from the old carrier to a new one."""
    Wa = W.adjoint()
    carrier = W.rows if isinstance(W, Matrix) else None
    return RepPair(rp.pair, lambda c: W @ rp.nu(c) @ Wa, lambda k: W @ rp.V(k) @ Wa,
                   carrier=carrier, name=name or f"Ad W({rp.name})", window=rp.window, anchor_map=rp.anchor_map)


def character_value(pair: HeckePair, a) -> Scalar:
    """``sqrt(R(a) R(a^-1))``: the eigenvalue of [HaH] on the constant functions."""
    a = _rep(a)
    return Scalar.sqrt(pair.R(a) * pair.R(pair.group.inv(a)))


def character_pair(pair: HeckePair, window: Iterable = ()) -> RepPair:
    """(M, chi . 1): V([HaH]) is a scalar multiple of the identity."""
    base = mrho_pair(pair, window)
    return RepPair(pair, base.nu, lambda k: base.identity() * character_value(pair, k),
                   carrier=base.carrier, name="M,character", window=window)


def twist_v(rp: RepPair, phase: Callable, name: str = "") -> RepPair:
    """(nu, phase(a) V([HaH])), e.g. a gauge twist by a multiplicative phase."""
    return RepPair(rp.pair, rp.nu, lambda k: rp.V(k) * Scalar.coerce(phase(k)),
                   carrier=rp.carrier, name=name or f"twist({rp.name})", window=rp.window,
                   anchor_map=rp.anchor_map)


def shift_nu(rp: RepPair, n, name: str = "") -> RepPair:
    """(nu o translate-right-by-n, V): e_{xH} -> nu(e_{xnH})."""
    g = rp.pair.group
    inner = rp.anchor_map or (lambda x: ())
    return RepPair(rp.pair, lambda c: rp.nu(g.mul(c.rep, n)), rp.V,
                   carrier=rp.carrier, name=name or f"shift({rp.name})", window=rp.window,
                   anchor_map=lambda x: [g.mul(x, n), *inner(x), *inner(g.mul(x, n))])


def kill_generator(rp: RepPair, a, name: str = "") -> RepPair:
    """Replace V([HaH]) by zero (breaks unitality/multiplicativity)."""
    bad = rp.pair.double_coset_key(a)
    return RepPair(rp.pair, rp.nu, lambda k: rp.zero() if k == bad else rp.V(k),
                   carrier=rp.carrier, name=name or f"kill({rp.name})", window=rp.window,
                   anchor_map=rp.anchor_map)


def random_conjugate(rp: RepPair, rng: random.Random) -> tuple[RepPair, Matrix]:
    W = random_unitary(rp.carrier, rng)
    return conjugate_pair(rp, W, name=f"Ad W({rp.name})"), W


# --- representation sanity ---------------------------------------------------------

def check_nondegenerate(rp: RepPair) -> CheckReport:
    """nu(e_x) are orthogonal projections summing to the identity (finite carrier)."""
    pair = rp.pair
    if rp.lazy:
        return CheckReport("nondegenerate", True, details={"scope": "not evaluated (lazy carrier)"})
    cosets = pair.cosets()
    n = 0
    for c in cosets:
        P = rp.nu(c)
        n += 1
        if not P.is_hermitian() or P @ P != P:
            return CheckReport("nondegenerate", False, n, {"coset": pair.fmt(c), "reason": "not a projection"})
    for c, d in itertools.combinations(cosets, 2):
        n += 1
        if not (rp.nu(c) @ rp.nu(d)).is_zero():
            return CheckReport("nondegenerate", False, n,
                               {"cosets": [pair.fmt(c), pair.fmt(d)], "reason": "not orthogonal"})
    total = _sum(rp, (rp.nu(c) for c in cosets))
    if total != rp.identity():
        return CheckReport("nondegenerate", False, n, {"reason": "projections do not sum to the identity"})
    return CheckReport("nondegenerate", True, n)


def check_rep_axioms(rp: RepPair, elements: Sequence[HeckeElement]) -> CheckReport:
    """V unital, multiplicative and *-preserving on the given Hecke elements."""
    pair = rp.pair
    anchors = [pair.group.identity()]
    n = 1
    one = HeckeElement.unit(pair)
    bad = rp.differ(rp.V(one), rp.identity(), anchors)
    if bad is not None:
        return CheckReport("rep-axioms", False, n, {"axiom": "unital", "column": _label(pair, bad)})
    for f in elements:
        n += 1
        bad = rp.differ(rp.V(f).adjoint(), rp.V(f.star()), anchors)
        if bad is not None:
            return CheckReport("rep-axioms", False, n, {"axiom": "star", "f": repr(f), "column": _label(pair, bad)})
    for f, g in itertools.product(elements, repeat=2):
        n += 1
        bad = rp.differ(rp.V(f) @ rp.V(g), rp.V(f * g), anchors)
        if bad is not None:
            return CheckReport("rep-axioms", False, n,
                               {"axiom": "multiplicative", "f": repr(f), "g": repr(g), "column": _label(pair, bad)})
    return CheckReport("rep-axioms", True, n)


# --- matrix units ------------------------------------------------------------------

def upsilon(rp: RepPair, x, y) -> Operator:
    g = rp.pair.group
    x, y = _rep(x), _rep(y)
    return rp.nu(x) @ rp.V(g.mul(g.inv(x), y)) @ rp.nu(y)


def check_matrix_unit_pair(pair: HeckePair, rp: RepPair, cosets: Sequence | None = None) -> CheckReport:
    """The upsilon_{x,y} satisfy u_{xy}* = u_{yx} and u_{xy} u_{wz} = delta_{yw} u_{xz}."""
    if cosets is None:
        cosets = pair.cosets()
    cosets = [pair.coset_key(c) for c in cosets]
    u = {(x, y): upsilon(rp, x, y) for x in cosets for y in cosets}
    n = 0
    for x, y in itertools.product(cosets, repeat=2):
        n += 1
        bad = rp.differ(u[x, y].adjoint(), u[y, x], [x.rep, y.rep])
        if bad is not None:
            return CheckReport("matrix-unit", False, n, {"relation": "adjoint", "x": pair.fmt(x), "y": pair.fmt(y),
                                                         "column": _label(pair, bad)})
    for x, y, w, z in itertools.product(cosets, repeat=4):
        n += 1
        lhs = u[x, y] @ u[w, z]
        anchors = [x.rep, y.rep, w.rep, z.rep]
        if y == w:
            bad = rp.differ(lhs, u[x, z], anchors)
        else:
            bad = rp.is_zero(lhs, anchors)
        if bad is not None:
            return CheckReport("matrix-unit", False, n,
                               {"relation": "product", "x": pair.fmt(x), "y": pair.fmt(y),
                                "w": pair.fmt(w), "z": pair.fmt(z), "column": _label(pair, bad)})
    return CheckReport("matrix-unit", True, n, details={"cosets": len(cosets)})


# --- covariance ----------------------------------------------------------------------

def exhaustive_triples(pair: HeckePair) -> list[tuple]:
    d = [k.rep for k in pair.double_cosets()]
    return [(a, c.rep, b) for a in d for c in pair.cosets() for b in d]


def wc1_sides(rp: RepPair, a, x, b) -> tuple[Operator, Operator, list]:
    pair = rp.pair
    g = pair.group
    a, x, b = _rep(a), _rep(x), _rep(b)
    lhs = rp.V(a) @ rp.nu(x) @ rp.V(b)
    terms, anchors = [], [x]
    for u in pair.left_cosets(g.inv(a)):
        xu = g.mul(x, u.rep)
        anchors.append(xu)
        for v in pair.left_cosets(b):
            xv = g.mul(x, v.rep)
            terms.append(rp.nu(xu) @ rp.V(g.mul(g.inv(u.rep), v.rep)) @ rp.nu(xv))
    anchors.extend(g.mul(x, v.rep) for v in pair.left_cosets(b))
    return lhs, _sum(rp, terms), anchors


def check_covariant_pair(pair: HeckePair, rp: RepPair, triples: Sequence | None = None) -> CheckReport:
    """The covariance identity for V([HaH]) nu(e_x) V([HbH]) on every triple."""
    scope = "verified on probe set" if rp.lazy else "given triples"
    if triples is None:
        if rp.lazy:
            raise ValueError("lazy carriers need explicit probe triples")
        triples = exhaustive_triples(pair)
        scope = "exhaustive"
    n = 0
    for a, x, b in triples:
        n += 1
        lhs, rhs, anchors = wc1_sides(rp, a, x, b)
        bad = rp.differ(lhs, rhs, anchors)
        if bad is not None:
            return CheckReport("covariant", False, n, {"a": pair.fmt(a), "x": pair.fmt(x), "b": pair.fmt(b),
                                                       "column": _label(pair, bad)})
    return CheckReport("covariant", True, n, details={"scope": scope})


def _cond_i(rp: RepPair, a, x):
    g = rp.pair.group
    lhs = rp.V(a) @ rp.nu(x)
    us = [g.mul(x, u.rep) for u in rp.pair.left_cosets(g.inv(a))]
    rhs = _sum(rp, (rp.nu(xu) @ rp.V(a) @ rp.nu(x) for xu in us))
    return rp.differ(lhs, rhs, [x] + us)


def _cond_ii(rp: RepPair, x, b):
    g = rp.pair.group
    lhs = rp.nu(x) @ rp.V(b)
    vs = [g.mul(x, v.rep) for v in rp.pair.left_cosets(b)]
    rhs = _sum(rp, (rp.nu(x) @ rp.V(b) @ rp.nu(xv) for xv in vs))
    return rp.differ(lhs, rhs, [x] + vs)


def _cond_iii(rp: RepPair, x, b, y):
    return rp.is_zero(rp.nu(x) @ rp.V(b) @ rp.nu(y), [x, y])


def _cond_iv(rp: RepPair, a, x):
    P = rp.nu(x)
    T = rp.V(a) @ P
    gap = P * rp.pair.R(a) - T.adjoint() @ T
    ok, why = psd_certificate(gap)
    return None if ok else (why or {})


def check_lemma_conditions(pair: HeckePair, rp: RepPair, probes: dict | None = None,
                           matrix_unit: bool | None = None) -> CheckReport:
    """Conditions (i)-(iv) of the matrix-unit characterisation.

    ``probes`` may give lists under keys ``"ax"`` (for (i) and (iv)), ``"xb"``
    and ``"xby"``; finite carriers default to exhaustive lists.  Condition (iv)
    is evaluated on finite carriers only, and only claimed equivalent to the
    others for matrix-unit pairs.
    """
    g = pair.group
    probes = dict(probes or {})
    if pair.is_finite:
        dreps = [k.rep for k in pair.double_cosets()]
        creps = [c.rep for c in pair.cosets()]
        probes.setdefault("ax", [(a, x) for a in dreps for x in creps])
        probes.setdefault("xb", [(x, b) for x in creps for b in dreps])
        probes.setdefault("xby", [(x, b, y) for x in creps for b in dreps for y in creps])
    verdicts: dict = {}
    witnesses: dict = {}
    n = 0

    def run(tag, items, fn, fmt):
        nonlocal n
        for item in items:
            n += 1
            bad = fn(*item)
            if bad is not None:
                verdicts[tag] = False
                witnesses[tag] = {**fmt(item), "evidence": _label(pair, bad) if not isinstance(bad, dict) else bad}
                return
        verdicts[tag] = True

    f2 = lambda it: {"a": pair.fmt(it[0]), "x": pair.fmt(it[1])}
    run("i", probes.get("ax", []), lambda a, x: _cond_i(rp, a, x), f2)
    run("ii", probes.get("xb", []), lambda x, b: _cond_ii(rp, x, b),
        lambda it: {"x": pair.fmt(it[0]), "b": pair.fmt(it[1])})
    xby = [(x, b, y) for x, b, y in probes.get("xby", [])
           if pair.double_coset_key(g.mul(g.inv(_rep(x)), _rep(y))) != pair.double_coset_key(b)]
    run("iii", xby, lambda x, b, y: _cond_iii(rp, x, b, y),
        lambda it: {"x": pair.fmt(it[0]), "b": pair.fmt(it[1]), "y": pair.fmt(it[2])})
    if rp.lazy:
        verdicts["iv"] = "not evaluated"
    else:
        run("iv", probes.get("ax", []), lambda a, x: _cond_iv(rp, a, x), f2)
    if matrix_unit is None and not rp.lazy and pair.is_finite:
        matrix_unit = check_matrix_unit_pair(pair, rp).passed
    core = [verdicts["i"], verdicts["ii"], verdicts["iii"]]
    consistent = len(set(core)) == 1
    if matrix_unit and verdicts["iv"] != "not evaluated":
        consistent = consistent and verdicts["iv"] == verdicts["i"]
    passed = all(v is True for v in verdicts.values() if v != "not evaluated")
    return CheckReport("lemma-conditions", passed, n,
                       witness=None if passed else {"failed": sorted(k for k, v in verdicts.items() if v is False),
                                                    **{k: w for k, w in witnesses.items()}},
                       details={**verdicts, "matrix_unit": matrix_unit, "equivalence_consistent": consistent})


def check_prop_mu_cov(pair: HeckePair, rp: RepPair, triples: Sequence | None = None,
                      cosets: Sequence | None = None, probes: dict | None = None) -> CheckReport:
    """Covariant iff (matrix-unit and condition (i)); a one-sided outcome is a bug flag."""
    cov = check_covariant_pair(pair, rp, triples)
    mu = check_matrix_unit_pair(pair, rp, cosets)
    lem = check_lemma_conditions(pair, rp, probes, matrix_unit=mu.passed)
    cond_i = lem.details["i"]
    agree = cov.passed == (mu.passed and cond_i)
    return CheckReport("prop-matrix-unit-covariant", agree, cov.probes + mu.probes + lem.probes,
                       witness=None if agree else {"covariant": cov.passed, "matrix_unit": mu.passed, "condition_i": cond_i,
                                                   "flag": "one-sided outcome"},
                       details={"covariant": cov.passed, "matrix_unit": mu.passed, "condition_i": cond_i,
                                "covariant_witness": cov.witness, "matrix_unit_witness": mu.witness})


def _quadratic_generator(pair: HeckePair):
    """For a pair with exactly two double cosets: (T, alpha, beta) with T^2 = alpha + beta T."""
    dcs = pair.double_cosets()
    if not pair.is_finite or len(dcs) != 2:
        raise ConfigurationError("the search needs a finite pair with exactly two double cosets")
    t = dcs[1]
    if pair.double_coset_key(pair.group.inv(t.rep)) != t:
        raise ConfigurationError("the non-trivial double coset is not self-inverse")
    sq = HeckeElement.basis(pair, t.rep) * HeckeElement.basis(pair, t.rep)
    return t, sq[dcs[0].rep], sq[t.rep]


def search_matrix_unit_converse(pair: HeckePair, rng: random.Random, trials: int = 20) -> CheckReport:
    """Look for a matrix-unit pair that is not covariant.

    With two double cosets, T = [HtH] satisfies T^2 = alpha + beta T, so
    V(T) = l1 P + l2 (1 - P) is a *-representation for every orthogonal
    projection P, where l1, l2 are the roots.  Each trial pairs nu = M with such
    a V for P the projection onto a random integer vector or its complement.
    The report only records what was found; it never fails.
    """
    t, alpha, beta = _quadratic_generator(pair)
    disc = beta * beta + alpha * 4
    if not disc.is_rational():
        raise ConfigurationError("structure constants left the rationals")
    root = Scalar.sqrt(disc.real_part().as_fraction())
    half = Fraction(1, 2)
    l1, l2 = (beta + root) * half, (beta - root) * half
    cosets = pair.cosets()
    base = mrho_pair(pair)
    eye = Matrix.identity(cosets)
    found, tallies = [], {"matrix_unit": 0, "covariant": 0}
    for trial in range(trials):
        vec = [0] * len(cosets)
        while not any(vec):
            vec = [rng.randint(-2, 2) for _ in cosets]
        norm = sum(x * x for x in vec)
        P = Matrix.from_entries(cosets, cosets, {(a, b): Fraction(x * y, norm)
                                                 for a, x in zip(cosets, vec) for b, y in zip(cosets, vec) if x * y})
        if trial % 2:
            P = eye - P
        T = P * l1 + (eye - P) * l2
        rp = RepPair(pair, base.nu, lambda k, T=T: eye if k != t else T, carrier=cosets, name=f"search[{trial}]")
        mu = check_matrix_unit_pair(pair, rp).passed
        cov = check_covariant_pair(pair, rp).passed
        tallies["matrix_unit"] += mu
        tallies["covariant"] += cov
        if mu and not cov:
            found.append({"trial": trial, "vector": vec, "complement": bool(trial % 2)})
    return CheckReport("matrix-unit-converse-search", True, trials,
                       details={**tallies, "trials": trials, "matrix_unit_not_covariant": found,
                                "claim": "none; the search only reports what it saw"})


# --- the multiplicity decomposition ---------------------------------------------------

@dataclass
class Decomposition:
    multiplicity: int
    psi: Matrix
    report: CheckReport
    h0_basis: list = field(default_factory=list)


def _tensor_labels(pair: HeckePair, d: int) -> list:
    return [(k, c) for k in range(d) for c in pair.cosets()]


def _psi_from_units(pair: HeckePair, rp: RepPair) -> tuple[Matrix, int, list]:
    """Psi(nu(e_z) xi) = upsilon_{H,z} xi (x) e_z, with H_0 = range nu(e_H)."""
    g = pair.group
    e = g.identity()
    P = rp.nu(e)
    basis = orthonormal_basis(P)
    d = len(basis)
    if d == 0:
        raise DegenerateError("nu(e_H) has zero range")
    B = Matrix.from_entries(range(d), rp.carrier,
                            {(k, h): x.conjugate() for k, b in enumerate(basis) for h, x in b.items()})
    entries = {}
    for c in pair.cosets():
        block = B @ upsilon(rp, e, c.rep)
        for (k, h), x in block.nonzero_entries().items():
            entries[((k, c), h)] = x
    psi = Matrix.from_entries(_tensor_labels(pair, d), rp.carrier, entries)
    return psi, d, basis


def _check_psi(pair: HeckePair, rp: RepPair, psi: Matrix, d: int, v_too: bool) -> CheckReport:
    eye = Matrix.identity(range(d))
    psa = psi.adjoint()
    parts = [CheckReport("psi*psi=1", psa @ psi == Matrix.identity(psi.cols), 1),
             CheckReport("psi psi*=1", psi @ psa == Matrix.identity(psi.rows), 1)]
    bad = next((c for c in pair.cosets() if psi @ rp.nu(c) @ psa != kron(eye, m_indicator(pair, c))), None)
    parts.append(CheckReport("Ad psi(nu)=1xM", bad is None, len(pair.cosets()),
                             None if bad is None else {"coset": pair.fmt(bad)}))
    if v_too:
        bad = next((k for k in pair.double_cosets() if psi @ rp.V(k) @ psa != kron(eye, rho_op(pair, k))), None)
        parts.append(CheckReport("Ad psi(V)=1xrho", bad is None, len(pair.double_cosets()),
                                 None if bad is None else {"double_coset": pair.fmt(bad)}))
    return merge("psi-postconditions", parts, multiplicity=d)


def decompose_theorem_mult(pair: HeckePair, rp: RepPair, verify: bool = True) -> Decomposition:
    """Return the multiplicity and the unitary Psi : carrier -> C^d (x) l2(G/H).

    Psi is built from the matrix units; Ad Psi carries (nu, V) onto
    (1 (x) M, 1 (x) rho).  Raises :class:`NotCovariantError` or
    :class:`DegenerateError` on bad input.
    """
    if rp.lazy or not pair.is_finite:
        raise ValueError("decomposition needs a finite carrier and finite G/H")
    nd = check_nondegenerate(rp)
    if not nd:
        raise DegenerateError(f"nu is degenerate: {nd.witness}")
    if verify:
        cov = check_covariant_pair(pair, rp)
        if not cov:
            raise NotCovariantError(cov)
    psi, d, basis = _psi_from_units(pair, rp)
    return Decomposition(d, psi, _check_psi(pair, rp, psi, d, v_too=True), basis)


def matrix_unit_unitary(pair: HeckePair, rp: RepPair) -> Decomposition:
    """Psi for a matrix-unit pair: Ad Psi o nu = 1 (x) M and the compressed
    identity (1xM(e_x)) Ad Psi(V([Hx^-1yH])) (1xM(e_y)) = 1 (x) (e_x (x) conj e_y)."""
    if rp.lazy or not pair.is_finite:
        raise ValueError("needs a finite carrier")
    nd = check_nondegenerate(rp)
    if not nd:
        raise DegenerateError(f"nu is degenerate: {nd.witness}")
    mu = check_matrix_unit_pair(pair, rp)
    if not mu:
        raise NotCovariantError(mu)
    psi, d, basis = _psi_from_units(pair, rp)
    rep = _check_psi(pair, rp, psi, d, v_too=False)
    g = pair.group
    eye = Matrix.identity(range(d))
    psa = psi.adjoint()
    bad = None
    for x, y in itertools.product(pair.cosets(), repeat=2):
        Vt = psi @ rp.V(g.mul(g.inv(x.rep), y.rep)) @ psa
        lhs = kron(eye, m_indicator(pair, x)) @ Vt @ kron(eye, m_indicator(pair, y))
        if lhs != kron(eye, rank_one(pair, indicator(pair, x), indicator(pair, y))):
            bad = (x, y)
            break
    eq = CheckReport("compressed-units", bad is None, len(pair.cosets()) ** 2,
                     None if bad is None else {"x": pair.fmt(bad[0]), "y": pair.fmt(bad[1])})
    return Decomposition(d, psi, merge("matrix-unit-unitary", [rep, eq], multiplicity=d), basis)


def unitary_from_nu(pair: HeckePair, rp: RepPair) -> tuple[Matrix, int]:
    """A unitary Psi with Ad Psi o nu = 1 (x) M, from nu alone.

    Chooses an orthonormal basis of each range nu(e_z) and sends its k-th
    vector to e_k (x) e_z; requires all ranks equal.
    """
    bases = {c: orthonormal_basis(rp.nu(c)) for c in pair.cosets()}
    census = {pair.fmt(c): len(b) for c, b in bases.items()}
    if len(set(census.values())) != 1:
        raise UnequalRanksError(census)
    d = next(iter(census.values()))
    if d == 0:
        raise DegenerateError("nu is zero")
    entries = {((k, c), h): x.conjugate() for c, b in bases.items() for k, vec in enumerate(b) for h, x in vec.items()}
    return Matrix.from_entries(_tensor_labels(pair, d), rp.carrier, entries), d


def induce_v_from_unitary(pair: HeckePair, rp: RepPair, psi: Matrix, d: int | None = None) -> RepPair:
    """(nu, Ad Psi* o (1 (x) rho)), verified covariant.

    ``rp`` supplies nu (its V is ignored); Psi must be unitary and carry nu
    onto 1 (x) M.
    """
    if d is None:
        d = len(psi.rows) // len(pair.cosets())
    if psi.rows != tuple(_tensor_labels(pair, d)) or psi.cols != rp.carrier:
        raise ValueError("psi has the wrong labels")
    pre = _check_psi(pair, rp, psi, d, v_too=False)
    if not pre:
        raise ValueError(f"psi is not a unitary intertwiner for nu: {pre.witness}")
    eye = Matrix.identity(range(d))
    psa = psi.adjoint()
    out = RepPair(pair, rp.nu, lambda k: psa @ kron(eye, rho_op(pair, k)) @ psi,
                  carrier=rp.carrier, name=f"induced({rp.name})")
    cov = check_covariant_pair(pair, out)
    if not cov:
        raise NotCovariantError(cov)
    return out


# --- normal subgroups ------------------------------------------------------------------

def require_normal(pair: HeckePair) -> None:
    bad = [pair.fmt(c) for c in pair.cosets() if pair.L(c.rep) != 1 or pair.R(c.rep) != 1]
    if bad:
        raise ConfigurationError(f"H is not normal: double cosets with more than one coset at {bad}")


def group_rep_from_v(pair: HeckePair, rp: RepPair) -> dict:
    """U(aH) = V([HaH]) (normal case)."""
    require_normal(pair)
    return {c: rp.V(c.rep) for c in pair.cosets()}


def v_from_group_rep(pair: HeckePair, nu_rp: RepPair, u: dict, name: str = "") -> RepPair:
    """V([HaH]) = U(aH) (normal case)."""
    require_normal(pair)
    table = {pair.coset_key(c): U for c, U in u.items()}
    return RepPair(pair, nu_rp.nu, lambda k: table[pair.coset_key(k.rep)],
                   carrier=nu_rp.carrier, name=name or f"from-U({nu_rp.name})")


def normal_case_bridge(pair: HeckePair, rp: RepPair) -> CheckReport:
    """Normal H: the Hecke covariance identity against the classical one.

    Converts V to U and back, checks U is a unitary representation of G/H,
    checks V(a) nu(e_x) V(a)* = nu(e_{xa^-1}), derives the three-term identity
    from it operator by operator, and compares with the general checker.
    """
    require_normal(pair)
    g = pair.group
    u = group_rep_from_v(pair, rp)
    back = v_from_group_rep(pair, rp, u)
    cosets = pair.cosets()
    reps = [c.rep for c in cosets]
    parts = []
    same = all(back.V(a) == rp.V(a) for a in reps)
    parts.append(CheckReport("round-trip", same, len(reps)))
    hom = all(u[pair.coset_key(a)] @ u[pair.coset_key(b)] == u[pair.coset_key(g.mul(a, b))]
              and u[pair.coset_key(a)].is_unitary() for a in reps for b in reps)
    parts.append(CheckReport("unitary-rep", hom, len(reps) ** 2))
    bad2 = None
    for a in reps:
        for x in reps:
            if rp.V(a) @ rp.nu(x) @ rp.V(a).adjoint() != rp.nu(g.mul(x, g.inv(a))):
                bad2 = (a, x)
                break
        if bad2:
            break
    group2 = CheckReport("classical-covariance", bad2 is None, len(reps) ** 2,
                         None if bad2 is None else {"a": pair.fmt(bad2[0]), "x": pair.fmt(bad2[1])})
    parts.append(group2)
    bad3 = None
    if group2:
        for a, x, b in itertools.product(reps, repeat=3):
            lhs = rp.V(a) @ rp.nu(x) @ rp.V(b)
            bi = g.inv(b)
            chain = (rp.V(a) @ rp.nu(x) @ rp.V(a).adjoint() @ rp.V(g.mul(a, b))
                     @ rp.V(bi) @ rp.nu(x) @ rp.V(bi).adjoint())
            rhs = rp.nu(g.mul(x, g.inv(a))) @ rp.V(g.mul(a, b)) @ rp.nu(g.mul(x, b))
            if not (lhs == chain == rhs):
                bad3 = (a, x, b)
                break
    parts.append(CheckReport("three-term-from-classical", group2.passed and bad3 is None, len(reps) ** 3,
                             None if bad3 is None else {"a": pair.fmt(bad3[0]), "x": pair.fmt(bad3[1]),
                                                        "b": pair.fmt(bad3[2])}))
    cov = check_covariant_pair(pair, rp)
    agree = cov.passed == group2.passed
    parts.append(CheckReport("formulations-agree", agree, 1,
                             None if agree else {"hecke": cov.passed, "classical": group2.passed}))
    return merge("normal-case-bridge", parts, covariant=cov.passed, classical=group2.passed)


def regular_group_rep(pair: HeckePair) -> dict:
    """U(aH) = rho([HaH]) on l2(G/H) for normal H (the right regular representation)."""
    require_normal(pair)
    return {c: rho_op(pair, c.rep) for c in pair.cosets()}
