"""Graded *-algebras over a finite group and their covariant representations.

A :class:`GradedStarAlgebra` is a finite-dimensional *-algebra whose basis
elements each carry a grade in G (a Fell bundle over a finite group).  A
:class:`CovariantTriple` pairs a representation ``pi`` of it with a
representation ``nu`` of the functions on G/H.  The regular triples are
``b_x -> theta(b_x) (x) lambda_x`` with ``nu = 1 (x) M``;
:func:`decide_regularity` recognises them given a Hecke algebra
representation V commuting with pi.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from .covariance import (DegenerateError, NotCovariantError, RepPair, UnequalRanksError,
                         check_covariant_pair, decompose_theorem_mult, induce_v_from_unitary,
                         unitary_from_nu)
from .groups import Group
from .l2rep import lambda_op, m_indicator
from .linalg import Matrix, kron, vadd, vscale
from .pair import HeckePair
from .reports import CheckReport
from .scalars import Scalar


class GradedStarAlgebra:
    """Basis labels with grades, structure constants and an involution table.

    ``mult[(a, b)]`` and ``star[a]`` are dicts ``{label: scalar}``; products
    and stars extend (anti)linearly.
    """

    def __init__(self, group: Group, basis: Sequence, grade: Mapping, mult: Mapping, star: Mapping,
                 name: str = "", label_format=str):
        self.group = group
        self.basis = tuple(basis)
        self.grade = dict(grade)
        self.mult = {k: {l: Scalar.coerce(v) for l, v in d.items()} for k, d in mult.items()}
        self.star_table = {k: {l: Scalar.coerce(v) for l, v in d.items()} for k, d in star.items()}
        self.name = name
        self.fmt = label_format

    def __repr__(self) -> str:
        return f"GradedStarAlgebra({self.name!r}, dim={len(self.basis)})"

    def to_spec(self) -> dict:
        """Plain data: basis labels, grades, nonzero structure constants, involution."""
        f = self.fmt
        return {
            "name": self.name,
            "basis": [f(a) for a in self.basis],
            "grade": {f(a): self.group.format(self.grade[a]) for a in self.basis},
            "products": [[f(a), f(b), f(c), str(x)] for a in self.basis for b in self.basis
                         for c, x in self.mult.get((a, b), {}).items() if x],
            "star": {f(a): {f(c): str(x) for c, x in self.star_table[a].items()} for a in self.basis},
        }

    def mul(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for a, x in u.items():
            for b, y in v.items():
                row = self.mult.get((a, b), {})
                c = 1 if x == 1 and y == 1 else Scalar.coerce(x) * Scalar.coerce(y)
                out = vadd(out, row if c == 1 else vscale(c, row))
        return out

    def star(self, u: Mapping) -> dict:
        out: dict = {}
        for a, x in u.items():
            out = vadd(out, vscale(Scalar.coerce(x).conjugate(), self.star_table[a]))
        return out

    def check(self) -> CheckReport:
        """Grading compatibility and the *-algebra axioms on basis elements."""
        g = self.group
        n = 0
        for a, b in itertools.product(self.basis, repeat=2):
            n += 1
            want = g.mul(self.grade[a], self.grade[b])
            if any(self.grade[l] != want for l in self.mult.get((a, b), {})):
                return CheckReport("graded-algebra", False, n, {"axiom": "B_x B_y in B_xy", "a": self.fmt(a), "b": self.fmt(b)})
            if self.star(self.mul({a: 1}, {b: 1})) != self.mul(self.star({b: 1}), self.star({a: 1})):
                return CheckReport("graded-algebra", False, n, {"axiom": "(ab)* = b*a*", "a": self.fmt(a), "b": self.fmt(b)})
        for a in self.basis:
            n += 1
            if any(self.grade[l] != g.inv(self.grade[a]) for l in self.star_table[a]):
                return CheckReport("graded-algebra", False, n, {"axiom": "B_x* = B_x^-1", "a": self.fmt(a)})
            if self.star(self.star({a: 1})) != {a: Scalar(1)}:
                return CheckReport("graded-algebra", False, n, {"axiom": "b** = b", "a": self.fmt(a)})
        for a, b, c in itertools.product(self.basis, repeat=3):
            n += 1
            if self.mul(self.mul({a: 1}, {b: 1}), {c: 1}) != self.mul({a: 1}, self.mul({b: 1}, {c: 1})):
                return CheckReport("graded-algebra", False, n, {"axiom": "associative", "abc": [self.fmt(a), self.fmt(b), self.fmt(c)]})
        return CheckReport("graded-algebra", True, n)


def group_algebra(group: Group, name: str = "") -> GradedStarAlgebra:
    """C[G] graded by b_x in B_x, with b_x b_y = b_xy and b_x* = b_x^-1."""
    els = group.elements()
    return GradedStarAlgebra(group, els, {x: x for x in els},
                             {(x, y): {group.mul(x, y): 1} for x in els for y in els},
                             {x: {group.inv(x): 1} for x in els},
                             name=name or f"C[{group.name}]", label_format=group.format)


# --- representations theta of B -------------------------------------------------------

def left_regular(b: GradedStarAlgebra) -> dict:
    """theta(a) = left multiplication on B, in the basis (orthonormal for group algebras)."""
    return {a: Matrix.from_columns(b.basis, b.basis, {c: b.mul({a: 1}, {c: 1}) for c in b.basis})
            for a in b.basis}


def trivial_rep(b: GradedStarAlgebra) -> dict:
    """The 1-dimensional rep b_x -> 1 of a group algebra."""
    return {a: Matrix.identity([0]) for a in b.basis}


def rotation_rep(b: GradedStarAlgebra) -> dict:
    """b_k -> (rotation by a quarter turn)^k on C^2, for the group algebra of Z/4."""
    r = Matrix.from_entries([0, 1], [0, 1], {(0, 1): -1, (1, 0): 1})
    out = {}
    for a in b.basis:
        m = Matrix.identity([0, 1])
        for _ in range(int(a)):
            m = m @ r
        out[a] = m
    return out


def check_theta(b: GradedStarAlgebra, theta: Mapping) -> CheckReport:
    """theta is defined on every basis element and is a *-homomorphism."""
    missing = [a for a in b.basis if a not in theta]
    if missing:
        return CheckReport("theta-rep", False, 0, {"reason": "theta undefined on part of B", "labels": [b.fmt(a) for a in missing]})

    def ext(u):
        total = None
        for a, x in u.items():
            term = theta[a] * Scalar.coerce(x)
            total = term if total is None else total + term
        return total if total is not None else theta[b.basis[0]] * 0

    n = 0
    for a, c in itertools.product(b.basis, repeat=2):
        n += 1
        if theta[a] @ theta[c] != ext(b.mul({a: 1}, {c: 1})):
            return CheckReport("theta-rep", False, n, {"axiom": "multiplicative", "a": b.fmt(a), "b": b.fmt(c)})
    for a in b.basis:
        n += 1
        if theta[a].adjoint() != ext(b.star({a: 1})):
            return CheckReport("theta-rep", False, n, {"axiom": "star", "a": b.fmt(a)})
    return CheckReport("theta-rep", True, n)


# --- covariant triples -------------------------------------------------------------------

@dataclass
class CovariantTriple:
    pair: HeckePair
    algebra: GradedStarAlgebra
    pi: dict
    nu: dict
    carrier: tuple
    name: str = ""


def build_regular_rep(b: GradedStarAlgebra, theta: Mapping, pair: HeckePair) -> CovariantTriple:
    """pi(b_x) = theta(b_x) (x) lambda_x, nu = 1 (x) M, verified covariant."""
    if not pair.is_finite:
        raise ValueError("regular representations are built only for finite G")
    rep = check_theta(b, theta)
    if not rep:
        raise ValueError(f"theta is not a representation of all of B: {rep.witness}")
    k_labels = theta[b.basis[0]].rows
    eye = Matrix.identity(k_labels)
    pi = {a: kron(theta[a], lambda_op(pair, b.grade[a])) for a in b.basis}
    nu = {c: kron(eye, m_indicator(pair, c)) for c in pair.cosets()}
    ct = CovariantTriple(pair, b, pi, nu, tuple((k, c) for k in k_labels for c in pair.cosets()),
                         name=f"regular({b.name})")
    cov = check_graded_covariance(ct)
    if not cov:
        raise AssertionError(f"regular representation failed covariance: {cov.witness}")
    return ct


def check_graded_covariance(ct: CovariantTriple, probes: Sequence | None = None) -> CheckReport:
    """pi(b_x) nu(e_yH) = nu(e_xyH) pi(b_x) for basis b_x and cosets yH (all, by default)."""
    pair, g = ct.pair, ct.pair.group
    probes = probes if probes is not None else [(a, c) for a in ct.algebra.basis for c in pair.cosets()]
    for n, (a, c) in enumerate(probes, 1):
        x = ct.algebra.grade[a]
        if ct.pi[a] @ ct.nu[pair.coset_key(c)] != ct.nu[pair.coset_key(g.mul(x, pair.coset_key(c).rep))] @ ct.pi[a]:
            return CheckReport("graded-covariance", False, n, {"b": ct.algebra.fmt(a), "y": pair.fmt(c)})
    return CheckReport("graded-covariance", True, len(probes))


def reconstruct_theta(ct: CovariantTriple) -> tuple[dict | None, CheckReport]:
    """Recover theta from a triple in tensor form (nu = 1 (x) M).

    For each basis b_z, T = (1 (x) lambda_z*) pi(b_z) must commute with every
    1 (x) E_xy; then T = theta(b_z) (x) 1.  The recovered theta is checked to
    be a *-representation with (theta (x) lambda) o delta = pi.
    """
    pair, b = ct.pair, ct.algebra
    cosets = pair.cosets()
    k_labels = tuple(dict.fromkeys(k for k, _ in ct.carrier))
    if ct.carrier != tuple((k, c) for k in k_labels for c in cosets):
        return None, CheckReport("reconstruct-theta", False, 0, {"reason": "carrier is not in tensor form"})
    eye = Matrix.identity(k_labels)
    bad = next((c for c in cosets if ct.nu[c] != kron(eye, m_indicator(pair, c))), None)
    if bad is not None:
        return None, CheckReport("reconstruct-theta", False, 0, {"reason": "nu is not 1 (x) M", "coset": pair.fmt(bad)})
    # E_{c0,y} and E_{y,c0} generate every matrix unit, so they have the same commutant
    c0 = cosets[0]
    gens = sorted({(c0, y) for y in cosets} | {(y, c0) for y in cosets})
    units = {(x, y): kron(eye, Matrix.from_entries(cosets, cosets, {(x, y): 1})) for x, y in gens}
    theta = {}
    n = 0
    for a in b.basis:
        z = b.grade[a]
        T = kron(eye, lambda_op(pair, z)).adjoint() @ ct.pi[a]
        for (x, y), E in units.items():
            n += 1
            if T @ E != E @ T:
                return None, CheckReport("reconstruct-theta", False, n,
                                         {"reason": "not in the commutant of 1 (x) K", "b": b.fmt(a),
                                          "elementary": [pair.fmt(x), pair.fmt(y)]})
        th = Matrix.from_entries(k_labels, k_labels,
                                 {(k, l): x for ((k, r), (l, c)), x in T.nonzero_entries().items()
                                  if r == c0 and c == c0})
        if kron(th, Matrix.identity(cosets)) != T:
            return None, CheckReport("reconstruct-theta", False, n, {"reason": "T is not theta (x) 1", "b": b.fmt(a)})
        theta[a] = th
    rep = check_theta(b, theta)
    if not rep:
        return None, CheckReport("reconstruct-theta", False, n + rep.probes, {"reason": "theta not a *-rep", **rep.witness})
    for a in b.basis:
        n += 1
        if kron(theta[a], lambda_op(pair, b.grade[a])) != ct.pi[a]:
            return None, CheckReport("reconstruct-theta", False, n, {"reason": "(theta x lambda) o delta != pi", "b": b.fmt(a)})
    return theta, CheckReport("reconstruct-theta", True, n + rep.probes)


# --- the regularity decision -------------------------------------------------------------

# A failed rank census or graded covariance rules out every V; later stages
# only refute the V that was supplied.
CONCLUSIVE_STAGES = ("rank-census", "graded-covariance")


@dataclass
class RegularityVerdict:
    regular: bool
    stage: str
    theta: dict | None = None
    witness: dict | None = None
    reports: list = field(default_factory=list)

    @property
    def conclusive(self) -> bool:
        return self.regular or self.stage in CONCLUSIVE_STAGES

    def report(self) -> CheckReport:
        return CheckReport("regularity", self.regular, sum(r.probes for r in self.reports),
                           None if self.regular else {"stage": self.stage, **(self.witness or {})},
                           details={"parts": {r.name: r.passed for r in self.reports},
                                    "conclusive": self.conclusive})


def rank_census(ct: CovariantTriple) -> dict:
    return {ct.pair.fmt(c): P.rank() for c, P in sorted(ct.nu.items())}


def _nu_pair(ct: CovariantTriple, v_fn=None) -> RepPair:
    pair = ct.pair
    return RepPair(pair, lambda c: ct.nu[c], v_fn or (lambda k: None), carrier=ct.carrier, name=ct.name)


def regular_v(ct: CovariantTriple) -> RepPair:
    """(nu, 1 (x) rho) on a carrier already in tensor form."""
    from .l2rep import rho_op
    pair = ct.pair
    eye = Matrix.identity(tuple(dict.fromkeys(k for k, _ in ct.carrier)))
    return RepPair(pair, lambda c: ct.nu[c], lambda k: kron(eye, rho_op(pair, k)),
                   carrier=ct.carrier, name="1 (x) rho")


def theta_equal(t1: Mapping, t2: Mapping) -> bool:
    """Basis-wise equality of two representations, ignoring carrier labels."""
    return t1.keys() == t2.keys() and all(t1[a].entries() == t2[a].entries() for a in t1)


def candidate_v(ct: CovariantTriple) -> RepPair:
    """(nu, Ad Psi* o (1 (x) rho)) for Psi chosen from nu alone."""
    base = _nu_pair(ct)
    psi, d = unitary_from_nu(ct.pair, base)
    return induce_v_from_unitary(ct.pair, base, psi, d)


def decide_regularity(ct: CovariantTriple, v: RepPair | None = None) -> RegularityVerdict:
    """Decide whether ct is equivalent to a regular triple, with V as the witness.

    Stages: projection rank census, covariance of (nu, V), commutation of V
    with pi, decomposition of (nu, V), reconstruction of theta.  When ``v`` is
    omitted it is built by :func:`candidate_v`.
    """
    pair = ct.pair
    reports = []
    census = rank_census(ct)
    ok = len(set(census.values())) == 1 and 0 not in census.values()
    reports.append(CheckReport("rank-census", ok, len(census), None if ok else {"ranks": census}))
    if not ok:
        return RegularityVerdict(False, "rank-census", witness={"ranks": census}, reports=reports)
    cov_pi = check_graded_covariance(ct)
    reports.append(cov_pi)
    if not cov_pi:
        return RegularityVerdict(False, "graded-covariance", witness=cov_pi.witness, reports=reports)
    if v is None:
        try:
            v = candidate_v(ct)
        except (UnequalRanksError, DegenerateError, NotCovariantError, ValueError) as exc:
            return RegularityVerdict(False, "candidate-v", witness={"error": str(exc)}, reports=reports)
    rp = RepPair(pair, lambda c: ct.nu[c], v.V, carrier=ct.carrier, name=f"({ct.name}, V)")
    cov = check_covariant_pair(pair, rp)
    reports.append(cov)
    if not cov:
        return RegularityVerdict(False, "covariance", witness=cov.witness, reports=reports)
    n = 0
    for k, a in itertools.product(pair.double_cosets(), ct.algebra.basis):
        n += 1
        Vk = rp.V(k)
        if Vk @ ct.pi[a] != ct.pi[a] @ Vk:
            w = {"double_coset": pair.fmt(k), "b": ct.algebra.fmt(a)}
            reports.append(CheckReport("commutation", False, n, w))
            return RegularityVerdict(False, "commutation", witness=w, reports=reports)
    reports.append(CheckReport("commutation", True, n))
    dec = decompose_theorem_mult(pair, rp)
    reports.append(dec.report)
    if not dec.report:
        return RegularityVerdict(False, "decompose", witness=dec.report.witness, reports=reports)
    psi, psa = dec.psi, dec.psi.adjoint()
    tensor = CovariantTriple(pair, ct.algebra, {a: psi @ p @ psa for a, p in ct.pi.items()},
                             {c: psi @ P @ psa for c, P in ct.nu.items()}, psi.rows, name=f"Ad Psi({ct.name})")
    theta, rec = reconstruct_theta(tensor)
    reports.append(rec)
    if theta is None:
        return RegularityVerdict(False, "reconstruct", witness=rec.witness, reports=reports)
    return RegularityVerdict(True, "done", theta=theta, reports=reports)


def conjugate_triple(ct: CovariantTriple, W: Matrix, name: str = "") -> CovariantTriple:
    Wa = W.adjoint()
    return CovariantTriple(ct.pair, ct.algebra, {a: W @ p @ Wa for a, p in ct.pi.items()},
                           {c: W @ P @ Wa for c, P in ct.nu.items()}, W.rows, name=name or f"Ad W({ct.name})")


# --- fault injections ----------------------------------------------------------------------

def perturb_nu(ct: CovariantTriple) -> CovariantTriple:
    """Conjugate nu (not pi) by a rational rotation mixing two cosets."""
    from .linalg import PYTHAGOREAN
    first = ct.carrier[0]
    other = next(l for l in ct.carrier if ct.nu[ct.pair.coset_key(l[1].rep)] != ct.nu[ct.pair.coset_key(first[1].rep)])
    c, s_ = PYTHAGOREAN[0]
    entries = {(l, l): 1 for l in ct.carrier if l not in (first, other)}
    entries.update({(first, first): c, (first, other): -s_, (other, first): s_, (other, other): c})
    U = Matrix.from_entries(ct.carrier, ct.carrier, entries)
    Ua = U.adjoint()
    return CovariantTriple(ct.pair, ct.algebra, ct.pi, {k: U @ P @ Ua for k, P in ct.nu.items()},
                           ct.carrier, name=f"perturb-nu({ct.name})")


def swap_nu(ct: CovariantTriple) -> CovariantTriple:
    """Exchange nu on the first two cosets."""
    cs = sorted(ct.nu)
    nu = dict(ct.nu)
    nu[cs[0]], nu[cs[1]] = ct.nu[cs[1]], ct.nu[cs[0]]
    return CovariantTriple(ct.pair, ct.algebra, ct.pi, nu, ct.carrier, name=f"swap-nu({ct.name})")


def noncommuting_v(ct: CovariantTriple) -> RepPair:
    """(nu, Ad D o (1 (x) rho)) with D a coset-dependent phase: covariant, but
    its range no longer commutes with pi."""
    from .l2rep import rho_op
    pair = ct.pair
    k_labels = tuple(dict.fromkeys(k for k, _ in ct.carrier))
    cosets = pair.cosets()
    phases = [Scalar(1), Scalar(0, 1), Scalar(-1), Scalar(0, -1)]
    D = kron(Matrix.identity(k_labels),
             Matrix.from_entries(cosets, cosets, {(c, c): phases[i % 4] for i, c in enumerate(cosets)}))
    Da = D.adjoint()
    eye = Matrix.identity(k_labels)
    return RepPair(pair, lambda c: ct.nu[c], lambda k: D @ kron(eye, rho_op(pair, k)) @ Da,
                   carrier=ct.carrier, name="noncommuting-v")


def unequal_ranks(ct: CovariantTriple) -> CovariantTriple:
    """Append a one-dimensional summand on which only nu(e_H) is nonzero."""
    pair = ct.pair
    extra = ("extra", None)
    carrier = ct.carrier + (extra,)
    home = pair.coset_key(pair.group.identity())

    def grow(m: Matrix, corner) -> Matrix:
        entries = dict(m.nonzero_entries())
        if corner:
            entries[(extra, extra)] = Scalar(corner)
        return Matrix.from_entries(carrier, carrier, entries)

    nu = {c: grow(P, 1 if c == home else 0) for c, P in ct.nu.items()}
    pi = {a: grow(p, 1 if pair.in_h(ct.algebra.grade[a]) else 0) for a, p in ct.pi.items()}
    return CovariantTriple(pair, ct.algebra, pi, nu, carrier, name=f"unequal-ranks({ct.name})")
