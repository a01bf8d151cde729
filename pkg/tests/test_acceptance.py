"""Acceptance criteria, one test per criterion.

Each test records a PASS or FAIL line (printed in the terminal summary) and
enforces its time budget.  Where a value can be computed a second way, the
brute-force oracles in ``oracles.py`` supply the independent route.
"""

import os
import random
import subprocess
import sys
from collections import Counter
from fractions import Fraction as F

from heckecov.covariance import (character_pair, check_covariant_pair, check_lemma_conditions,
                                 check_matrix_unit_pair, decompose_theorem_mult, kill_generator, mrho_pair,
                                 multiple_pair, random_conjugate, shift_nu)
from heckecov.fell import (build_regular_rep, decide_regularity, group_algebra, noncommuting_v, perturb_nu,
                           regular_v, swap_nu, theta_equal, unequal_ranks)
from heckecov.hecke import HeckeElement, check_mult_identity
from heckecov.instances import CATALOG, bc_full, bc_one_prime, s3_a3, s3_s2, s4_s3, z4_normal
from heckecov.l2rep import check_rM, m_indicator, matrix_unit_formula_check, rho_op
from heckecov.linalg import kron, Matrix
from heckecov.scalars import Scalar
from heckecov.semigroup import (check_counting, check_decomp, check_exel, check_lemma_key, check_msms,
                                check_murphy, check_r_multiplicative, check_rt_preimages, check_stacey,
                                check_theorem_equiv, check_transfer, check_trick, conjugate_cosets,
                                count_preimages_bruteforce, stacey_obstruction, transfer_L)
from heckecov.suites import covariant_family, theta_catalog

import oracles
from acceptance_log import criterion

FINITE = [s3_s2, s4_s3, z4_normal, s3_a3]
BC = {p: bc_one_prime(p) for p in (2, 3)}  # probe denominators up to p^3
ONE = (F(0), F(1))


def s_of(p, k=1):
    return (F(0), F(p) ** k)


def lazy_mrho(inst):
    return mrho_pair(inst.pair, window=[inst.group.identity()])


def nonneg_integral(f):
    return all(v.is_rational() and v.as_fraction().denominator == 1 and v.as_fraction() > 0 for _, v in f.items())


def as_lists(m: Matrix):
    return [list(row) for row in m.entries()]


# --- 1 ------------------------------------------------------------------------------------

def test_criterion_1_hecke_algebra_axioms():
    with criterion(1, "Hecke algebra axioms", budget=5):
        for build in FINITE:
            pair = build()
            one = HeckeElement.unit(pair)
            basis = [HeckeElement.basis(pair, k) for k in pair.double_cosets()]
            for A in basis:
                assert one * A == A == A * one
                assert A.star().star() == A
                for B in basis:
                    AB = A * B
                    assert nonneg_integral(AB)
                    assert AB.star() == B.star() * A.star()
                    for C in basis:
                        assert AB * C == A * (B * C)
            rng = random.Random(1)
            keys = pair.double_cosets()
            for _ in range(10):
                f, h = (HeckeElement(pair, {k: Scalar(rng.randint(-3, 3), rng.randint(-3, 3)) for k in keys})
                        for _ in range(2))
                assert (f * h).star() == h.star() * f.star()
                assert (f * Scalar(0, 1)).star() == f.star() * Scalar(0, -1)
        for p, inst in BC.items():
            pair = inst.pair
            one = HeckeElement.unit(pair)
            rng = random.Random(p)
            for _ in range(25):
                A, B, C = (HeckeElement.basis(pair, inst.sample(rng)) for _ in range(3))
                AB = A * B
                assert AB * C == A * (B * C)
                assert AB.star() == B.star() * A.star()
                assert one * A == A == A * one
                assert nonneg_integral(AB)


# --- 2 ------------------------------------------------------------------------------------

def _brute_R_table(p, top=4):
    span = 2 * p ** top + 2
    return {k: oracles.bc_R_brute(s_of(p, k), span=span) for k in range(top + 1)}


def test_criterion_2_counting_identities():
    with criterion(2, "counting identities", budget=10):
        # products against the convolution sum, exhaustively on finite pairs
        hyp_seen = 0
        for build in FINITE:
            pair = build()
            g = pair.group
            H = oracles.subgroup(g, pair.in_h)
            keys = pair.double_cosets()
            for a in keys:
                for b in keys:
                    prod = HeckeElement.basis(pair, a) * HeckeElement.basis(pair, b)
                    brute = oracles.hecke_product_brute(g, H, a.rep, b.rep)
                    assert {k: v.as_fraction() for k, v in prod.items()} == \
                        {pair.double_coset_key(next(iter(D))): c for D, c in brute.items()}
                    rep = check_mult_identity(pair, a, b)
                    ab = g.mul(a.rep, b.rep)
                    lands = {g.mul(x, y) for x in oracles.double_coset(g, H, a.rep)
                             for y in oracles.double_coset(g, H, b.rep)} == oracles.double_coset(g, H, ab)
                    assert rep and rep.details["hypothesis"] == lands
                    if lands:
                        hyp_seen += 1
                        coef = F(oracles.R_brute(g, H, a.rep) * oracles.R_brute(g, H, b.rep), oracles.R_brute(g, H, ab))
                        assert rep.details["equal"] and rep.details["coefficient"] == str(coef)
                        assert brute == {oracles.double_coset(g, H, ab): coef}
        assert hyp_seen > 0
        product_probes = counting_probes = mult_probes = 0
        for p, inst in BC.items():
            pair, g = inst.pair, inst.group
            span = 2 * p ** 3
            rng = random.Random(20 + p)
            for _ in range(150):
                a, b = inst.sample(rng), inst.sample(rng)
                prod = HeckeElement.basis(pair, a) * HeckeElement.basis(pair, b)
                brute = {pair.double_coset_key(z): c for z, c in oracles.bc_product_brute(a, b, span)}
                assert {k: v.as_fraction() for k, v in prod.items()} == brute
                product_probes += 1
            for _ in range(30):
                s, t, n, m = inst.sample(rng, "s"), inst.sample(rng, "s"), inst.sample(rng, "n"), inst.sample(rng, "n")
                a, b = g.mul(g.inv(s), n), g.mul(m, t)
                ab = g.mul(a, b)
                expect = F(oracles.bc_R_brute(t, span), oracles.bc_R_brute(g.mul(g.inv(s), t), span))
                # counting: every coset xH inside HabH meets HaH in R(t)/R(s^-1 t) cosets of xHb^-1H
                rep = check_counting(inst, s, n, m, t, limit=3)
                assert rep and rep.details["value"] == str(expect)
                for k in range(3):
                    x = oracles.bc_mul((F(k), F(1)), ab)
                    assert oracles.bc_conv_brute(a, b, x, span) == expect
                counting_probes += 1
                # the multiplication identity, whose hypothesis holds for a = s^-1 n, b = m t
                mid = check_mult_identity(pair, a, b)
                assert mid and mid.details["hypothesis"] and mid.details["equal"]
                coef = F(oracles.bc_R_brute(a, span) * oracles.bc_R_brute(b, span), oracles.bc_R_brute(ab, span))
                assert mid.details["coefficient"] == str(coef) == str(expect)
                (z, c), = oracles.bc_product_brute(a, b, span)
                assert oracles.bc_in_double(z, ab, span) and c == coef
                mult_probes += 1
            assert check_r_multiplicative(inst, 4)
            R = _brute_R_table(p)
            for i in range(5):
                for j in range(5 - i):
                    assert R[i] * R[j] == R[i + j] == pair.R(s_of(p, i + j))
        assert product_probes >= 200 and counting_probes >= 50 and mult_probes >= 50
        assert check_r_multiplicative(bc_full(), 2)


# --- 3 ------------------------------------------------------------------------------------

def test_criterion_3_m_rho_is_covariant():
    with criterion(3, "(M, rho) covariant, (rM) and (MrM)"):
        for build in FINITE:
            pair = build()
            g = pair.group
            rp = mrho_pair(pair)
            rep = check_covariant_pair(pair, rp)
            assert rep and rep.details["scope"] == "exhaustive"
            H = oracles.subgroup(g, pair.in_h)
            order = [oracles.left_coset(g, H, c.rep) for c in pair.cosets()]
            for k in pair.double_cosets():
                brute = oracles.rho_matrix_brute(g, H, k.rep, order)
                assert as_lists(rp.V(k)) == [[Scalar(x) for x in row] for row in brute]
            for c in pair.cosets():
                assert rp.nu(c) == m_indicator(pair, c)
            cos = [c.rep for c in pair.cosets()]
            for a in pair.double_cosets():
                for y in cos:
                    assert check_rM(pair, a.rep, y)
            for x in cos:
                for y in cos:
                    assert matrix_unit_formula_check(pair, x, y)
        for p, inst in BC.items():
            pair, g = inst.pair, inst.group
            rng = random.Random(30 + p)
            rp = lazy_mrho(inst)
            triples = [(inst.sample(rng), inst.sample(rng), inst.sample(rng)) for _ in range(200)]
            rep = check_covariant_pair(pair, rp, triples)
            assert rep and rep.probes >= 200
            for _ in range(50):
                assert check_rM(pair, inst.sample(rng), inst.sample(rng))
                assert matrix_unit_formula_check(pair, inst.sample(rng), inst.sample(rng))
            # rho columns against the coset scan: rho([HaH]) e_y = sum over uH in Ha^-1H of e_yuH
            for _ in range(30):
                a, y = inst.sample(rng), inst.sample(rng)
                us = oracles.bc_cosets_in_double(oracles.bc_inv(a), 2 * p ** 3)
                want = Counter(pair.coset_key(oracles.bc_mul(y, u)) for u in us)
                got = rho_op(pair, HeckeElement.basis(pair, a)).column(pair.coset_key(y))
                assert got == {k: Scalar(v) for k, v in want.items()}


# --- 4 ------------------------------------------------------------------------------------

def _all_conditions(rep):
    return rep and all(rep.details[k] is True for k in ("i", "ii", "iii", "iv"))


def test_criterion_4_lemma_conditions_and_character_fault():
    with criterion(4, "matrix-unit conditions (i)-(iv)"):
        for build in FINITE:
            pair = build()
            generated = [multiple_pair(pair, d) for d in (1, 2, 3, 4)]
            rng = random.Random(f"criterion-4:{pair.name}")
            generated += [random_conjugate(multiple_pair(pair, 1 + i % 4), rng)[0] for i in range(20)]
            for rp in generated:
                assert check_covariant_pair(pair, rp)
                assert check_matrix_unit_pair(pair, rp)
                assert _all_conditions(check_lemma_conditions(pair, rp))
        for build in (s3_s2, s4_s3):
            pair = build()
            bad = character_pair(pair)
            cov, mu = check_covariant_pair(pair, bad), check_matrix_unit_pair(pair, bad)
            assert not cov and not mu and cov.witness and mu.witness
            assert {"a", "x", "b"} <= set(cov.witness)
            lem = check_lemma_conditions(pair, bad)
            assert not lem and lem.witness


# --- 5 ------------------------------------------------------------------------------------

def test_criterion_5_decomposition_round_trip():
    with criterion(5, "decomposition round trip", budget=30):
        runs = 0
        for build in FINITE:
            pair = build()
            for d in (1, 2, 3):
                eye = Matrix.identity(range(d))
                for seed in range(20):
                    rp, W = random_conjugate(multiple_pair(pair, d), random.Random(f"{pair.name}:{d}:{seed}"))
                    assert W.is_unitary()
                    dec = decompose_theorem_mult(pair, rp)
                    psi, psa = dec.psi, dec.psi.adjoint()
                    assert dec.multiplicity == d and psi.is_unitary()
                    for c in pair.cosets():
                        assert psi @ rp.nu(c) @ psa == kron(eye, m_indicator(pair, c))
                    for k in pair.double_cosets():
                        assert psi @ rp.V(k) @ psa == kron(eye, rho_op(pair, k))
                    runs += 1
        assert runs == len(FINITE) * 3 * 20


# --- 6 ------------------------------------------------------------------------------------

def _equiv_probes(inst, rng, n):
    smp = inst.sample
    return {"axb": [(smp(rng), smp(rng), smp(rng)) for _ in range(n)],
            "nx": [(smp(rng, "n"), smp(rng)) for _ in range(n)],
            "sx": [(smp(rng, "s"), smp(rng)) for _ in range(n)]}


def test_criterion_6_semidirect_equivalence():
    with criterion(6, "covariance iff (rtnh) and (wkly)"):
        for p, inst in BC.items():
            g = inst.group
            rng = random.Random(60 + p)
            pr = _equiv_probes(inst, rng, 200)
            # forward: covariant pairs satisfy both conditions on every probe
            for name, rp in covariant_family(inst, rng).items():
                rep = check_theorem_equiv(inst, rp, pr)
                assert rep and rep.details["covariant"] and rep.details["rtnh"] and rep.details["wkly"], name
                assert rep.probes >= 600
            # backward: pairs failing a condition are caught as non-covariant too
            for rp in (shift_nu(lazy_mrho(inst), inst.n_elem(F(1, p))),
                       character_pair(inst.pair, [g.identity()])):
                rep = check_theorem_equiv(inst, rp, pr)
                assert rep and not rep.details["covariant"] and not (rep.details["rtnh"] and rep.details["wkly"])
            rejected = check_theorem_equiv(inst, kill_generator(lazy_mrho(inst), s_of(p)),
                                           {**pr, "sx": [(s_of(p), x) for _, x in pr["sx"][:10]]})
            assert not rejected and rejected.details["rejected"]
            smp = inst.sample
            lk = [(smp(rng, "s"), smp(rng, "s"), smp(rng, "n"), smp(rng)) for _ in range(100)]
            rep = check_lemma_key(inst, lazy_mrho(inst), lk)
            assert rep and rep.probes >= 100
            for k in (1, 2):
                assert check_msms(inst, s_of(p, k))
            span = 2 * p ** 3
            for _ in range(30):
                s, t, n = smp(rng, "s"), smp(rng, "s"), smp(rng, "n")
                rep = check_decomp(inst, s, n, t)
                want = F(oracles.bc_R_brute(t, span), oracles.bc_R_brute(g.mul(g.inv(s), t), span))
                assert rep and rep.details["coefficient"] == str(want)
                for m in conjugate_cosets(inst, t):
                    assert check_trick(inst, m.rep, t)


# --- 7 ------------------------------------------------------------------------------------

def _conjugate_coset_reps(s, span):
    """Cosets inside sHs^-1H, by scanning s h s^-1 for h in H."""
    reps = []
    for k in range(-span, span):
        y = oracles.bc_mul(s, oracles.bc_mul((F(k), F(1)), oracles.bc_inv(s)))
        if not any(oracles.bc_same_coset(y, r) for r in reps):
            reps.append(y)
    return reps


def test_criterion_7_covariance_taxonomy():
    with criterion(7, "Murphy and Stacey covariance"):
        for p, inst in BC.items():
            pair, g = inst.pair, inst.group
            rng = random.Random(70 + p)
            xs = [inst.sample(rng) for _ in range(50)]
            s_list = [s_of(p), s_of(p, 2)]
            base = lazy_mrho(inst)
            assert check_murphy(inst, base, s_list, xs)
            # Stacey fails at s = (0, p); rho(mu_s) rho(mu_s)* is 1/R(s) times an indicator
            s = s_of(p)
            assert not check_stacey(inst, base, [s], xs)
            obs = stacey_obstruction(inst, s, xs)
            assert obs and obs.details["R(s)"] == p and not obs.details["unitary"]
            span = 2 * p ** 3
            Rs = oracles.bc_R_brute(s, span)
            ms = _conjugate_coset_reps(s, span)
            assert len(ms) == Rs == p
            mu = HeckeElement.basis(pair, s) * Scalar.sqrt(F(1, Rs))
            op = rho_op(pair, mu) @ rho_op(pair, mu.star())
            for x in xs[:20]:
                want = {pair.coset_key(oracles.bc_mul(x, m)): Scalar(F(1, Rs)) for m in ms}
                assert op.column(pair.coset_key(x)) == want
            # Stacey implies Murphy on every probed pair
            pairs = dict(covariant_family(inst, rng))
            pairs["character-v"] = character_pair(pair, [g.identity()])
            pairs["shift-nu"] = shift_nu(base, inst.n_elem(F(1, p)))
            for s in [ONE] + s_list:
                for name, rp in pairs.items():
                    st = check_stacey(inst, rp, [s], xs[:15]).passed
                    mu_ok = check_murphy(inst, rp, [s], xs[:15]).passed
                    assert mu_ok or not st, (name, s)
                    if name != "character-v" and name != "shift-nu":
                        assert st == (pair.R(s) == 1)


# --- 8 ------------------------------------------------------------------------------------

def _random_function(inst, rng):
    return {inst.pair.coset_key(inst.sample(rng)): Scalar(rng.randint(-3, 3), rng.randint(-2, 2)) for _ in range(3)}


def test_criterion_8_exel_conditions():
    with criterion(8, "(TC1), (TC2), (C3), rank-one, transfer"):
        for p, inst in BC.items():
            pair, g = inst.pair, inst.group
            rng = random.Random(80 + p)
            rp = lazy_mrho(inst)
            zs = [inst.sample(rng) for _ in range(50)]
            funcs = [_random_function(inst, rng) for _ in range(50)]
            for k in (1, 2):
                s = s_of(p, k)
                rep = check_exel(inst, rp, s, zs, funcs[:2])
                assert rep and all(rep.details["parts"].values())
                rank_one = check_exel(inst, rp, s, zs[:1], funcs)
                assert rank_one and rank_one.details["parts"]["rank-one"]
                pairs = [(_random_function(inst, rng), _random_function(inst, rng)) for _ in range(20)]
                assert check_transfer(inst, s, pairs, zs[:10])
                assert check_rt_preimages(inst, s, zs[:5])
                Rs = oracles.bc_R_brute(s, 2 * p ** 3)
                for z in zs[:10]:
                    assert transfer_L(inst, s, {z: 1}) == {pair.coset_key(g.mul(z, s)): Scalar(F(1, Rs))}
                    assert count_preimages_bruteforce(inst, s, z) == Rs
            assert check_r_multiplicative(inst, 3, zs[:5])


# --- 9 ------------------------------------------------------------------------------------

def test_criterion_9_fell_bundle_regularity():
    with criterion(9, "regular representations of graded group algebras", budget=60):
        faults = 0
        for build in (s3_s2, z4_normal):
            pair = build()
            algebra = group_algebra(pair.group)
            assert algebra.check()
            thetas = theta_catalog(pair, algebra)
            assert len(thetas) == (3 if build is z4_normal else 2)
            for name, theta in thetas.items():
                ct = build_regular_rep(algebra, theta, pair)
                verdict = decide_regularity(ct, regular_v(ct))
                assert verdict.regular and theta_equal(verdict.theta, theta), name
                assert decide_regularity(ct).regular
            ct = build_regular_rep(algebra, thetas["trivial"], pair)
            for verdict in (decide_regularity(perturb_nu(ct)), decide_regularity(ct, noncommuting_v(ct)),
                            decide_regularity(unequal_ranks(ct))):
                assert not verdict.regular and verdict.witness
                faults += 1
            if build is s3_s2:
                verdict = decide_regularity(swap_nu(ct))
                assert not verdict.regular and verdict.witness
                faults += 1
        assert faults >= 3


# --- 10 -----------------------------------------------------------------------------------

def test_criterion_10_determinism():
    with criterion(10, "byte-identical verify reports"):
        cmd = [sys.executable, "-m", "heckecov", "verify", None, "all", "--seed", "42"]
        procs = {}
        for name in CATALOG:
            for hashseed in ("0", "12345"):
                env = {**os.environ, "PYTHONHASHSEED": hashseed}
                procs[name, hashseed] = subprocess.Popen([*cmd[:3], "verify", name, "all", "--seed", "42"],
                                                         stdout=subprocess.PIPE, stderr=subprocess.PIPE, env=env)
        out = {}
        for key, proc in procs.items():
            stdout, stderr = proc.communicate(timeout=600)
            assert proc.returncode == 0, (key, stderr.decode()[-500:])
            out[key] = stdout
        for name in CATALOG:
            assert out[name, "0"] and out[name, "0"] == out[name, "12345"], name
