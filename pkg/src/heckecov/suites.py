"""Named verification suites, shared by the command line and the tests.

Each suite returns a list of :class:`CheckReport`; every report is expected
to pass on a healthy instance, so an injected fault shows up as failures.
Randomised probes come from ``random.Random(f"{seed}:{suite}")``.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .covariance import (DegenerateError, NotCovariantError, RepPair, UnequalRanksError, character_pair,
                         character_value,
                         check_covariant_pair, check_lemma_conditions, check_matrix_unit_pair,
                         check_prop_mu_cov, conjugate_pair, decompose_theorem_mult, induce_v_from_unitary,
                         matrix_unit_unitary, mrho_pair, multiple_pair, normal_case_bridge, random_conjugate,
                         shift_nu, twist_v, unitary_from_nu)
from .fell import (build_regular_rep, conjugate_triple, decide_regularity, group_algebra, left_regular,
                   noncommuting_v, perturb_nu, regular_v, rotation_rep, theta_equal, trivial_rep,
                   unequal_ranks)
from .groups import CyclicGroup
from .l2rep import check_rM, lambda_op, matrix_unit_formula_check
from .linalg import PYTHAGOREAN, Matrix, direct_sum, random_unitary
from .pair import HeckePair
from .reports import CheckReport, merge
from .scalars import Scalar
from .semigroup import (SemidirectHeckeInstance, check_counting, check_decomp, check_e_unitary, check_exel,
                        check_lemma_key, check_msms, check_murphy, check_r_multiplicative, check_rt_preimages,
                        check_stacey, check_stacey_group, check_theorem_equiv, check_transfer, check_trick,
                        conjugate_cosets, joint_factorize, ore_factorize, stacey_obstruction)

SUITES = ("s1-covariance", "s1-theorem-mult", "s2-equiv", "s2-exel", "s3-regularity")
FAULTS = ("character-v", "perturbed-nu", "noncommuting-v", "unequal-ranks")
FAULT_SUITES = {
    "character-v": {"s1-covariance", "s2-equiv", "s2-exel"},
    "perturbed-nu": {"s1-covariance", "s1-theorem-mult", "s2-equiv", "s2-exel", "s3-regularity"},
    "noncommuting-v": {"s3-regularity"},
    "unequal-ranks": {"s1-theorem-mult", "s3-regularity"},
}

# random conjugation makes Gram-Schmidt expensive; larger carriers skip that variant
CONJUGATION_DIM_LIMIT = 32

DEFAULT_PROBES = {"triples": 200, "pairs": 200, "lemma": 100, "z": 50, "functions": 50, "seeds": 3}


def pair_of(inst) -> HeckePair:
    return inst.pair if isinstance(inst, SemidirectHeckeInstance) else inst


def applicable(inst, suite: str) -> bool:
    semi = isinstance(inst, SemidirectHeckeInstance)
    if suite.startswith("s2"):
        return semi
    if suite in ("s1-theorem-mult", "s3-regularity"):
        return pair_of(inst).is_finite
    return suite in SUITES


def _rng(seed, suite: str) -> random.Random:
    return random.Random(f"{seed}:{suite}")


def _named(report: CheckReport, name: str) -> CheckReport:
    report.name = name
    return report


def _rotation_on(labels, a, b) -> Matrix:
    c, s = PYTHAGOREAN[0]
    entries = {(l, l): 1 for l in labels if l not in (a, b)}
    entries.update({(a, a): c, (a, b): -s, (b, a): s, (b, b): c})
    return Matrix.from_entries(labels, labels, entries)


def perturbed_nu_pair(inst, rp: RepPair) -> RepPair:
    """Break covariance by moving nu only: a rotation of two cosets when finite,
    a right translation by an element of N otherwise."""
    pair = rp.pair
    if rp.lazy:
        return shift_nu(rp, inst.n_elem(inst.n_samples[0]), name="perturbed-nu")
    U = _rotation_on(rp.carrier, rp.carrier[0], rp.carrier[-1])
    Ua = U.adjoint()
    return RepPair(pair, lambda c: U @ rp.nu(c) @ Ua, rp.V, carrier=rp.carrier, name="perturbed-nu")


def _base_pair(inst, fault: str | None) -> RepPair:
    pair = pair_of(inst)
    rp = mrho_pair(pair, window=[pair.group.identity()])
    if fault == "character-v":
        return character_pair(pair, window=[pair.group.identity()])
    if fault == "perturbed-nu":
        return perturbed_nu_pair(inst, rp)
    return rp


# --- section 1 ------------------------------------------------------------------------------

# the covariance identity for (a, x, b) has L(a)R(b) terms; larger triples are redrawn
TRIPLE_BUDGET = 256


def _bounded_triple(pair: HeckePair, sample):
    while True:
        a, x, b = sample(), sample(), sample()
        if pair.L(a) * pair.R(b) <= TRIPLE_BUDGET:
            return a, x, b


def suite_s1_covariance(inst, rng: random.Random, fault=None, probes=None) -> list[CheckReport]:
    probes = {**DEFAULT_PROBES, **(probes or {})}
    pair = pair_of(inst)
    g = pair.group
    rp = _base_pair(inst, fault)
    out = []
    if pair.is_finite:
        out.append(check_covariant_pair(pair, rp))
        cos = [c.rep for c in pair.cosets()]
        dcs = [k.rep for k in pair.double_cosets()]
        out.append(merge("rM", [check_rM(pair, a, y) for a in dcs for y in cos]))
        out.append(merge("MrM", [matrix_unit_formula_check(pair, x, y) for x in cos for y in cos]))
        out.append(check_matrix_unit_pair(pair, rp))
        out.append(check_lemma_conditions(pair, rp))
        out.append(check_prop_mu_cov(pair, rp))
        if all(pair.L(c) == 1 for c in cos):
            out.append(normal_case_bridge(pair, rp))
    else:
        sample = lambda: inst.sample(rng)
        triples = [_bounded_triple(pair, sample) for _ in range(probes["triples"])]
        out.append(check_covariant_pair(pair, rp, triples))
        few = probes["triples"] // 4
        out.append(merge("rM", [check_rM(pair, sample(), sample()) for _ in range(few)]))
        out.append(merge("MrM", [matrix_unit_formula_check(pair, sample(), sample()) for _ in range(few)]))
        cos = [g.identity()] + [sample() for _ in range(3)]
        out.append(check_matrix_unit_pair(pair, rp, cos))
        lp = {"ax": [(sample(), sample()) for _ in range(few)],
              "xb": [(sample(), sample()) for _ in range(few)],
              "xby": [(sample(), sample(), sample()) for _ in range(few)]}
        out.append(check_lemma_conditions(pair, rp, lp))
    return out


def _unequal_rank_pair(pair: HeckePair) -> RepPair:
    """(M, rho) plus a line on which nu(e_H) = 1 and V acts by the character."""
    base = mrho_pair(pair)
    extra = "extra"
    carrier = base.carrier + (extra,)
    home = pair.coset_key(pair.group.identity())
    one = Matrix.identity([extra])
    zero = Matrix.zero([extra], [extra])

    def grow(m, corner):
        return direct_sum([m, corner]).relabel(carrier, carrier)

    return RepPair(pair, lambda c: grow(base.nu(c), one if c == home else zero),
                   lambda k: grow(base.V(k), one * character_value(pair, k)),
                   carrier=carrier, name="unequal-ranks")


def decomposition_round_trip(pair: HeckePair, d: int, rng: random.Random) -> CheckReport:
    """Conjugate d copies of (M, rho) by a random exact unitary and decompose."""
    rp, _ = random_conjugate(multiple_pair(pair, d), rng)
    dec = decompose_theorem_mult(pair, rp)
    ok = dec.multiplicity == d and dec.report.passed
    return CheckReport(f"theorem-mult[d={d}]", ok, dec.report.probes,
                       None if ok else {"multiplicity": dec.multiplicity, **(dec.report.witness or {})},
                       details={"multiplicity": dec.multiplicity, "psi": dec.report.details.get("parts")})


def suite_s1_theorem_mult(inst, rng: random.Random, fault=None, probes=None) -> list[CheckReport]:
    probes = {**DEFAULT_PROBES, **(probes or {})}
    pair = pair_of(inst)
    out = []
    if fault in ("perturbed-nu", "unequal-ranks"):
        rp = perturbed_nu_pair(inst, mrho_pair(pair)) if fault == "perturbed-nu" else _unequal_rank_pair(pair)
        try:
            dec = decompose_theorem_mult(pair, rp)
            out.append(_named(dec.report, "theorem-mult[fault]"))
        except (NotCovariantError, DegenerateError, UnequalRanksError) as exc:
            w = getattr(exc, "report", None)
            out.append(CheckReport("theorem-mult[fault]", False, 1,
                                   w.witness if w is not None else {"error": str(exc)}))
        return out
    for d in (1, 2, 3):
        parts = [decomposition_round_trip(pair, d, rng) for _ in range(probes["seeds"])]
        out.append(merge(f"theorem-mult[d={d}]", parts, multiplicity=d, seeds=len(parts)))
    rp, _ = random_conjugate(multiple_pair(pair, 2), rng)
    mu = matrix_unit_unitary(pair, rp)
    out.append(_named(mu.report, "matrix-unit-unitary"))
    psi, d = unitary_from_nu(pair, rp)
    induced = induce_v_from_unitary(pair, rp, psi, d)
    out.append(_named(check_covariant_pair(pair, induced), "induced-v-covariant"))
    return out


# --- section 2 ------------------------------------------------------------------------------

def _p_degree(inst, q) -> int:
    p = inst.params.get("p", 2)
    q = Fraction(q)
    num, den, k = q.numerator, q.denominator, 0
    while num % p == 0:
        num //= p
        k += 1
    while den % p == 0:
        den //= p
        k -= 1
    return k


def covariant_family(inst: SemidirectHeckeInstance, rng: random.Random) -> dict[str, RepPair]:
    """(M, rho), a gauge twist of it, and its conjugate by a lambda_g."""
    pair = inst.pair
    base = mrho_pair(pair, window=[pair.group.identity()])
    powers = [Scalar(1), Scalar(0, 1), Scalar(-1), Scalar(0, -1)]
    twist = twist_v(base, lambda k: powers[_p_degree(inst, k.rep[1]) % 4], name="gauge-twist")
    gel = inst.sample(rng)
    lam = lambda_op(pair, gel)
    # lambda_g* M(e_x) lambda_g lives on the column g^-1 x
    ginv = pair.group.inv(gel)
    conj = RepPair(pair, lambda c: lam.adjoint() @ base.nu(c) @ lam, base.V, name="lambda-conjugate",
                   window=base.window, anchor_map=lambda x: [pair.group.mul(ginv, x)])
    return {"M,rho": base, "gauge-twist": twist, "lambda-conjugate": conj}


def _s_list(inst: SemidirectHeckeInstance) -> list:
    """S generators and their squares, skipping squares over the instance's term budget."""
    gens = [inst.s_elem(s) for s in inst.s_spec.generators]
    sq = [inst.s_elem(s * s) for s in inst.s_spec.generators]
    budget = inst.term_budget
    return gens + [x for x in sq if budget is None or inst.pair.R(x) <= budget]


def suite_s2_equiv(inst: SemidirectHeckeInstance, rng: random.Random, fault=None, probes=None) -> list[CheckReport]:
    probes = {**DEFAULT_PROBES, **(probes or {})}
    pair, g = inst.pair, inst.group
    smp = inst.sample
    npr = probes["pairs"]
    pr = {"axb": [(smp(rng), smp(rng), smp(rng)) for _ in range(npr)],
          "nx": [(smp(rng, "n"), smp(rng)) for _ in range(npr)],
          "sx": [(smp(rng, "s"), smp(rng)) for _ in range(npr)]}
    out = []
    rp = _base_pair(inst, fault)
    out.append(_named(check_covariant_pair(pair, rp, pr["axb"][: npr // 2]), "M,rho covariant"))
    fam = covariant_family(inst, rng)
    if fault:
        fam["M,rho"] = rp
    for name, pairing in fam.items():
        out.append(_named(check_theorem_equiv(inst, pairing, pr), f"theorem-equiv[{name}]"))
    for name, pairing in {"shift-nu": shift_nu(fam["M,rho"] if not fault else mrho_pair(pair), inst.n_elem(inst.n_samples[0])),
                          "character-v": character_pair(pair, [g.identity()])}.items():
        rep = check_theorem_equiv(inst, pairing, {k: v[: npr // 4] for k, v in pr.items()})
        out.append(_named(rep, f"theorem-equiv[{name}]"))
    lk = [(smp(rng, "s"), smp(rng, "s"), smp(rng, "n"), smp(rng)) for _ in range(probes["lemma"])]
    out.append(check_lemma_key(inst, rp, lk))
    s_list = _s_list(inst)
    out.append(merge("msms", [check_msms(inst, s) for s in s_list]))
    out.append(check_e_unitary(inst, [inst.n_elem(n) for n in inst.n_samples]))
    dec, trick, counting = [], [], []
    for _ in range(probes["z"]):
        s, t, n = smp(rng, "s"), smp(rng, "s"), smp(rng, "n")
        dec.append(check_decomp(inst, s, n, t))
        m = conjugate_cosets(inst, t)
        trick.append(check_trick(inst, rng.choice(m).rep, t))
        counting.append(check_counting(inst, s, n, smp(rng, "n"), t, limit=3))
    out += [merge("decomp", dec), merge("trick", trick), merge("counting", counting)]
    xs = [smp(rng) for _ in range(probes["z"])]
    out.append(check_murphy(inst, rp, s_list, xs))
    out.append(stacey_obstruction(inst, s_list[0], xs[:20]))
    out.append(stacey_taxonomy(inst, rp, s_list, xs[:20]))
    out.append(check_stacey_group(inst, rp, s_list, [inst.n_elem(n) for n in inst.n_samples]))
    out.append(ore_checks(inst, rng))
    return out


def stacey_taxonomy(inst: SemidirectHeckeInstance, rp: RepPair, s_list, xs) -> CheckReport:
    """Stacey covariance holds at s exactly when R(s) = 1, and Stacey implies Murphy."""
    pair = inst.pair
    verdicts = {}
    ok = True
    for s in s_list:
        st = check_stacey(inst, rp, [s], xs).passed
        mu = check_murphy(inst, rp, [s], xs).passed
        unitary = pair.R(s) == 1
        verdicts[inst.group.format(s)] = {"stacey": st, "murphy": mu, "R": pair.R(s)}
        ok = ok and (st == unitary) and (mu or not st)
    return CheckReport("stacey-taxonomy", ok, len(s_list) * len(xs), None if ok else {"verdicts": verdicts},
                       details={"verdicts": verdicts})


def ore_checks(inst: SemidirectHeckeInstance, rng: random.Random, n: int = 20) -> CheckReport:
    parts = [inst.s_spec.check(inst.s_spec.words(2))]
    g = inst.group
    bad = None
    for i in range(n):
        a, b = inst.sample(rng), inst.sample(rng)
        try:
            ore_factorize(inst, a)
            joint_factorize(inst, a, b)
        except ArithmeticError as exc:
            bad = {"a": g.format(a), "b": g.format(b), "error": str(exc)}
            break
    parts.append(CheckReport("ore-factorize", bad is None, n, bad))
    return merge("ore", parts)


def _random_function(inst: SemidirectHeckeInstance, rng: random.Random, size: int = 4) -> dict:
    return {inst.pair.coset_key(inst.sample(rng)): Scalar(rng.randint(-3, 3), rng.randint(-2, 2))
            for _ in range(size)}


def suite_s2_exel(inst: SemidirectHeckeInstance, rng: random.Random, fault=None, probes=None) -> list[CheckReport]:
    probes = {**DEFAULT_PROBES, **(probes or {})}
    rp = _base_pair(inst, fault)
    out = []
    zs = [inst.sample(rng) for _ in range(probes["z"])]
    funcs = [_random_function(inst, rng) for _ in range(probes["functions"])]
    for s in _s_list(inst):
        out.append(_named(check_exel(inst, rp, s, zs, funcs), f"exel[{inst.group.format(s)}]"))
        pairs = [(_random_function(inst, rng), _random_function(inst, rng)) for _ in range(10)]
        out.append(_named(check_transfer(inst, s, pairs, zs[:10]), f"transfer[{inst.group.format(s)}]"))
        out.append(_named(check_rt_preimages(inst, s, zs[:5]), f"rt-preimages[{inst.group.format(s)}]"))
    max_len = 4 if len(inst.s_spec.generators) == 1 else 2
    out.append(check_r_multiplicative(inst, max_len, zs[:5]))
    return out


# --- section 3 ------------------------------------------------------------------------------

def theta_catalog(pair: HeckePair, algebra) -> dict:
    reps = {"left-regular": left_regular(algebra), "trivial": trivial_rep(algebra)}
    if isinstance(pair.group, CyclicGroup) and pair.group.n == 4:
        reps["rotation"] = rotation_rep(algebra)
    return reps


def suite_s3_regularity(inst, rng: random.Random, fault=None, probes=None) -> list[CheckReport]:
    pair = pair_of(inst)
    algebra = group_algebra(pair.group)
    out = [algebra.check()]
    for name, theta in theta_catalog(pair, algebra).items():
        ct = build_regular_rep(algebra, theta, pair)
        v = None
        if fault == "perturbed-nu":
            ct = perturb_nu(ct)
        elif fault == "unequal-ranks":
            ct = unequal_ranks(ct)
        elif fault == "noncommuting-v":
            v = noncommuting_v(ct)
        if fault is not None:
            verdict = decide_regularity(ct, v)
            out.append(_named(verdict.report(), f"regularity[{name}]"))
            continue
        verdict = decide_regularity(ct, regular_v(ct))
        same = verdict.regular and theta_equal(verdict.theta, theta)
        rep = verdict.report()
        out.append(CheckReport(f"regularity[{name}]", same, rep.probes,
                               rep.witness if not verdict.regular else (None if same else {"theta": "differs"}),
                               details={**rep.details, "theta_recovered": same}))
        helper = decide_regularity(ct)
        out.append(_named(helper.report(), f"regularity[{name}, helper V]"))
        if len(ct.carrier) <= CONJUGATION_DIM_LIMIT:
            W = random_unitary(ct.carrier, rng)
            conj = decide_regularity(conjugate_triple(ct, W), conjugate_pair(regular_v(ct), W))
            out.append(_named(conj.report(), f"regularity[{name}, conjugated]"))
    return out


RUNNERS = {
    "s1-covariance": suite_s1_covariance,
    "s1-theorem-mult": suite_s1_theorem_mult,
    "s2-equiv": suite_s2_equiv,
    "s2-exel": suite_s2_exel,
    "s3-regularity": suite_s3_regularity,
}


def run_suite(inst, suite: str, seed=0, fault: str | None = None, probes: dict | None = None) -> list[CheckReport]:
    if not applicable(inst, suite):
        raise ValueError(f"suite {suite} does not apply to {pair_of(inst).name}")
    f = fault if fault is not None and suite in FAULT_SUITES.get(fault, ()) else None
    probes = {**getattr(inst, "default_probes", {}), **(probes or {})}
    return RUNNERS[suite](inst, _rng(seed, suite), f, probes)
