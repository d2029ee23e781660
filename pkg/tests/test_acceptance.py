"""
Acceptance suite: one PASS/FAIL line per criterion, printed in the pytest
terminal summary (or directly when run as a script).
"""

import contextlib
import io
import json
import random
import tempfile
import time
from fractions import Fraction
from pathlib import Path

from conftest import record_acceptance
from qforge.boundedclasses import (
    build_phi_X, chooser_independence, counting_family, defect_report,
    en_family, en_report, growth_certificate, independence_certificate, k_quandle_pipeline,
)
from qforge.cli import main as cli_main
from qforge.linalg import rank
from qforge.cohomology import (
    cocycle_dimension, cohomology_dimension, composite_is_zero,
)
from qforge.linkdiagram import (
    brute_force_colorings, count_colorings, figure_eight, kinked_trefoil,
    presentation, trefoil, unknot, unlink, hopf_link, wirtinger_presentation,
)
from qforge.quandle import (
    check_axioms, components, conjugation_quandle, dihedral, free_k_quandle,
    free_product, free_quandle, rack_op, trivial, truncated_diameter,
    truncated_eccentricity,
)
from qforge.quasimorphism import (
    counting, evaluate, homogenize, homogenized_counting, measure_defect,
    scl_lower_bound,
)
from qforge.words import (
    IDENTITY, Alphabet, commutator, conjugate, enumerate_ball, invert,
    multiply, parse_word, power, random_ball_word,
)

S3 = [(1, 0, 2), (0, 2, 1)]
FAMILY_WORDS = ["ab", "aab", "abb", "ab^-1", "aba^-1b^-1"]


def _naive_class(op):
    n = len(op)
    perm = all(sorted(op[i][j] for i in range(n)) == list(range(n)) for j in range(n))
    dist = all(op[op[x][y]][z] == op[op[x][z]][op[y][z]]
               for x in range(n) for y in range(n) for z in range(n))
    idem = all(op[i][i] == i for i in range(n))
    return "quandle" if perm and dist and idem else "rack" if perm and dist else "neither"


def _random_tables(count, seed=0):
    rng = random.Random(seed)
    tables = []
    for t in range(count):
        n = rng.randint(2, 5)
        if t % 4 == 0:
            # a rack: x*y = sigma(x) for a fixed permutation sigma
            sigma = rng.sample(range(n), n)
            op = [[sigma[i]] * n for i in range(n)]
        else:
            cols = [rng.sample(range(n), n) for _ in range(n)]
            op = [[cols[j][i] for j in range(n)] for i in range(n)]
        tables.append(op)
    return tables


def _corpus():
    return ([dihedral(n) for n in range(3, 13)] + [trivial(n) for n in range(1, 9)]
            + [conjugation_quandle(S3)])


def criterion_1():
    t0 = time.time()
    ok, count = True, 0
    for X in _corpus():
        rep = check_axioms(X)
        ok &= rep.classification == _naive_class(X.op) == "quandle"
        count += 1
    kinds = []
    for op in _random_tables(20):
        got = check_axioms(op).classification
        ok &= got == _naive_class(op)
        kinds.append(got)
        count += 1
    dt = time.time() - t0
    ok &= dt < 5
    mix = {k: kinds.count(k) for k in sorted(set(kinds))}
    return ok, f"{count} tables classified exhaustively; random mix {mix}", dt


def criterion_2():
    t0 = time.time()
    ok = True
    for X in _corpus():
        for n in (1, 2, 3):
            ok &= composite_is_zero(X, n, "rack") and composite_is_zero(X, n, "quandle")
        ok &= cocycle_dimension(X, 1) == len(components(X))
    h_r3 = cohomology_dimension(dihedral(3), 2, "quandle")
    h_t2 = cohomology_dimension(trivial(2), 2, "quandle")
    ok &= h_r3 == 0 and h_t2 == 2
    dt = time.time() - t0
    ok &= dt < 60
    return ok, f"dd = 0 in degrees <= 3 on 19 quandles; H2(R3) = {h_r3}, H2(T2) = {h_t2}", dt


def criterion_3():
    t0 = time.time()
    A = Alphabet.free("ab")
    ok = True
    ball = list(enumerate_ball(A, 4))
    for w in FAMILY_WORDS:
        q = homogenized_counting(w, A)
        for g in ball:
            v = evaluate(q, g, A)
            ok &= all(evaluate(q, power(g, n, A), A) == n * v for n in range(-3, 4))
    rng = random.Random(0)
    q = homogenized_counting("aab", A)
    for _ in range(1000):
        g, h = random_ball_word(A, 6, rng), random_ball_word(A, 6, rng)
        ok &= evaluate(q, conjugate(g, h, A), A) == evaluate(q, g, A)
    measured = []
    for w in FAMILY_WORDS:
        c = counting(w, A)
        d = measure_defect(c, A, 4)
        measured.append(str(d))
        ok &= d <= c.defect_upper
        ch = homogenize(c, A)
        for _ in range(50):
            g = random_ball_word(A, 5, rng)
            for N in (8, 16, 32):
                err = abs(evaluate(ch, g, A) - Fraction(evaluate(c, power(g, N, A), A), N))
                ok &= err <= c.defect_upper / N
    dt = time.time() - t0
    ok &= dt < 120
    return ok, f"homogeneity, 1000 conjugacy pairs, defects at radius 4 = {measured}", dt


def criterion_4():
    t0 = time.time()
    X = free_quandle("ab")
    A = X.alphabet
    p = build_phi_X(X, homogenized_counting("ab", A), 0)
    r3 = defect_report(p, 3)
    r6 = defect_report(p, 6, samples=10_000, seed=0)
    g = growth_certificate(p, 32)
    ok = r3.exhaustive and r3.certified and not r6.exhaustive and r6.pairs == 10_000 \
        and r6.certified and g.certified
    # a wrong certified constant must make the CLI exit nonzero
    with tempfile.TemporaryDirectory() as d:
        bad = Path(d) / "bad.json"
        bad.write_text(json.dumps({"kind": "hcount", "word": "ab", "defect_upper": "1/100"}))
        fq = Path(d) / "fq.json"
        fq.write_text(json.dumps(X.to_json()))
        with contextlib.redirect_stdout(io.StringIO()):
            code = cli_main(["classes", str(fq), str(bad)])
    ok &= code != 0
    dt = time.time() - t0
    ok &= dt < 300
    return ok, (f"bound {r3.bound}: max {r3.observed} on {r3.pairs} exhaustive pairs, "
                f"max {r6.observed} on {r6.pairs} samples; growth to n=32; bad bound exit {code}"), dt


def criterion_5():
    t0 = time.time()
    X = free_quandle("ab")
    A = X.alphabet
    ci = chooser_independence(X, homogenized_counting("ab", A), 0, "shortest", "shifted",
                              samples=1000)
    fam = counting_family(X, FAMILY_WORDS)
    ir = independence_certificate(X, fam, coeff_trials=20, ball_radius=4, n_max=8, seed=0)
    statuses = {t.status for t in ir.trials}
    consistent = all((t.growth is not None and t.growth.certified) == (t.status == "witness")
                     for t in ir.trials)
    ok = ci.certified and ir.witnessed >= 18 and statuses <= {"witness", "inconclusive"} \
        and consistent
    dt = time.time() - t0
    ok &= dt < 600
    return ok, (f"|eta| <= {ci.eta_max} <= D = {ci.defect}, {ci.mismatches} mismatches; "
                f"{ir.witnessed}/20 witnesses, {ir.inconclusive} inconclusive"), dt


def criterion_6():
    t0 = time.time()
    ns = [0, 1, 2, 3, 4]
    rep = en_report(ns, (-100, 100))
    # cochain-level rank of the truncated coboundaries, for the record
    rows = [{i: en_family(n).coboundary(m, 0) for i, m in enumerate(range(-100, 101))}
            for n in ns]
    cochain_rank = rank(rows)
    ok = rep.certified and rep.independent_classes >= 5
    dt = time.time() - t0
    return ok, (f"|d e_n| <= {rep.max_abs_coboundary}, = 1 for m >= n: {rep.unit_above_n}, "
                f"linear growth: {rep.linear_growth}, pairwise distinct: {rep.pairwise_distinct}, "
                f"cochain rank {cochain_rank}, independent classes {rep.independent_classes} "
                f"(needed 5): {rep.reason}"), dt


def criterion_7():
    t0 = time.time()
    P = free_product(free_quandle("a"), free_quandle("b"))
    F = free_quandle("ab")
    rng = random.Random(0)
    ok = True
    for _ in range(1000):
        x, y = F.random_element(rng, 6), F.random_element(rng, 6)
        ok &= rack_op(P, x, y) == rack_op(F, x, y)
    k23 = k_quandle_pipeline("ab", 3, "ab", n_max=16)
    k32 = k_quandle_pipeline("abc", 2, "ab", n_max=16)
    ok &= k23.certified and k32.certified
    X2 = free_k_quandle("ab", 2)
    diams = [truncated_diameter(X2, 0, r, op_radius=None).diameter for r in (2, 4, 6, 8)]
    ok &= diams[1] == diams[2] == diams[3]
    ecc = [truncated_eccentricity(F, (0, IDENTITY), r).eccentricity for r in (2, 4, 6)]
    ok &= ecc[0] < ecc[1] < ecc[2]
    dt = time.time() - t0
    return ok, (f"free product agrees on 1000 pairs; k-pipelines (2,3),(3,2) certified; "
                f"FQ2 diameters {diams}; FQ eccentricities {ecc}"), dt


def criterion_8():
    t0 = time.time()
    R3, R5 = dihedral(3), dihedral(5)
    tre, fig = presentation(trefoil()), presentation(figure_eight())
    c_t3 = count_colorings(tre, R3)
    c_t5 = count_colorings(tre, R5)
    c_f5 = count_colorings(fig, R5)
    ok = c_t3 == 9 and c_t5 == 5 and c_f5 == 25 == brute_force_colorings(fig, R5)
    ok &= all(count_colorings(presentation(unknot()), dihedral(n)) == n for n in range(3, 13))
    for code in (unknot(), trefoil(), figure_eight(), unlink(2), hopf_link(), kinked_trefoil()):
        free, tors = wirtinger_presentation(presentation(code)).abelianization()
        ok &= free == len(code.components) and tors == []
    kinked = presentation(kinked_trefoil())
    ok &= all(count_colorings(tre, dihedral(n)) == count_colorings(kinked, dihedral(n))
              for n in range(3, 9))
    dt = time.time() - t0
    return ok, f"trefoil R3 {c_t3}, R5 {c_t5}; figure-eight R5 {c_f5}; kink invariant", dt


def _cl_upper_bounds(A, targets, radius=5, max_k=2):
    """Brute-force cl: products of at most max_k commutators of ball words."""
    ball = list(enumerate_ball(A, radius))
    C = {commutator(x, y, A) for x in ball for y in ball}
    out = {}
    for name, g in targets.items():
        if g == IDENTITY:
            out[name] = 0
        elif g in C:
            out[name] = 1
        elif max_k >= 2 and any(multiply(invert(c, A), g, A) in C for c in C):
            out[name] = 2
        else:
            out[name] = None
    return out


def criterion_9():
    t0 = time.time()
    A = Alphabet.free("ab")
    c = parse_word("aba^-1b^-1", A)
    family = [homogenized_counting(w, A) for w in FAMILY_WORDS]
    ok = not any(q.empirical for q in family)
    L = scl_lower_bound(c, family, A).lower
    ok &= L > 0
    targets = {n: power(c, n, A) for n in (1, 2, 3)}
    cl = _cl_upper_bounds(A, targets)
    for n in (1, 2, 3):
        ub = cl[n] if cl[n] is not None else n  # [a,b]^n is n commutators
        ok &= ub <= n
        ok &= L <= Fraction(1, 2) * Fraction(ub, n) and L <= Fraction(ub, n)
        ok &= scl_lower_bound(targets[n], family, A).lower == n * L
    dt = time.time() - t0
    return ok, f"scl([a,b]) >= {L}; brute-force cl([a,b]^n) <= {[cl[n] for n in (1, 2, 3)]}", dt


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def _run(n):
    ok, detail, dt = CRITERIA[n - 1]()
    record_acceptance(n, ok, detail, dt)
    assert ok, detail


def test_criterion_1_axioms():
    _run(1)


def test_criterion_2_cohomology():
    _run(2)


def test_criterion_3_quasimorphisms():
    _run(3)


def test_criterion_4_prop41():
    _run(4)


def test_criterion_5_chooser_and_independence():
    _run(5)


def test_criterion_6_en_family():
    _run(6)


def test_criterion_7_free_products_and_k_quandles():
    _run(7)


def test_criterion_8_links():
    _run(8)


def test_criterion_9_scl():
    _run(9)


if __name__ == "__main__":
    for i in range(1, len(CRITERIA) + 1):
        ok, detail, dt = CRITERIA[i - 1]()
        record_acceptance(i, ok, detail, dt)
