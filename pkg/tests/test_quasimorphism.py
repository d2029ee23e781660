import json
import random
from fractions import Fraction

import pytest

from conftest import letters_of, naive_reduce
from qforge.errors import CertificationError, InputError, PreconditionError
from qforge.quasimorphism import (
    counting, evaluate, from_json, homogenize, homogenized_counting,
    homomorphism, linear_combination, measure_defect, record_defect,
    restriction_is_zero_on_commutators, scl_lower_bound, to_json,
    vanishes_on_cyclic,
)
from qforge.words import (
    IDENTITY, Alphabet, conjugate, enumerate_ball, parse_word, power,
    random_ball_word,
)


def W(text, A):
    return parse_word(text, A)


def naive_count(word_letters, g_letters):
    inv = [(g, -s) for g, s in reversed(word_letters)]
    m = len(word_letters)
    windows = [g_letters[i:i + m] for i in range(len(g_letters) - m + 1)]
    return windows.count(word_letters) - windows.count(inv)


def limit_oracle(word, g, A, N=12):
    """phi_hat(g) as the stable increment phi(g^(N+1)) - phi(g^N) (free groups)."""
    wl = letters_of(word)
    p1 = letters_of(naive_reduce(letters_of(g) * (N + 1), A.orders))
    p0 = letters_of(naive_reduce(letters_of(g) * N, A.orders))
    return naive_count(wl, p1) - naive_count(wl, p0)


def test_eval_examples(F2):
    assert evaluate(homomorphism({"a": 1}, F2), W("a^3ba^-1", F2), F2) == 2
    assert evaluate(counting("ab", F2), W("abab", F2), F2) == 2
    hab = homogenized_counting("ab", F2)
    assert evaluate(hab, W("ab", F2), F2) == 1
    assert evaluate(hab, W("a", F2), F2) == 0


def test_counting_matches_naive(F2):
    rng = random.Random(5)
    for word in ("ab", "aab", "ab^-1a", "abab"):
        q = counting(word, F2)
        for _ in range(200):
            g = random_ball_word(F2, 8, rng)
            assert evaluate(q, g, F2) == naive_count(letters_of(q.word), letters_of(g))


def test_homogenize_examples(F2):
    h = homomorphism([1, 2], F2)
    assert homogenize(h, F2) is h
    hab = homogenize(counting("ab", F2), F2)
    assert hab.homogeneous and hab.defect_upper == 2 * counting("ab", F2).defect_upper
    assert evaluate(hab, W("bab", F2), F2) == 1
    assert evaluate(hab, W("a^-1", F2), F2) == 0


@pytest.mark.parametrize("word", ["ab", "aab", "abb^-1", "ab^-1", "aba^-1b^-1", "abab^-1"])
def test_homogenization_matches_limit_oracle(F2, word):
    q = homogenized_counting(word, F2)
    for g in enumerate_ball(F2, 4):
        assert evaluate(q, g, F2) == limit_oracle(q.word, g, F2)


def test_measure_defect_examples(F2):
    assert measure_defect(homomorphism([3, -1], F2), F2, 3) == 0
    # exhaustive oracle over ball(4) with naive reduction gives 1
    q = counting("ab", F2)
    assert measure_defect(q, F2, 4) == 1 <= q.defect_upper
    A1 = Alphabet.free("a")
    assert measure_defect(counting("a", A1), A1, 4) == 0


def test_measure_defect_raises_on_wrong_bound(F2):
    bad = counting("ab", F2, defect_upper=Fraction(1, 2))
    with pytest.raises(CertificationError):
        measure_defect(bad, F2, 3)


def test_record_defect_returns_new_value(F2):
    q = counting("ab", F2)
    q2 = record_defect(q, F2, 3)
    assert q.defect_lower == 0 and q2.defect_lower == 1


def test_defect_monotone_in_radius(F2):
    q = counting("aab", F2)
    values = [measure_defect(q, F2, r) for r in (1, 2, 3, 4)]
    assert values == sorted(values)
    assert values[-1] <= q.defect_upper


def test_vanishes_on_cyclic(F2):
    hab = homogenized_counting("ab", F2)
    assert vanishes_on_cyclic(hab, W("a", F2), F2)
    assert not vanishes_on_cyclic(homomorphism({"a": 1}, F2), W("a", F2), F2)
    assert not vanishes_on_cyclic(hab, W("ab", F2), F2)
    with pytest.raises(PreconditionError):
        vanishes_on_cyclic(counting("ab", F2), W("a", F2), F2)


def test_commutator_restriction(F2):
    rep = restriction_is_zero_on_commutators(homomorphism([1, 1], F2), F2, 6)
    assert rep.max_abs == 0
    hab = homogenized_counting("ab", F2)
    rep = restriction_is_zero_on_commutators(hab, F2, 4)
    # limit oracle over the commutator ball of radius 4 gives 1 at [a,b]
    assert rep.max_abs == 1 and rep.witness == W("aba^-1b^-1", F2)
    assert rep.within_bound


@pytest.mark.parametrize("word", ["ab", "aab", "aba^-1b^-1", "abb"])
def test_lemma_direction_all_radii(F2, word):
    q = homogenized_counting(word, F2)
    for r in (2, 4, 6):
        assert restriction_is_zero_on_commutators(q, F2, r).within_bound


def test_scl_examples(F2):
    fam = [homogenized_counting("aba^-1b^-1", F2, defect_upper=6)]
    c = W("aba^-1b^-1", F2)
    assert scl_lower_bound(c, fam, F2).lower == Fraction(1, 12)
    assert scl_lower_bound(IDENTITY, fam, F2).lower == 0
    assert scl_lower_bound(power(c, 2, F2), fam, F2).lower == Fraction(1, 6)
    with pytest.raises(InputError):
        scl_lower_bound(W("a", F2), fam, F2)


def test_scl_skips_homomorphisms(F2):
    fam = [homomorphism([1, 0], F2), homogenized_counting("ab", F2)]
    b = scl_lower_bound(W("aba^-1b^-1", F2), fam, F2)
    assert b.witness is fam[1] and b.lower == Fraction(1, 8)


@pytest.mark.parametrize("alpha", ["F2", "Z3Z3", "Z2Z2"])
def test_homogeneity(alpha, request):
    A = request.getfixturevalue(alpha)
    for word in ("ab", "aab", "abb"):
        q = homogenized_counting(word, A)
        for g in enumerate_ball(A, 4):
            v = evaluate(q, g, A)
            for n in range(-3, 4):
                assert evaluate(q, power(g, n, A), A) == n * v


@pytest.mark.parametrize("alpha", ["F2", "Z3Z3"])
def test_conjugacy_invariance(alpha, request):
    A = request.getfixturevalue(alpha)
    q = homogenized_counting("aab", A)
    rng = random.Random(11)
    for _ in range(1000):
        g = random_ball_word(A, 6, rng)
        h = random_ball_word(A, 6, rng)
        assert evaluate(q, conjugate(g, h, A), A) == evaluate(q, g, A)


def test_convergence_bound(F2):
    rng = random.Random(2)
    for word in ("ab", "aab", "aba^-1b^-1"):
        q = counting(word, F2)
        qh = homogenize(q, F2)
        for _ in range(100):
            g = random_ball_word(F2, 5, rng)
            for N in (8, 16, 32):
                err = abs(evaluate(qh, g, F2) - Fraction(evaluate(q, power(g, N, F2), F2), N))
                assert err <= q.defect_upper / N


def test_torsion_counting_is_empirical(Z3Z3):
    q = counting("ab", Z3Z3)
    assert q.empirical and q.defect_upper == 2 * q.defect_lower > 0
    assert homogenize(q, Z3Z3).empirical


def test_hom_rejects_torsion_weight(Z3Z3):
    with pytest.raises(InputError):
        homomorphism({"a": 1}, Z3Z3)


def test_linear_combination(F2):
    q = linear_combination([(2, homogenized_counting("ab", F2)),
                            (Fraction(-1, 2), homomorphism([0, 1], F2))])
    assert q.homogeneous
    assert q.defect_upper == 2 * 4
    assert evaluate(q, W("ab", F2), F2) == 2 - Fraction(1, 2)


def test_json_round_trip(F2):
    qs = [homomorphism({"a": Fraction(1, 3)}, F2), counting("ab", F2),
          homogenized_counting("aab^-1", F2),
          linear_combination([(1, counting("ab", F2)), (-2, homogenized_counting("ab", F2))])]
    for q in qs:
        text = json.dumps(to_json(q, F2))
        back = from_json(json.loads(text), F2)
        assert back == q
    d = to_json(qs[1], F2)
    assert d == {"kind": "count", "word": "ab", "defect_upper": "2/1"}


def test_json_errors(F2):
    with pytest.raises(InputError):
        from_json({"kind": "nope"}, F2)
    with pytest.raises(InputError):
        from_json({"kind": "count"}, F2)
    with pytest.raises(InputError):
        from_json({"kind": "count", "word": "1"}, F2)
