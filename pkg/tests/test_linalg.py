import random
from fractions import Fraction

from sympy import Matrix

from qforge.linalg import abelian_invariants, format_abelian, matmul, rank, transpose


def dense_to_sparse(M):
    return [{j: v for j, v in enumerate(row) if v} for row in M]


def test_rank_matches_sympy():
    rng = random.Random(0)
    for _ in range(300):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        M = [[rng.choice([0, 0, 0, 1, -1, 2, 5]) for _ in range(c)] for _ in range(r)]
        assert rank(dense_to_sparse(M)) == Matrix(M).rank()


def test_rank_fractions():
    rows = [{0: Fraction(1, 2), 1: Fraction(1, 3)}, {0: 3, 1: 2}]
    assert rank(rows) == 1


def test_matmul_transpose():
    A = {0: {0: 1, 1: 2}, 1: {1: 3}}
    B = {0: {0: 1}, 1: {0: -1, 1: 1}}
    assert matmul(A, B) == {0: {0: -1, 1: 2}, 1: {0: -3, 1: 3}}
    assert transpose(transpose(A)) == A


def test_abelian_invariants_examples():
    assert abelian_invariants([{0: 1, 1: -1}], 2) == (1, [])
    assert abelian_invariants([{0: 2}, {1: 3}], 2) == (0, [6])
    assert abelian_invariants([{0: 4, 1: 6}], 2) == (1, [2])
    assert abelian_invariants([], 3) == (3, [])
    assert abelian_invariants([{0: 2}, {1: 4}], 2) == (0, [2, 4])


def test_abelian_invariants_vs_sympy_smith():
    from sympy.matrices.normalforms import smith_normal_form
    from sympy import ZZ
    rng = random.Random(4)
    for _ in range(100):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        M = [[rng.randint(-4, 4) for _ in range(c)] for _ in range(r)]
        free, tors = abelian_invariants(dense_to_sparse(M), c)
        S = smith_normal_form(Matrix(M), domain=ZZ)
        d = [abs(S[i, i]) for i in range(min(r, c)) if S[i, i] != 0]
        assert free == c - len(d)
        assert sorted(tors) == sorted(x for x in d if x != 1)


def test_format_abelian():
    assert format_abelian(1, []) == "Z"
    assert format_abelian(2, [3]) == "Z^2 + Z/3"
    assert format_abelian(0, []) == "0"
