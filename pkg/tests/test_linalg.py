"""Exact linear algebra and the certified generalized eigensolver."""

import random
from fractions import Fraction

import pytest

from qc7.errors import StructuralError
from qc7.linalg import (ExactMatrix, charpoly, det, generalized_eigen,
                        is_positive_definite, isolate_real_roots,
                        krylov_minpoly, ldlt, nullspace, poly_eval, rank,
                        rational_roots, solve, sturm_count)


def rand_sym(rng, n, bound=5):
    m = [[Fraction(rng.randint(-bound, bound)) for _ in range(n)]
         for _ in range(n)]
    for i in range(n):
        for j in range(i):
            m[i][j] = m[j][i]
    return ExactMatrix(m)


def test_ldlt_detects_definite():
    g = ExactMatrix([[Fraction(1, 8), 0], [0, Fraction(1, 8)]])
    assert is_positive_definite(g)
    assert not is_positive_definite(ExactMatrix([[1, 2], [2, 1]]))
    L, D = ldlt(ExactMatrix([[4, 2], [2, 3]]))
    assert D == [Fraction(4), Fraction(2)]
    assert L.matmul(ExactMatrix([[D[0], 0], [0, D[1]]])).matmul(
        L.transpose()) == ExactMatrix([[4, 2], [2, 3]])


def test_rank_nullspace_solve_det():
    m = ExactMatrix([[1, 1], [1, 1]])
    assert rank(m) == 1
    ns = nullspace(m)
    assert len(ns) == 1 and ns[0][0] == -ns[0][1]
    assert det(ExactMatrix([[1, 2], [3, 4]])) == -2
    sol = solve(ExactMatrix([[2, 0], [0, 4]]), [[1, 1]])
    assert sol == [[Fraction(1, 2), Fraction(1, 4)]]


def test_charpoly_and_roots():
    m = ExactMatrix([[2, 0], [0, 3]])
    cp = charpoly(m)
    assert poly_eval(cp, Fraction(2)) == 0
    assert poly_eval(cp, Fraction(3)) == 0
    assert rational_roots(cp) == [Fraction(2), Fraction(3)]


def test_sturm_isolation_counts():
    # (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
    coeffs = [Fraction(6), Fraction(-7), Fraction(0), Fraction(1)]
    assert sturm_count(coeffs, Fraction(-10), Fraction(10)) == 3
    ivals = isolate_real_roots(coeffs)
    assert len(ivals) == 3
    roots = sorted(Fraction(-3) if lo <= -3 <= hi else
                   (Fraction(1) if lo <= 1 <= hi else Fraction(2))
                   for lo, hi in ivals)
    assert roots == [Fraction(-3), Fraction(1), Fraction(2)]


def test_diagonal_pencil_eigen_exactly_four():
    # the degree-1 Gram/stiffness values of the sphere model
    A = ExactMatrix([[Fraction(1, 2) if i == j else 0 for j in range(8)]
                     for i in range(8)])
    G = ExactMatrix([[Fraction(1, 8) if i == j else 0 for j in range(8)]
                     for i in range(8)])
    evs = generalized_eigen(A, G)
    assert len(evs) == 1
    assert evs[0].value == 4 and evs[0].certified and evs[0].multiplicity == 8


def test_identity_pencil():
    G = ExactMatrix([[Fraction(1, 8) if i == j else 0 for j in range(8)]
                     for i in range(8)])
    evs = generalized_eigen(G, G)
    assert len(evs) == 1 and evs[0].value == 1 and evs[0].multiplicity == 8


def test_random_pencil_matches_sturm_oracle():
    rng = random.Random(3)
    for _ in range(3):
        A = rand_sym(rng, 5)
        I5 = ExactMatrix.identity(5)
        evs = generalized_eigen(A, I5, tol=1e-9)
        cp = charpoly(A)
        ivals = isolate_real_roots(cp)
        approx = sorted((float(lo) + float(hi)) / 2 for lo, hi in ivals)
        got = sorted(float(e.value) for e in evs for _ in range(e.multiplicity))
        # oracle intervals isolate distinct roots; compare the distinct values
        distinct = sorted(set(round(v, 6) for v in got))
        assert len(distinct) == len(approx)
        for a, b in zip(distinct, approx):
            assert abs(a - b) < 1e-6


def test_congruence_invariance():
    rng = random.Random(4)
    A = rand_sym(rng, 4)
    G = ExactMatrix([[2 if i == j else (1 if abs(i - j) == 1 else 0)
                      for j in range(4)] for i in range(4)])
    assert is_positive_definite(G)
    M = ExactMatrix([[1, 1, 0, 0], [0, 1, 0, 2], [0, 0, 1, 0], [0, 0, 0, 1]])
    A2 = M.transpose().matmul(A).matmul(M)
    G2 = M.transpose().matmul(G).matmul(M)
    ev1 = generalized_eigen(A, G, tol=1e-9)
    ev2 = generalized_eigen(A2, G2, tol=1e-9)
    v1 = sorted(float(e.value) for e in ev1 for _ in range(e.multiplicity))
    v2 = sorted(float(e.value) for e in ev2 for _ in range(e.multiplicity))
    assert len(v1) == len(v2)
    for a, b in zip(v1, v2):
        assert abs(a - b) < 1e-8


def test_non_definite_g_rejected():
    A = ExactMatrix.identity(2)
    G = ExactMatrix([[1, 2], [2, 1]])
    with pytest.raises(StructuralError):
        generalized_eigen(A, G)


def test_krylov_minpoly_annihilates():
    rng = random.Random(5)
    A = rand_sym(rng, 4)
    mp = krylov_minpoly(A)
    # evaluate p(A) v for a probe vector
    v = [Fraction(1), Fraction(2), Fraction(-1), Fraction(3)]
    acc = [Fraction(0)] * 4
    power = list(v)
    for c in mp:
        acc = [a + c * p for a, p in zip(acc, power)]
        power = A.matvec(power)
    assert all(a == 0 for a in acc)
