"""Quaternion triples, Casimir decomposition, projection inequalities."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qc7.errors import StructuralError, UnsupportedDimensionError
from qc7.linalg import ExactMatrix
from qc7.quatalg import (BilinearForm, QuatTriple, casimir_apply,
                         component_dims, decompose, norm_inequalities,
                         omega_matrix, omega_pairing, serialize_form,
                         validate_triple)

T = QuatTriple.standard(1)
G = BilinearForm(ExactMatrix.identity(4))


def rand_form(rng):
    return BilinearForm(ExactMatrix(
        [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(4)]
         for _ in range(4)]))


def test_standard_triple_all_axioms():
    assert all(e["pass"] for e in validate_triple(T))


def test_swapped_triple_fails_quaternion_relation():
    bad = QuatTriple(1, T.I1, T.I3, T.I2)
    rep = validate_triple(bad)
    failed = {e["name"] for e in rep if not e["pass"]}
    assert "I1 I2 = I3" in failed


def test_dimension_mismatch_is_structural():
    with pytest.raises(StructuralError):
        QuatTriple(1, ExactMatrix.identity(3), T.I2, T.I3)
    with pytest.raises(StructuralError):
        casimir_apply(T, BilinearForm(ExactMatrix.identity(8)))


def test_casimir_metric_and_omega():
    assert casimir_apply(T, G) == G.scale(3)
    w1 = omega_matrix(T, 0)
    assert casimir_apply(T, w1) == w1.scale(-1)
    d = decompose(T, w1)
    assert d.part3.entries == ExactMatrix.zero(4)
    assert d.partm1 == w1
    assert d.antisym_m1 == w1


def test_decompose_metric():
    d = decompose(T, G)
    assert d.part3 == G
    assert d.partm1.entries == ExactMatrix.zero(4)


def test_component_dims_and_projector_idempotence():
    assert component_dims(T) == (4, 12)
    with pytest.raises(UnsupportedDimensionError):
        component_dims(QuatTriple.standard(2))


def test_omegas_live_in_minus_one():
    for s in range(3):
        w = omega_matrix(T, s)
        d = decompose(T, w)
        assert d.part3.entries == ExactMatrix.zero(4)


def test_norm_inequality_equality_cases():
    (l1, r1), _ = norm_inequalities(T, omega_matrix(T, 0))
    assert l1 == r1 == 4
    _, (l2, r2) = norm_inequalities(T, G)
    assert l2 == r2 == 4


def test_random_forms_full_property_suite():
    rng = random.Random(9)
    for _ in range(100):
        m = rand_form(rng)
        d = decompose(T, m)
        assert (d.part3 + d.partm1) == m
        u = casimir_apply(T, m)
        assert casimir_apply(T, u) == u.scale(2) + m.scale(3)
        assert casimir_apply(T, d.part3) == d.part3.scale(3)
        assert casimir_apply(T, d.partm1) == d.partm1.scale(-1)
        assert d.part3.frobenius(d.partm1) == 0
        total = d.parts_pm[0]
        for piece in d.parts_pm[1:]:
            total = total + piece
        assert total == m
        for a in range(4):
            for b in range(a + 1, 4):
                assert d.parts_pm[a].frobenius(d.parts_pm[b]) == 0
        (l1, r1), (l2, r2) = norm_inequalities(T, m)
        assert l1 >= r1 and l2 >= r2


def test_symmetric_part3_scalar_n1():
    rng = random.Random(10)
    for _ in range(30):
        m = rand_form(rng).symmetric_part()
        d = decompose(T, m)
        want = BilinearForm(ExactMatrix.identity(4).scale(m.trace() / 4))
        assert d.part3.symmetric_part() == want


def test_general_n_block_triple():
    t2 = QuatTriple.standard(2)
    assert all(e["pass"] for e in validate_triple(t2))
    g8 = BilinearForm(ExactMatrix.identity(8))
    assert casimir_apply(t2, g8) == g8.scale(3)


def test_omega_pairing_convention():
    # g(Psi, omega_s) = sum_a Psi(e_a, I_s e_a); for Psi = omega_1 this is 4
    assert omega_pairing(T, omega_matrix(T, 0), 0) == 4


def test_serialize_form_pq_strings():
    rows = serialize_form(BilinearForm(ExactMatrix(
        [[Fraction(1, 2), 0, 0, 0], [0, 1, 0, 0],
         [0, 0, 1, 0], [0, 0, 0, 1]])))
    assert rows[0][0] == "1/2" and rows[1][1] == "1"


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(max_denominator=6), min_size=16, max_size=16))
def test_decomposition_reconstruction_property(vals):
    m = BilinearForm(ExactMatrix([vals[4 * i: 4 * i + 4] for i in range(4)]))
    d = decompose(T, m)
    assert (d.part3 + d.partm1) == m
    assert d.sym_m1.entries + d.antisym_m1.entries == d.partm1.entries
