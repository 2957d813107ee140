"""PolyScalar layer: reduction, integration against the independent
Dirichlet-moment oracle, point sampling, parsing."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qc7.errors import StructuralError
from qc7.poly import (PolyScalar, RationalPoint, integrate_moment_oracle,
                      integrate_product_sphere, parse_poly, random_poly,
                      sample_rational_points, stereographic_point)

X = [PolyScalar.var(i) for i in range(8)]


def test_sphere_relation_reduces_to_one():
    s = sum((x * x for x in X), PolyScalar.zero())
    assert s.reduce_sphere() == PolyScalar.one()


def test_reduce_example_x8sq_x1():
    p = (X[7] * X[7] * X[0]).reduce_sphere()
    expect = X[0] - sum((X[0] * X[i] * X[i] for i in range(7)),
                        PolyScalar.zero())
    assert p == expect.reduce_sphere()
    assert p.reduced


def test_reduce_idempotent_random():
    rng = random.Random(1)
    for _ in range(50):
        p = random_poly(rng, 6, 7)
        q = p.reduce_sphere()
        assert q.reduce_sphere() == q


def test_integration_against_dirichlet_oracle():
    rng = random.Random(2)
    assert (X[0] ** 2).integrate_sphere() == Fraction(1, 8)
    assert (X[0] ** 4).integrate_sphere() == Fraction(3, 80)
    assert (X[0] ** 2 * X[1] ** 2).integrate_sphere() == Fraction(1, 80)
    assert (X[0] * X[1] ** 3).integrate_sphere() == 0
    for _ in range(40):
        exps = tuple(rng.randint(0, 3) for _ in range(8))
        mono = PolyScalar.monomial(exps)
        assert mono.integrate_sphere() == integrate_moment_oracle(exps)


def test_integration_invariants():
    assert PolyScalar.one().integrate_sphere() == 1
    rng = random.Random(3)
    for _ in range(20):
        p = random_poly(rng, 5, 6)
        assert p.integrate_sphere() == p.reduce_sphere().integrate_sphere()
        # coordinate-swap symmetry: swap x1 <-> x3
        swapped = PolyScalar.from_terms({
            (e[2], e[1], e[0]) + e[3:]: c for e, c in p.terms()})
        assert p.integrate_sphere() == swapped.integrate_sphere()
        if not p.reduce_sphere().is_zero():
            assert integrate_product_sphere(p, p) > 0


def test_integrate_product_matches_explicit_product():
    rng = random.Random(4)
    for _ in range(20):
        a, b = random_poly(rng, 4, 5), random_poly(rng, 4, 5)
        assert integrate_product_sphere(a, b) == (a * b).integrate_sphere()


def test_sample_points_exactly_on_sphere():
    pts = sample_rational_points(7, 10)
    assert len(pts) == 10
    for p in pts:
        assert sum(c * c for c in p) == 1
    assert sample_rational_points(7, 10) == pts  # deterministic


def test_stereographic_examples():
    p = stereographic_point([1, 0, 0, 0, 0, 0, 0])
    assert tuple(p) == (1, 0, 0, 0, 0, 0, 0, 0)
    p = stereographic_point([0] * 7)
    assert tuple(p) == (0, 0, 0, 0, 0, 0, 0, -1)


def test_rational_point_invariant():
    with pytest.raises(StructuralError):
        RationalPoint([1, 1, 0, 0, 0, 0, 0, 0])


def test_parse_poly():
    p = parse_poly("x1^2*x2 - 3*x5/4 + 2")
    q = X[0] ** 2 * X[1] - X[4] * Fraction(3, 4) + 2
    assert p == q
    assert parse_poly("(x1 + x2)**2") == (X[0] + X[1]) ** 2
    with pytest.raises(StructuralError):
        parse_poly("x9 + 1")
    with pytest.raises(StructuralError):
        parse_poly("")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(
    st.tuples(*[st.integers(0, 3)] * 8),
    st.fractions(max_denominator=9)), min_size=1, max_size=6))
def test_eval_is_ring_homomorphism(term_list):
    p = PolyScalar.from_terms({e: c for e, c in term_list})
    q = X[0] + X[3] * 2
    pt = [Fraction(1, 2), Fraction(-1, 3), 0, Fraction(2, 5), 0, 0, 0, 1]
    assert (p * q).eval(pt) == p.eval(pt) * q.eval(pt)
    assert (p + q).eval(pt) == p.eval(pt) + q.eval(pt)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_sampler_points_always_unit(seed):
    (pt,) = sample_rational_points(seed, 1)
    assert sum(c * c for c in pt) == 1
