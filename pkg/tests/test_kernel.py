"""Kernel backends: correctness of the primitive ops and bit-identical
parity between the pure and compiled implementations."""

import random
from fractions import Fraction

import pytest

from qc7 import _kernel_pure as KP
from qc7 import kernel

try:
    from qc7 import _kernel_c as KC
except ImportError:
    KC = None

needs_compiled = pytest.mark.skipif(KC is None, reason="compiled kernel absent")


def rand_terms(rng, nterms=6, maxexp=3, cap=20):
    return {KP.pack(tuple(rng.randint(0, maxexp) for _ in range(8))):
            rng.randint(-cap, cap) for _ in range(nterms)}


def test_pack_unpack_roundtrip():
    rng = random.Random(0)
    for _ in range(50):
        exps = tuple(rng.randint(0, 127) for _ in range(8))
        assert KP.unpack(KP.pack(exps)) == exps


def test_normalize_canonical():
    t, d = KP.normalize({0: 4, 3: 0, 7: -8}, -12)
    assert d > 0
    assert 3 not in t
    assert t == {0: -1, 7: 2} and d == 3


def test_mul_monomials_add_keys():
    a = {KP.pack((1, 0, 0, 0, 0, 0, 0, 0)): 1}
    b = {KP.pack((0, 2, 0, 0, 0, 0, 0, 0)): 3}
    t, d = KP.kmul(a, 1, b, 1)
    assert t == {KP.pack((1, 2, 0, 0, 0, 0, 0, 0)): 3} and d == 1


def test_reduce_sphere_relation():
    # x1^2 + ... + x8^2 -> 1
    t = {KP.pack(tuple(2 if i == j else 0 for i in range(8))): 1
         for j in range(8)}
    red, den = KP.kreduce_sphere(t, 1)
    assert red == {0: 1} and den == 1


def test_reduce_idempotent():
    rng = random.Random(3)
    for _ in range(50):
        t = rand_terms(rng, maxexp=4)
        once = KP.kreduce_sphere(t, 5)
        twice = KP.kreduce_sphere(*once)
        assert once == twice


def test_reduce_preserves_point_values():
    rng = random.Random(4)
    # a rational point on the sphere with common denominator
    nums, pden = (3, 4, 0, 0, 0, 0, 0, 0), 5
    for _ in range(20):
        t = rand_terms(rng, maxexp=4)
        before = KP.keval(t, 7, nums, pden)
        red, d = KP.kreduce_sphere(t, 7)
        after = KP.keval(red, d, nums, pden)
        assert before == after


def test_integrate_known_moments():
    x1sq = {KP.pack((2, 0, 0, 0, 0, 0, 0, 0)): 1}
    assert KP.kintegrate(x1sq, 1) == (1, 8)
    x14 = {KP.pack((4, 0, 0, 0, 0, 0, 0, 0)): 1}
    assert KP.kintegrate(x14, 1) == (3, 80)
    mixed = {KP.pack((2, 2, 0, 0, 0, 0, 0, 0)): 1}
    assert KP.kintegrate(mixed, 1) == (1, 80)
    odd = {KP.pack((1, 3, 0, 0, 0, 0, 0, 0)): 1}
    assert KP.kintegrate(odd, 1) == (0, 1)


def test_mul_integrate_matches_mul_then_integrate():
    rng = random.Random(5)
    for _ in range(30):
        a, b = rand_terms(rng), rand_terms(rng)
        da, db = rng.randint(1, 9), rng.randint(1, 9)
        direct = KP.kintegrate(*KP.kmul(a, da, b, db))
        fused = KP.kmul_integrate(a, da, b, db)
        assert direct == fused


@needs_compiled
def test_backend_parity():
    rng = random.Random(6)
    for _ in range(100):
        a, b = rand_terms(rng, maxexp=4), rand_terms(rng, maxexp=4)
        da, db = rng.randint(1, 12), rng.randint(1, 12)
        assert KP.kadd(a, da, b, db) == KC.kadd(dict(a), da, dict(b), db)
        assert KP.kmul(a, da, b, db) == KC.kmul(dict(a), da, dict(b), db)
        assert KP.kreduce_sphere(a, da) == KC.kreduce_sphere(dict(a), da)
        assert KP.kintegrate(a, da) == KC.kintegrate(dict(a), da)
        assert (KP.kmul_integrate(a, da, b, db)
                == KC.kmul_integrate(dict(a), da, dict(b), db))
        for var in range(8):
            assert KP.kdiff(a, da, var) == KC.kdiff(dict(a), da, var)
        nums = tuple(rng.randint(-5, 5) for _ in range(8))
        pden = rng.randint(1, 7)
        assert KP.keval(a, da, nums, pden) == KC.keval(dict(a), da, nums, pden)


def test_selected_backend_exposed():
    assert kernel.backend_name() in ("pure", "compiled")
