"""Model structure validation, connection properties, curvature constants,
volume density, torsion invariants, and the induced triple."""

from fractions import Fraction

import pytest

from qc7.curvature import (PointCurvature, curvature_at, induced_triple,
                           riemannian_ricci, torsion_data, volume_density)
from qc7.errors import StructuralError
from qc7.fields import lie_bracket
from qc7.models import build_heisenberg7, build_sphere7, validate_model
from qc7.poly import PolyScalar, RationalPoint
from qc7.quatalg import validate_triple


@pytest.fixture(scope="module")
def sphere():
    return build_sphere7()


@pytest.fixture(scope="module")
def heis():
    return build_heisenberg7()


@pytest.fixture(scope="module")
def sphere_pts(sphere):
    return sphere.sample_points(20260807, 10)


def test_sphere_validation_all_pass(sphere, sphere_pts):
    report = validate_model(sphere, sphere_pts)
    assert all(e["pass"] for e in report), \
        [e["name"] for e in report if not e["pass"]]


def test_heisenberg_validation_all_pass(heis):
    report = validate_model(heis, heis.sample_points(3, 10))
    assert all(e["pass"] for e in report)


def test_reeb_field_value_at_pole(sphere):
    p0 = RationalPoint([1, 0, 0, 0, 0, 0, 0, 0])
    assert sphere.xi[0].eval(p0) == (0, 1, 0, 0, 0, 0, 0, 0)


def test_eta_xi_duality_at_points(sphere, sphere_pts):
    for pt in sphere_pts:
        for s in range(3):
            for k in range(3):
                v = sphere.eta_of(s, sphere.xi[k]).eval(pt)
                assert v == (1 if s == k else 0)


def test_compatibility_at_random_horizontal_vectors(sphere, sphere_pts):
    from qc7.fields import d_one_form
    import random
    rng = random.Random(0)
    d_etas = [d_one_form(sphere.eta[s]) for s in range(3)]
    for pt in sphere_pts[:4]:
        hp = sphere.hproj.eval(pt)
        for _ in range(2):
            u = [Fraction(rng.randint(-4, 4)) for _ in range(8)]
            v = [Fraction(rng.randint(-4, 4)) for _ in range(8)]
            X = [sum(hp[a][b] * u[b] for b in range(8)) for a in range(8)]
            Y = [sum(hp[a][b] * v[b] for b in range(8)) for a in range(8)]
            for s in range(3):
                de = d_etas[s].eval(pt)
                io = sphere.iops[s].eval(pt)
                lhs = 2 * sum((io[a][b] * X[b]) * Y[a]
                              for a in range(8) for b in range(8))
                rhs = sum(de[a][b] * X[a] * Y[b]
                          for a in range(8) for b in range(8))
                assert lhs == rhs


def test_heisenberg_frame_brackets_close_on_torsion(heis):
    hframe = heis._cache["hframe"]
    for a in range(4):
        for b in range(4):
            br = lie_bracket(hframe[a], hframe[b])
            tv = heis.torsion_vec(hframe[a], hframe[b])
            for c_br, c_tv in zip(br, tv):
                assert heis.simplify(c_br + c_tv).is_zero()


def test_scalar_curvature_and_ricci(sphere, sphere_pts):
    pc = curvature_at(sphere, sphere_pts[0])
    assert pc.scalar_s() == 2
    fr = pc.frame
    ric = pc.ricci()
    for n2 in range(8):
        for r2 in range(8):
            lhs = sum(fr.hproj[n][n2] * ric[n][r] * fr.hproj[r][r2]
                      for n in range(8) for r in range(8)
                      if fr.hproj[n][n2] and ric[n][r] and fr.hproj[r][r2])
            # Pi g Pi = Pi pointwise for the ambient identity metric
            assert lhs == 12 * fr.hproj[n2][r2]


def test_scalar_trace_consistency(sphere, sphere_pts):
    # 24 S equals the direct double contraction of the curvature tensor
    pc = curvature_at(sphere, sphere_pts[1])
    fr = pc.frame
    c = fr.cometric_h
    acc = Fraction(0)
    for m in range(8):
        for n in range(8):
            for r in range(8):
                for sg in range(8):
                    v = pc._R[m][n][r][sg]
                    if v and c[m][sg] and c[n][r]:
                        acc += c[m][sg] * c[n][r] * v
    assert acc == 24 * pc.scalar_s()


def test_reeb_curvature_vanishes(sphere, sphere_pts):
    pc = curvature_at(sphere, sphere_pts[0])
    for i in range(3):
        assert pc.reeb_curvature_residual(i) == 0


def test_rho_vanishes_on_reeb(sphere, sphere_pts):
    pc = curvature_at(sphere, sphere_pts[0])
    for s in range(3):
        assert all(v == 0 for v in pc.rho(s))


def test_riemannian_einstein(sphere, sphere_pts):
    pt = sphere_pts[0]
    ric = riemannian_ricci(sphere, pt)
    tp = sphere.tproj.eval(pt)
    for n2 in range(8):
        for r2 in range(8):
            lhs = sum(tp[n][n2] * ric[n][r] * tp[r][r2]
                      for n in range(8) for r in range(8)
                      if tp[n][n2] and ric[n][r] and tp[r][r2])
            rhs = 6 * sum(tp[n][n2] * tp[n][r2] for n in range(8)
                          if tp[n][n2] and tp[n][r2])
            assert lhs == rhs
    # unit vertical direction and mixed terms
    xi1 = [c.eval(pt) for c in sphere.xi[0]]
    q = sum(xi1[n] * ric[n][r] * xi1[r] for n in range(8) for r in range(8))
    assert q == 6


def test_heisenberg_flat(heis):
    pt = heis.sample_points(5, 1)[0]
    pc = curvature_at(heis, pt)
    assert all(pc._R[a][b][c][d] == 0 for a in range(7) for b in range(7)
               for c in range(7) for d in range(7))
    assert pc.scalar_s() == 0


def test_volume_density_constant_two(sphere, sphere_pts):
    vd = volume_density(sphere, sphere_pts[:3])
    assert vd["square"] == 4
    assert vd["sign"] == 1
    assert vd["value"] == 2


def test_torsion_data_zero_invariants(sphere, heis):
    for model in (sphere, heis):
        td = torsion_data(model)
        assert td["T0"].is_zero()
        assert td["U"].is_zero()
    # vertical torsion on the sphere: T(xi_i, xi_j) = -2 xi_k
    td = torsion_data(sphere)
    tv = td["vertical"][(0, 1)]
    expect = sphere.xi[2].scale(-2)
    for a, b in zip(tv, expect):
        assert sphere.simplify(a - b).is_zero()


def test_vertical_commutator_pairs_with_df(sphere, sphere_pts):
    # D2 f(xi_k, xi_j) - D2 f(xi_j, xi_k) = -2 df(xi_i) for cyclic (i, j, k)
    from qc7.scalarops import jet
    import random
    rng = random.Random(1)
    from qc7.poly import random_poly
    f = random_poly(rng, 3, 6)
    j = jet(sphere, f)
    for i, jj, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        lhs = j.hess_scalar(sphere.xi[k], sphere.xi[jj]) \
            - j.hess_scalar(sphere.xi[jj], sphere.xi[k])
        rhs = j.xi_derivs[i] * (-2)
        assert sphere.simplify(lhs - rhs).is_zero()


def test_induced_triple_at_spec_point(sphere):
    p0 = RationalPoint([Fraction(3, 5), Fraction(4, 5), 0, 0, 0, 0, 0, 0])
    tri = induced_triple(sphere, p0)
    assert all(e["pass"] for e in validate_triple(tri))


def test_induced_triple_rejects_irrational_frame(sphere, sphere_pts):
    # generic stereographic points have no rational orthonormal H-frame
    found_failure = False
    for pt in sphere_pts:
        try:
            induced_triple(sphere, pt)
        except StructuralError:
            found_failure = True
            break
    assert found_failure


def test_corrupt_convention_hook(monkeypatch):
    monkeypatch.setenv("QC7_CORRUPT_CONVENTION", "1")
    bad = build_sphere7()
    report = validate_model(bad, bad.sample_points(1, 2))
    failed = [e["name"] for e in report if not e["pass"]]
    assert "contact-compatibility" in failed
