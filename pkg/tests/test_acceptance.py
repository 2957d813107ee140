"""Acceptance criteria.

One test per criterion, each printing a single PASS/FAIL line with its
runtime.  Every numeric assertion is an exact rational comparison; the only
tolerances anywhere are the stated runtime budgets.
"""

import json
import random
import time
from fractions import Fraction

import pytest

from qc7.config import RunConfig
from qc7.curvature import PointCurvature, curvature_at, riemannian_ricci, \
    torsion_data, volume_density
from qc7.linalg import ExactMatrix
from qc7.models import build_heisenberg7, build_sphere7, validate_model
from qc7.poly import PolyScalar, integrate_product_sphere, random_poly
from qc7.quatalg import (BilinearForm, QuatTriple, casimir_apply,
                         component_dims, decompose, norm_inequalities,
                         validate_triple)
from qc7.report import full_report, to_json
from qc7.scalarops import jet, p_form, ricci_identity_suite
from qc7.spectral import (assemble, certify_eigenfunction,
                          divergence_theorem_residuals, extremal_check,
                          integral_identity_suite, lichnerowicz_k0,
                          riemannian_comparison, spectrum)

SEED = 20260807


@pytest.fixture(scope="module")
def sphere():
    return build_sphere7()


@pytest.fixture(scope="module")
def heis():
    return build_heisenberg7()


@pytest.fixture(scope="module")
def sphere_pts(sphere):
    return sphere.sample_points(SEED, 10)


def _announce(num, label, ok, t0, limit=None):
    dt = time.monotonic() - t0
    line = "criterion %2d [%s]: %s (%.1f s%s)" % (
        num, label, "PASS" if ok else "FAIL", dt,
        ", limit %ds" % limit if limit else "")
    print(line)
    assert ok, line
    if limit is not None:
        assert dt < limit, "runtime limit exceeded: %s" % line


def test_criterion_01_structure_axioms(sphere, heis, sphere_pts):
    t0 = time.monotonic()
    rep_s = validate_model(sphere, sphere_pts)          # >= 10 points
    rep_h = validate_model(heis, heis.sample_points(SEED, 3))
    ok = all(e["pass"] for e in rep_s) and all(e["pass"] for e in rep_h)
    tri = QuatTriple.standard(1)
    ok = ok and all(e["pass"] for e in validate_triple(tri))
    _announce(1, "structure axioms", ok, t0, limit=30)


def test_criterion_02_curvature_constants(sphere, sphere_pts):
    t0 = time.monotonic()
    ok = True
    for pt in sphere_pts[:4]:
        pc = PointCurvature(sphere, pt)
        sphere._cache[("pointcurv", pt)] = pc
        fr = pc.frame
        ok = ok and pc.scalar_s() == 2
        ric = pc.ricci()
        for n2 in range(8):
            for r2 in range(8):
                lhs = sum(fr.hproj[n][n2] * ric[n][r] * fr.hproj[r][r2]
                          for n in range(8) for r in range(8)
                          if fr.hproj[n][n2] and ric[n][r] and fr.hproj[r][r2])
                ok = ok and lhs == 12 * fr.hproj[n2][r2]
        for s in range(3):
            Z = pc.zeta(s)
            for n2 in range(8):
                for r2 in range(8):
                    lhs = sum(fr.hproj[n][n2] * Z[n][r] * fr.iops[s][r][r2]
                              for n in range(8) for r in range(8)
                              if fr.hproj[n][n2] and Z[n][r]
                              and fr.iops[s][r][r2])
                    ok = ok and lhs == fr.hproj[n2][r2]
        ok = ok and all(pc.reeb_curvature_residual(i) == 0 for i in range(3))
        ricg = riemannian_ricci(sphere, pt)
        tp = sphere.tproj.eval(pt)
        for n2 in range(8):
            for r2 in range(8):
                lhs = sum(tp[n][n2] * ricg[n][r] * tp[r][r2]
                          for n in range(8) for r in range(8)
                          if tp[n][n2] and ricg[n][r] and tp[r][r2])
                ok = ok and lhs == 6 * tp[n2][r2]
    _announce(2, "curvature constants S=2, Ric=12g, zeta, R(xi,.)=0,"
              " Ric^g=6g", ok, t0, limit=120)


def test_criterion_03_ricci_identity_suite(sphere, heis, sphere_pts):
    t0 = time.monotonic()
    ok = True
    pts = sphere_pts[:2]
    rng = random.Random(SEED)
    funcs = [PolyScalar.var(0)] + [random_poly(rng, 4, 7) for _ in range(19)]
    for i, f in enumerate(funcs):
        rep = ricci_identity_suite(sphere, jet(sphere, f), pts,
                                   rng=random.Random(i))
        ok = ok and all(e["pass"] for e in rep)
    hpts = heis.sample_points(SEED, 2)
    hfuncs = [random_poly(rng, 4, 7, nvars=7) for _ in range(20)]
    for i, f in enumerate(hfuncs):
        rep = ricci_identity_suite(heis, jet(heis, f), hpts,
                                   rng=random.Random(i))
        ok = ok and all(e["pass"] for e in rep)
    _announce(3, "second/third-order identity suite, 20+20 random"
              " quartics", ok, t0, limit=120)


def test_criterion_04_integral_machinery(sphere):
    t0 = time.monotonic()
    ok = all(v == 0 for v in divergence_theorem_residuals(sphere, SEED, 20))
    rng = random.Random(SEED + 1)
    for _ in range(20):
        f = random_poly(rng, 4, 6)
        j = jet(sphere, f)
        g1 = j.third_trace()
        lhs = Fraction(0)
        for a, b in zip(j.grad_h, g1):
            if not (a.is_zero() or b.is_zero()):
                lhs += integrate_product_sphere(a, b)
        rhs = -integrate_product_sphere(j.sublap, j.sublap)
        ok = ok and lhs == rhs
    for f in (PolyScalar.var(0), random_poly(rng, 3, 5),
              random_poly(rng, 3, 5)):
        pf = p_form(sphere, jet(sphere, f))
        ok = ok and pf.consistency_residual == 0
    _announce(4, "divergence theorem, gradient-contracted third trace,"
              " int f Cf = -int P_f(grad f)", ok, t0)


def test_criterion_05_sharp_eigenvalue(sphere):
    t0 = time.monotonic()
    ok = all(certify_eigenfunction(sphere, PolyScalar.var(a), Fraction(4))
             for a in range(8))
    problem = assemble(sphere, 2)
    rep = spectrum(problem)
    lam1 = rep.smallest_positive("sub")
    mu1 = rep.smallest_positive("riemannian")
    ok = ok and lam1["value"] == 4 and lam1["multiplicity"] == 8 \
        and lam1["certified"]
    ok = ok and mu1["value"] == 7 and mu1["multiplicity"] == 8
    ok = ok and problem.cross_assembly_residual() == 0
    _announce(5, "lap x_a = 4 x_a certified; degree-2 Ritz: lambda1 = 4"
              " (x8), mu1 = 7 (x8)", ok, t0, limit=300)


@pytest.fixture(scope="module")
def degree2_spectrum(sphere):
    problem = assemble(sphere, 2)
    return spectrum(problem)


def test_criterion_06_lichnerowicz_chain(sphere, sphere_pts, degree2_spectrum):
    t0 = time.monotonic()
    k0 = lichnerowicz_k0(sphere, sphere_pts[:2])
    ok = k0["k0"] == 12 and k0["bound"] == 4
    lam1 = degree2_spectrum.smallest_positive("sub")
    ok = ok and k0["bound"] == lam1["value"]
    for rec in degree2_spectrum.eigen_h:
        for f in rec["functions"]:
            pf = p_form(sphere, jet(sphere, f))
            ok = ok and pf.p_integral >= 0
    _announce(6, "k0 = 12, bound 4 = lambda1; -int P_f(grad f) >= 0 for"
              " every certified eigenfunction", ok, t0)


def test_criterion_07_first_eigenfunction_numerology(sphere):
    t0 = time.monotonic()
    ok = True
    for a in range(8):
        f = PolyScalar.var(a)
        rc = riemannian_comparison(sphere, f)
        # exact ratios against int f^2, i.e. the normalized statements
        ok = ok and rc["l2"] == Fraction(1, 8)
        ok = ok and rc["horizontal_energy"] == 4
        ok = ok and rc["lap_square_quarter"] == 4
        ok = ok and rc["vertical_energy"] == 3
        ok = ok and rc["riemannian_quotient"] == 7
    _announce(7, "normalized first eigenfunctions: energies 4 = (1/4) int"
              " (lap f)^2, vertical 3, quotient 7", ok, t0)


def test_criterion_08_extremal_case(sphere):
    t0 = time.monotonic()
    ok = True
    for a in (0, 3, 7):
        ec = extremal_check(sphere, PolyScalar.var(a), Fraction(4))
        ok = ok and ec["pass"] and ec["hessian_quarter_zero"]
        ok = ok and not ec["hessian_k0_third_zero"]
        ok = ok and ec["hessian_k0_third_residual_norm2"] == Fraction(9, 2)
    _announce(8, "extremal Hessian with coefficient lambda/4 exact;"
              " k0/3 variant recorded, not asserted", ok, t0)


def test_criterion_09_algebra_suite(sphere):
    t0 = time.monotonic()
    t = QuatTriple.standard(1)
    ok = component_dims(t) == (4, 12)
    rng = random.Random(SEED)
    for _ in range(100):
        m = BilinearForm(ExactMatrix(
            [[Fraction(rng.randint(-9, 9), rng.randint(1, 4))
              for _ in range(4)] for _ in range(4)]))
        d = decompose(t, m)
        ok = ok and (d.part3 + d.partm1) == m
        u = casimir_apply(t, m)
        ok = ok and casimir_apply(t, u) == u.scale(2) + m.scale(3)
        ok = ok and d.part3.frobenius(d.partm1) == 0
        (l1, r1), (l2, r2) = norm_inequalities(t, m)
        ok = ok and l1 >= r1 and l2 >= r2
    # B0 = 0 for n = 1
    for f in (PolyScalar.var(0), random_poly(rng, 3, 5)):
        pf = p_form(sphere, jet(sphere, f))
        ok = ok and pf.B0.is_zero()
    _announce(9, "projector algebra, inequalities on 100 random forms,"
              " dims (4, 12), B0 = 0", ok, t0)


def test_criterion_10_report_integrity():
    t0 = time.monotonic()
    cfg = RunConfig(seed=3, sample_points=3, random_functions=2,
                    spectral_degree=1).validate()
    doc1 = to_json(full_report(cfg))
    doc2 = to_json(full_report(cfg))
    ok = doc1 == doc2
    doc = json.loads(doc1)
    registry = {item["tag"]: item for item in doc["discrepancy_registry"]}
    ok = ok and set(registry) == {"extremal-hessian-coefficient",
                                  "pform-norm-expansion-constants",
                                  "twisted-trace-slot-order"}
    ok = ok and registry["pform-norm-expansion-constants"]["computed"][
        "lhs"] == "0"
    ok = ok and registry["pform-norm-expansion-constants"]["computed"][
        "rhs"] == "-576"
    ok = ok and registry["extremal-hessian-coefficient"]["computed"][
        "k0_third_residual_norm2"] == "9/2"
    sw = registry["twisted-trace-slot-order"]["computed"]
    ok = ok and sw["as_printed"]["residual"] == "0"
    ok = ok and sw["swapped"]["residual"] != "0"
    ok = ok and doc["summary"]["all_must_pass"]
    _announce(10, "byte-identical report, registry carries the three"
              " audited readings with exact values", ok, t0)
