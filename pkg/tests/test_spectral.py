"""Assembly values, the certified spectrum, the Lichnerowicz chain, the
integral identities, extremal checks, and the Riemannian comparison."""

import random
from fractions import Fraction

import pytest

from qc7.errors import ConfigError, StructuralError
from qc7.models import build_heisenberg7, build_sphere7
from qc7.poly import PolyScalar, random_poly
from qc7.scalarops import jet, p_form
from qc7.spectral import (assemble, certify_eigenfunction,
                          divergence_theorem_residuals, extremal_check,
                          integral_identity_suite, lichnerowicz_k0,
                          monomial_basis, riemannian_comparison, spectrum)

X1 = PolyScalar.var(0)


@pytest.fixture(scope="module")
def sphere():
    return build_sphere7()


@pytest.fixture(scope="module")
def d1(sphere):
    return assemble(sphere, 1)


@pytest.fixture(scope="module")
def d2(sphere):
    return assemble(sphere, 2)


def test_basis_counts():
    assert len(monomial_basis(1)) == 8
    assert len(monomial_basis(2)) == 43


def test_degree_cap():
    with pytest.raises(ConfigError):
        monomial_basis(0)


def test_degree1_matrices(d1):
    n = len(d1.basis)
    assert n == 8
    for i in range(n):
        for j in range(n):
            assert d1.gram[i][j] == (Fraction(1, 8) if i == j else 0)
            assert d1.stiffness_h[i][j] == (Fraction(1, 2) if i == j else 0)
            assert d1.stiffness_v[i][j] == (Fraction(3, 8) if i == j else 0)


def test_cross_assembly(d1, d2):
    assert d1.cross_assembly_residual() == 0
    assert d2.cross_assembly_residual() == 0


def test_degree1_spectrum(d1):
    rep = spectrum(d1)
    assert len(rep.eigen_h) == 1
    lam = rep.eigen_h[0]
    assert lam["value"] == 4 and lam["multiplicity"] == 8 and lam["certified"]
    mu = rep.eigen_g[0]
    assert mu["value"] == 7 and mu["multiplicity"] == 8 and mu["certified"]


def test_degree2_spectrum_smallest_still_four(d2):
    rep = spectrum(d2)
    first = rep.smallest_positive("sub")
    assert first["value"] == 4 and first["multiplicity"] == 8
    assert first["certified"]
    mu = rep.smallest_positive("riemannian")
    assert mu["value"] == 7 and mu["multiplicity"] == 8
    # min-max: nothing below 4 appears when the space grows
    assert all(r["value"] >= 4 for r in rep.eigen_h)
    # every rational eigenvalue is certified by a polynomial identity
    assert all(r["certified"] for r in rep.eigen_h if r["rational"])


def test_eigenfunction_polynomial_certification(sphere):
    for alpha in range(8):
        assert certify_eigenfunction(sphere, PolyScalar.var(alpha),
                                     Fraction(4))
    assert not certify_eigenfunction(sphere, X1, Fraction(5))


def test_lichnerowicz_chain(sphere):
    pts = sphere.sample_points(7, 2)
    k0 = lichnerowicz_k0(sphere, pts)
    assert k0["k0"] == 12 and k0["bound"] == 4
    heis = build_heisenberg7()
    hk0 = lichnerowicz_k0(heis, heis.sample_points(7, 2))
    assert hk0["k0"] == 0 and hk0["degenerate"]


def test_scaled_curvature_scales_k0():
    # pointwise algebra: the form is linear in S when T^0 = 0
    for c in (Fraction(1, 2), Fraction(3), Fraction(7, 5)):
        assert 6 * (2 * c) == c * 12


def test_integral_identities_eigenfunction(sphere):
    led = integral_identity_suite(sphere, X1, eigenvalue=Fraction(4))
    entries = {e["name"]: e for e in led.entries}
    assert not led.failures()
    e = entries["third-trace-ibp"]
    assert e["lhs"] == e["rhs"] == -2
    assert entries["bochner-combination"]["pass"]
    # printed-constant audit on the fourth-order display
    pn = entries["pform-norm-expansion"]
    assert pn["lhs"] == 0 and pn["rhs"] == -576
    # slot-order audit
    sw = entries["mixed-hessian-energy-c-swapped"]
    assert not sw["pass"]
    assert entries["mixed-hessian-energy-c"]["pass"]


def test_integral_identities_random(sphere):
    rng = random.Random(21)
    for _ in range(2):
        f = random_poly(rng, 3, 6)
        led = integral_identity_suite(sphere, f)
        assert not led.failures(), [e["name"] for e in led.failures()]


def test_extremal_case(sphere):
    for alpha in (0, 5):
        ec = extremal_check(sphere, PolyScalar.var(alpha), Fraction(4))
        assert ec["pass"]
        assert ec["sym_minus1_zero"]
        assert ec["p_function_integral"] == 0
        assert ec["hessian_quarter_zero"]
        assert not ec["hessian_k0_third_zero"]
        assert ec["hessian_k0_third_residual_norm2"] == Fraction(9, 2)
    with pytest.raises(StructuralError):
        extremal_check(sphere, X1, Fraction(3))


def test_riemannian_comparison_first_eigenfunction(sphere):
    rc = riemannian_comparison(sphere, X1)
    assert rc["horizontal_energy"] == 4
    assert rc["vertical_energy"] == 3
    assert rc["riemannian_quotient"] == 7
    assert rc["lap_square_quarter"] == 4


def test_riemannian_minmax_degree2(sphere, d2):
    # a certified degree-2 eigenfunction has Riemannian quotient >= 7
    rep = spectrum(d2)
    for rec in rep.eigen_h:
        if rec["value"] == 16 and rec["functions"]:
            rc = riemannian_comparison(sphere, rec["functions"][0])
            assert rc["riemannian_quotient"] >= 7
            break
    else:
        pytest.fail("no certified degree-2 eigenfunction found")


def test_p_function_nonnegative_for_certified(sphere, d2):
    rep = spectrum(d2)
    for rec in rep.eigen_h:
        for f in rec["functions"][:2]:
            pf = p_form(sphere, jet(sphere, f))
            assert pf.p_integral >= 0
            assert pf.consistency_residual == 0


def test_divergence_theorem(sphere):
    residuals = divergence_theorem_residuals(sphere, 5, 5)
    assert all(v == 0 for v in residuals)


def test_assembly_requires_sphere():
    heis = build_heisenberg7()
    with pytest.raises(StructuralError):
        assemble(heis, 1)
