"""Curvature of the Biquard connection at rational points, the Riemannian
curvature of the extended metric, torsion invariants, the contact volume
density, and the quaternion triple induced on a horizontal space.

R(A,B)C = nabla_A nabla_B C - nabla_B nabla_A C - nabla_{[A,B]} C, and
R(A,B,C,D) = g(R(A,B)C, D).  All traces are projector contractions, so
every number here is an exact rational.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import StructuralError
from .fields import lie_bracket
from .linalg import ExactMatrix, det, rref
from .poly import PolyVector


def _jac_eval(field, pt):
    """Jacobian d_lambda W^mu evaluated at pt: rows mu, cols lambda."""
    n = len(field)
    return [[field[m].diff(l).eval(pt) for l in range(n)] for m in range(n)]


def _field_eval(field, pt):
    return [c.eval(pt) for c in field]


class PointFrame:
    """Evaluated model data at one point: projectors, structure matrices,
    and a pointwise covariant derivative for (value, field) arguments."""

    def __init__(self, model, pt, lc=False):
        self.model = model
        self.pt = pt
        self.lc = lc
        d = model.dim
        self.dim = d
        self.hproj = model.hproj.eval(pt)
        self.tproj = model.tproj.eval(pt)
        self.cometric_h = model.cometric_h.eval(pt)
        self.cometric_t = model.cometric_t.eval(pt)
        self.metric = model.metric.eval(pt)
        self.xi = [_field_eval(x, pt) for x in model.xi]
        self.eta = [_field_eval(e, pt) for e in model.eta]
        self.omega = [m.eval(pt) for m in model.omega]
        self.iops = [m.eval(pt) for m in model.iops]
        self.frame = [_field_eval(f, pt) for f in model.frame_fields]
        if model.kind == "sphere7":
            self.pos = list(pt)

    def g(self, u, v):
        return sum((u[a] * self.metric[a][b] * v[b]
                    for a in range(self.dim) for b in range(self.dim)
                    if u[a] and self.metric[a][b] and v[b]), Fraction(0))

    def eta_of(self, s, u):
        return sum((e * x for e, x in zip(self.eta[s], u) if e and x),
                   Fraction(0))

    def omega_of(self, s, u, v):
        M = self.omega[s]
        return sum((u[a] * M[a][b] * v[b]
                    for a in range(self.dim) for b in range(self.dim)
                    if u[a] and M[a][b] and v[b]), Fraction(0))

    def mat_vec(self, M, v):
        return [sum((M[a][b] * v[b] for b in range(self.dim) if M[a][b] and v[b]),
                    Fraction(0)) for a in range(self.dim)]

    def cov_deriv_value(self, xval, wfield):
        """(nabla_X W)(pt) for a tangent value X and tangent field W."""
        pt = self.pt
        jac = _jac_eval(wfield, pt)
        wval = _field_eval(wfield, pt)
        out = [sum((xval[l] * jac[m][l] for l in range(self.dim) if xval[l]),
                   Fraction(0)) for m in range(self.dim)]
        if self.model.kind == "sphere7":
            xw = sum(a * b for a, b in zip(xval, wval))
            if xw:
                out = [o + xw * p for o, p in zip(out, self.pos)]
            if not self.lc:
                a = self._contorsion_value(xval, wval)
                out = [o + c for o, c in zip(out, a)]
            return out
        # flat model: differentiate frame coefficients of W along X
        res = [Fraction(0)] * 7
        hframe = self.model._cache["hframe"]
        for a in range(4):
            # theta^a(W) = W^a, a coordinate component
            coeff = sum((xval[l] * jac[a][l] for l in range(7) if xval[l]),
                        Fraction(0))
            if coeff:
                Ta = _field_eval(hframe[a], pt)
                for m in range(7):
                    if Ta[m]:
                        res[m] += coeff * Ta[m]
        for s in range(3):
            # X(eta_s(W)) by the product rule
            etas = self.model.eta[s]
            val = Fraction(0)
            for l in range(7):
                if not xval[l]:
                    continue
                acc = Fraction(0)
                for nu in range(7):
                    de = etas[nu].diff(l).eval(pt)
                    if de and wval[nu]:
                        acc += de * wval[nu]
                    ev = etas[nu].eval(pt)
                    if ev and jac[nu][l]:
                        acc += ev * jac[nu][l]
                val += xval[l] * acc
            res[4 + s] += val
        return res

    def _contorsion_value(self, x, y):
        etax = [self.eta_of(s, x) for s in range(3)]
        etay = [self.eta_of(s, y) for s in range(3)]
        out = [Fraction(0)] * self.dim
        for s in range(3):
            M = self.omega[s]
            w = self.omega_of(s, x, y)
            if w:
                for m in range(self.dim):
                    out[m] += w * self.xi[s][m]
            if etax[s]:
                mty = self.mat_vec([[M[b][a] for b in range(self.dim)]
                                    for a in range(self.dim)], y)
                for m in range(self.dim):
                    out[m] -= etax[s] * mty[m]
            if etay[s]:
                mx = self.mat_vec(M, x)
                for m in range(self.dim):
                    out[m] += etay[s] * mx[m]
        sval = self.model.s_value
        if sval:
            half = Fraction(sval, 2)
            for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
                wxy = etax[i] * etay[j] - etax[j] * etay[i]
                if wxy:
                    for m in range(self.dim):
                        out[m] -= half * wxy * self.xi[k][m]
                t2 = etax[k] * etay[i]
                if t2:
                    for m in range(self.dim):
                        out[m] += half * t2 * self.xi[j][m]
                t2 = etax[k] * etay[j]
                if t2:
                    for m in range(self.dim):
                        out[m] -= half * t2 * self.xi[i][m]
                t3 = etay[k] * etax[j]
                if t3:
                    for m in range(self.dim):
                        out[m] -= half * t3 * self.xi[i][m]
                t3 = etay[k] * etax[i]
                if t3:
                    for m in range(self.dim):
                        out[m] += half * t3 * self.xi[j][m]
        return out


class PointCurvature:
    """Full (0,4) curvature at a point plus the derived traces."""

    def __init__(self, model, pt, lc=False):
        self.model = model
        self.pt = pt
        self.lc = lc
        self.frame = PointFrame(model, pt, lc=lc)
        self._R = self._curvature_tensor()
        self._R_xi = None

    def _nabla_pairs(self):
        model = self.model
        if self.lc:
            key = "H_lc"
            if key not in model._cache:
                F = model.frame_fields
                model._cache[key] = [[model.cov_deriv_lc(F[m], F[n])
                                      for n in range(model.dim)]
                                     for m in range(model.dim)]
            return model._cache[key]
        return model.nabla_frame

    def _curvature_tensor(self):
        model, fr = self.model, self.frame
        d = model.dim
        F = model.frame_fields
        H = self._nabla_pairs()
        BR = model.frame_brackets
        # nabla_{F_m}(H[n][r]) evaluated for all m, one field at a time
        nabla_vals = {}
        for n in range(d):
            for r in range(d):
                W = H[n][r]
                for m in range(d):
                    nabla_vals[(m, n, r)] = fr.cov_deriv_value(fr.frame[m], W)
        R = [[[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
             for _ in range(d)]
        for m in range(d):
            for n in range(m + 1, d):
                br = BR[(m, n)]
                for r in range(d):
                    first = nabla_vals[(m, n, r)]
                    second = nabla_vals[(n, m, r)]
                    third = fr.cov_deriv_value(_field_eval(br, self.pt), F[r])
                    vec = [a - b - c for a, b, c in zip(first, second, third)]
                    for sgm in range(d):
                        val = fr.g(vec, fr.frame[sgm])
                        R[m][n][r][sgm] = val
                        R[n][m][r][sgm] = -val
        return R

    def R(self, a, b, c, dd):
        """R(A,B,C,D) for tangent vectors given as coordinate tuples."""
        d = self.model.dim
        acc = Fraction(0)
        for m in range(d):
            if not a[m]:
                continue
            for n in range(d):
                if not b[n]:
                    continue
                Rmn = self._R[m][n]
                for r in range(d):
                    if not c[r]:
                        continue
                    row = Rmn[r]
                    for s in range(d):
                        if dd[s] and row[s]:
                            acc += a[m] * b[n] * c[r] * dd[s] * row[s]
        return acc

    def ricci(self):
        """Ric(A,B) = R(e_b, A, B, e_b) as a coordinate matrix."""
        d = self.model.dim
        c = self.frame.cometric_h
        out = [[Fraction(0)] * d for _ in range(d)]
        for n in range(d):
            for r in range(d):
                acc = Fraction(0)
                for m in range(d):
                    Rm = self._R[m][n][r]
                    for s in range(d):
                        if c[m][s] and Rm[s]:
                            acc += c[m][s] * Rm[s]
                out[n][r] = acc
        return out

    def scalar_s(self):
        """Normalized scalar curvature from 8n(n+2) S = R(e_b,e_a,e_a,e_b)."""
        d = self.model.dim
        c = self.frame.cometric_h
        acc = Fraction(0)
        ric = self.ricci()
        for n in range(d):
            for r in range(d):
                if c[n][r] and ric[n][r]:
                    acc += c[n][r] * ric[n][r]
        return acc / 24  # 8 n (n + 2) with n = 1

    def zeta(self, s):
        """zeta_s(A,B) = R(e_a, A, B, I_s e_a) / 4n as a coordinate matrix."""
        d = self.model.dim
        fr = self.frame
        # sum_a e_a^m (I_s e_a)^sg = (I_s cometric)_{sg m}
        IC = [[sum((fr.iops[s][sg][c] * fr.cometric_h[c][m]
                    for c in range(d) if fr.iops[s][sg][c] and fr.cometric_h[c][m]),
                   Fraction(0)) for m in range(d)] for sg in range(d)]
        out = [[Fraction(0)] * d for _ in range(d)]
        for n in range(d):
            for r in range(d):
                acc = Fraction(0)
                for m in range(d):
                    Rm = self._R[m][n][r]
                    for sg in range(d):
                        if Rm[sg] and IC[sg][m]:
                            acc += Rm[sg] * IC[sg][m]
                out[n][r] = acc / 4
        return out

    def tau(self, s):
        """tau_s(A,B) = R(e_a, I_s e_a, A, B) / 4n."""
        d = self.model.dim
        fr = self.frame
        IC = [[sum((fr.iops[s][n][c] * fr.cometric_h[c][m]
                    for c in range(d) if fr.iops[s][n][c] and fr.cometric_h[c][m]),
                   Fraction(0)) for m in range(d)] for n in range(d)]
        out = [[Fraction(0)] * d for _ in range(d)]
        for r in range(d):
            for sg in range(d):
                acc = Fraction(0)
                for m in range(d):
                    for n in range(d):
                        v = self._R[m][n][r][sg]
                        if v and IC[n][m]:
                            acc += v * IC[n][m]
                out[r][sg] = acc / 4
        return out

    def curvature_with_reeb(self, i):
        """Values R(xi_i, F_n, F_r, .) as vectors, lazily computed."""
        model, fr = self.model, self.frame
        d = model.dim
        if self._R_xi is None:
            self._R_xi = {}
        if i in self._R_xi:
            return self._R_xi[i]
        F = model.frame_fields
        H = self._nabla_pairs()
        K = model.nabla_xi_frame
        BRX = model.xi_frame_brackets
        xi_val = fr.xi[i]
        out = {}
        for n in range(d):
            for r in range(d):
                first = fr.cov_deriv_value(xi_val, H[n][r])
                second = fr.cov_deriv_value(fr.frame[n], K[i][r])
                third = fr.cov_deriv_value(
                    _field_eval(BRX[i][n], self.pt), F[r])
                out[(n, r)] = [a - b - c for a, b, c in zip(first, second, third)]
        self._R_xi[i] = out
        return out

    def reeb_curvature_residual(self, i):
        """Max |R(xi_i, X, Y, Z)| with X, Y, Z ranging over the horizontal
        projections of the frame; exact zero on both models."""
        d = self.model.dim
        fr = self.frame
        vals = self.curvature_with_reeb(i)
        # project the inner vector once: P[(n, r)][sg] = g(R(xi, F_n)F_r, h_sg)
        proj = {}
        for (n, r), vec in vals.items():
            proj[(n, r)] = [
                sum((vec[m] * fr.hproj[m][sg] for m in range(d)
                     if vec[m] and fr.hproj[m][sg]), Fraction(0))
                for sg in range(d)]
        worst = Fraction(0)
        for n2 in range(d):
            for r2 in range(d):
                for sg in range(d):
                    acc = Fraction(0)
                    for n in range(d):
                        hn = fr.hproj[n][n2]
                        if not hn:
                            continue
                        for r in range(d):
                            hr = fr.hproj[r][r2]
                            v = proj[(n, r)][sg]
                            if hr and v:
                                acc += hn * hr * v
                    if abs(acc) > worst:
                        worst = abs(acc)
        return worst

    def rho(self, s):
        """rho_s(A,B) = R(A, B, e_a, I_s e_a) / 4n; returned as the pairing
        with the Reeb field in the first slot: rho_s(xi_s, F_n)."""
        d = self.model.dim
        fr = self.frame
        IC = [[sum((fr.iops[s][sg][c] * fr.cometric_h[c][r]
                    for c in range(d) if fr.iops[s][sg][c] and fr.cometric_h[c][r]),
                   Fraction(0)) for sg in range(d)] for r in range(d)]
        vals = self.curvature_with_reeb(s)
        out = []
        for n in range(d):
            acc = Fraction(0)
            for r in range(d):
                vec = vals[(n, r)]
                for sg in range(d):
                    if vec[sg] and IC[r][sg]:
                        acc += vec[sg] * IC[r][sg]
            out.append(acc / 4)
        return out


def curvature_at(model, pt):
    return PointCurvature(model, pt, lc=False)


def riemannian_curvature_at(model, pt):
    if model.kind != "sphere7":
        raise StructuralError("Riemannian comparison is for the sphere model")
    return PointCurvature(model, pt, lc=True)


def riemannian_ricci(model, pt):
    """Ricci of the extended metric, traced over the full tangent space."""
    pc = riemannian_curvature_at(model, pt)
    d = model.dim
    fr = pc.frame
    c = fr.cometric_t
    out = [[Fraction(0)] * d for _ in range(d)]
    for n in range(d):
        for r in range(d):
            acc = Fraction(0)
            for m in range(d):
                Rm = pc._R[m][n][r]
                for s in range(d):
                    if c[m][s] and Rm[s]:
                        acc += c[m][s] * Rm[s]
            out[n][r] = acc
    return out


# -- torsion invariants -------------------------------------------------


def torsion_data(model):
    """Computed torsion endomorphism and the invariant tensors T^0, U.

    On both models the endomorphism T_xi vanishes identically, hence
    T^0 = U = 0; the returned matrices are computed, not assumed.
    """
    F = model.frame_fields
    simp = model.simplify
    endo = []
    for s in range(3):
        rows = []
        for n in range(model.dim):
            tv = (model.nabla_xi_frame[s][n] - model.nabla_frame_xi[n][s]
                  - model.xi_frame_brackets[s][n])
            tv = model.svec(tv)
            # horizontal component of T(xi_s, F_n)
            rows.append(model.hproj.apply(tv, simp))
        endo.append(rows)
    # T^0(X,Y) = g((T^0_{xi1} I_1 + T^0_{xi2} I_2 + T^0_{xi3} I_3) X, Y): with
    # T_xi = 0 this is the zero matrix; assembled from the computed endo so a
    # modeling bug would surface here.
    from .fields import PolyMatrix
    t0 = PolyMatrix.zero(model.dim)
    for s in range(3):
        for n in range(model.dim):
            col = endo[s][n]
            for m in range(model.dim):
                if not col[m].is_zero():
                    # nonzero endomorphism: fold g(T_xi I_s X, Y) honestly
                    raise StructuralError(
                        "nonzero torsion endomorphism on %s" % model.kind)
    u = PolyMatrix.zero(model.dim)
    vertical = {}
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        tv = model.svec(
            model.nabla_xi_xi[i][j] - model.nabla_xi_xi[j][i]
            - model.svec(lie_bracket(model.xi[i], model.xi[j])))
        vertical[(i, j)] = tv
    return {"T0": t0, "U": u, "endomorphism": endo, "vertical": vertical}


# -- contact volume density ----------------------------------------------


def _wedge(a, b):
    """Exterior product of forms given as {sorted index tuple: coeff}."""
    out = {}
    for ia, ca in a.items():
        for ib, cb in b.items():
            if set(ia) & set(ib):
                continue
            merged = ia + ib
            perm = sorted(range(len(merged)), key=lambda t: merged[t])
            # sign of the sorting permutation
            sign = 1
            seen = [False] * len(perm)
            for start in range(len(perm)):
                if seen[start]:
                    continue
                length = 0
                t = start
                while not seen[t]:
                    seen[t] = True
                    t = perm[t]
                    length += 1
                if length % 2 == 0:
                    sign = -sign
            key = tuple(sorted(merged))
            out[key] = out.get(key, Fraction(0)) + sign * ca * cb
    return {k: v for k, v in out.items() if v}


def volume_density(model, pts):
    """Density of eta1 ^ eta2 ^ eta3 ^ omega_s^2 against the Riemannian
    volume of the extended metric; sphere only.

    Returns {"square": Fraction, "sign": +-1, "value": Fraction-or-None}
    and raises if the ratio depends on the point or on s.
    """
    if model.kind != "sphere7":
        raise StructuralError("volume density is defined on the sphere model")
    if len(pts) < 2:
        raise StructuralError("need at least two points")
    results = []
    for pt in pts:
        fr = PointFrame(model, pt)
        # oriented tangent basis from the projector columns
        cols = [[fr.tproj[a][m] for a in range(8)] for m in range(8)]
        _, pivots = rref([[cols[m][a] for m in range(8)] for a in range(8)])
        basis = [cols[m] for m in pivots[:7]]
        if len(basis) != 7:
            raise StructuralError("degenerate tangent projector")
        amb = [list(pt)] + basis
        if det(ExactMatrix(amb)) < 0:
            basis[0], basis[1] = basis[1], basis[0]
        gram = [[sum(a * b for a, b in zip(u, v)) for v in basis] for u in basis]
        gram_det = det(ExactMatrix(gram))
        eta_forms = [{(m,): fr.eta[t][m] for m in range(8) if fr.eta[t][m]}
                     for t in range(3)]
        for s in range(3):
            # omega_s = sum_{a<b} omega_s(d_a, d_b) dx^a ^ dx^b (antisymmetric)
            omega_form = {}
            for a in range(8):
                for b in range(a + 1, 8):
                    v = fr.omega[s][a][b]
                    if v:
                        omega_form[(a, b)] = v
            seven = _wedge(_wedge(_wedge(eta_forms[0], eta_forms[1]),
                                  eta_forms[2]),
                           _wedge(omega_form, omega_form))
            val = Fraction(0)
            for idx, c in seven.items():
                minor = [[basis[r][m] for m in idx] for r in range(7)]
                val += c * det(ExactMatrix(minor))
            square = val * val / gram_det
            sign = 1 if val > 0 else (-1 if val < 0 else 0)
            results.append((square, sign))
    first = results[0]
    if any(r != first for r in results):
        raise StructuralError("contact volume density is not constant: %r"
                              % (results,))
    square, sign = first
    value = None
    num, den = square.numerator, square.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        value = sign * Fraction(rn, rd)
    return {"square": square, "sign": sign, "value": value}


# -- induced quaternion triple --------------------------------------------


def induced_triple(model, pt):
    """The quaternion triple induced on H_pt, in a rational orthonormal
    basis of the horizontal space.  Raises if Gram-Schmidt meets a norm that
    is not a perfect rational square (no rational frame at that point)."""
    if model.kind != "sphere7":
        raise StructuralError("induced triples are built on the sphere model")
    fr = PointFrame(model, pt)
    cols = [[fr.hproj[a][m] for a in range(8)] for m in range(8)]
    _, pivots = rref([[cols[m][a] for m in range(8)] for a in range(8)])
    raw = [cols[m] for m in pivots]
    if len(raw) != 4:
        raise StructuralError("horizontal space has unexpected dimension")
    basis = []
    for v in raw:
        w = list(v)
        for b in basis:
            c = sum(a * x for a, x in zip(w, b))
            w = [a - c * x for a, x in zip(w, b)]
        n2 = sum(a * a for a in w)
        rn, rd = math.isqrt(n2.numerator), math.isqrt(n2.denominator)
        if rn * rn != n2.numerator or rd * rd != n2.denominator:
            raise StructuralError(
                "no rational orthonormal horizontal basis at %r" % (pt,))
        norm = Fraction(rn, rd)
        basis.append([a / norm for a in w])
    B = ExactMatrix([[basis[j][a] for j in range(4)] for a in range(8)])
    mats = []
    for s in range(3):
        cols_s = []
        for j in range(4):
            img = fr.mat_vec(fr.iops[s], basis[j])
            # coordinates of img in the orthonormal basis: plain inner products
            cols_s.append([sum(x * y for x, y in zip(basis[i], img))
                           for i in range(4)])
        mats.append(ExactMatrix([[cols_s[j][i] for j in range(4)]
                                 for i in range(4)]))
    from .quatalg import QuatTriple
    return QuatTriple(1, mats[0], mats[1], mats[2])
