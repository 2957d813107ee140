"""Exact dense rational linear algebra and the certified generalized
symmetric eigensolver.

ExactMatrix is a thin wrapper over lists of Fractions.  The eigensolver for
the pencil A v = lambda G v works in three layers:

1. exact LDL^T factorization certifies G positive definite;
2. a Krylov minimal polynomial of G^-1 A is computed exactly; its rational
   roots are certified eigenvalues with multiplicities read off nullspace
   ranks of (A - lambda G).  For a symmetric definite pencil the minimal
   polynomial is squarefree, so when it factors completely over Q the whole
   spectrum is certified exactly;
3. any remaining spectrum is approximated in floating point (scipy) and
   reported with exact a-posteriori residual bounds.

A characteristic-polynomial + Sturm-isolation path is kept for small sizes
as an independent oracle used by the tests.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import EigenSolveError, StructuralError


class ExactMatrix:
    """Dense matrix of Fractions."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [[Fraction(v) for v in r] for r in rows]
        if self.rows:
            m = len(self.rows[0])
            if any(len(r) != m for r in self.rows):
                raise StructuralError("ragged matrix")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n, m=None):
        m = n if m is None else m
        return cls([[0] * m for _ in range(n)])

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def __getitem__(self, i):
        return self.rows[i]

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.rows == other.rows

    def __add__(self, other):
        return ExactMatrix([[a + b for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return ExactMatrix([[a - b for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.rows, other.rows)])

    def scale(self, s):
        s = Fraction(s)
        return ExactMatrix([[a * s for a in r] for r in self.rows])

    def matmul(self, other):
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise StructuralError("shape mismatch in matmul")
        out = [[Fraction(0)] * m for _ in range(n)]
        for i in range(n):
            ri = self.rows[i]
            oi = out[i]
            for t in range(k):
                a = ri[t]
                if not a:
                    continue
                rt = other.rows[t]
                for j in range(m):
                    if rt[j]:
                        oi[j] += a * rt[j]
        return ExactMatrix(out)

    def matvec(self, v):
        return [sum((a * x for a, x in zip(r, v) if a and x), Fraction(0))
                for r in self.rows]

    def transpose(self):
        n, m = self.shape
        return ExactMatrix([[self.rows[i][j] for i in range(n)] for j in range(m)])

    def is_symmetric(self):
        n, m = self.shape
        return n == m and all(self.rows[i][j] == self.rows[j][i]
                              for i in range(n) for j in range(i))

    def is_antisymmetric(self):
        n, m = self.shape
        return n == m and all(self.rows[i][j] == -self.rows[j][i]
                              for i in range(n) for j in range(i + 1))

    def trace(self):
        return sum((self.rows[i][i] for i in range(len(self.rows))), Fraction(0))

    def frobenius_inner(self, other):
        return sum((a * b for ra, rb in zip(self.rows, other.rows)
                    for a, b in zip(ra, rb) if a and b), Fraction(0))

    def to_floats(self):
        return [[float(v) for v in r] for r in self.rows]


def rref(rows):
    """Reduced row echelon form (in place on a copy); returns (rref, pivots)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(matrix):
    rows = matrix.rows if isinstance(matrix, ExactMatrix) else matrix
    return len(rref(rows)[1])


def nullspace(matrix):
    """Exact rational basis of the kernel, as lists of Fractions."""
    rows = matrix.rows if isinstance(matrix, ExactMatrix) else matrix
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(matrix, rhs_cols):
    """Solve M X = B exactly for square nonsingular M; B given columnwise."""
    rows = [list(r) for r in matrix.rows]
    n = len(rows)
    aug = [rows[i] + [col[i] for col in rhs_cols] for i in range(n)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise StructuralError("singular matrix in solve")
    return [[red[i][n + j] for i in range(n)] for j in range(len(rhs_cols))]


def det(matrix):
    """Exact determinant via fraction-free-ish Gaussian elimination."""
    rows = [list(map(Fraction, r)) for r in
            (matrix.rows if isinstance(matrix, ExactMatrix) else matrix)]
    n = len(rows)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if rows[i][c]), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            sign = -sign
        pv = rows[c][c]
        result *= pv
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] / pv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return result * sign


def ldlt(matrix):
    """Exact LDL^T of a symmetric matrix; returns (L, D) with D diagonal.

    Raises StructuralError on a zero pivot (matrix not definite along the
    leading minors); positive definiteness holds iff every D entry > 0.
    """
    if not matrix.is_symmetric():
        raise StructuralError("ldlt requires a symmetric matrix")
    n = matrix.shape[0]
    a = [list(r) for r in matrix.rows]
    L = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        dj = a[j][j] - sum((L[j][k] * L[j][k] * D[k] for k in range(j)), Fraction(0))
        D[j] = dj
        if dj == 0:
            raise StructuralError("zero pivot in LDL^T at index %d" % j)
        for i in range(j + 1, n):
            L[i][j] = (a[i][j] - sum((L[i][k] * L[j][k] * D[k] for k in range(j)),
                                     Fraction(0))) / dj
    return ExactMatrix(L), D


def is_positive_definite(matrix):
    try:
        _, D = ldlt(matrix)
    except StructuralError:
        return False
    return all(d > 0 for d in D)


# -- univariate rational polynomials (dense, ascending coefficients) -----


def poly_eval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_deriv(coeffs):
    return [c * i for i, c in enumerate(coeffs)][1:] or [Fraction(0)]


def poly_normalize(coeffs):
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def poly_divmod(a, b):
    a = poly_normalize(a)
    b = poly_normalize(b)
    if b == [Fraction(0)] or (len(b) == 1 and b[0] == 0):
        raise ZeroDivisionError
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and poly_normalize(r) != [Fraction(0)]:
        r = poly_normalize(r)
        if len(r) < len(b):
            break
        f = r[-1] / b[-1]
        d = len(r) - len(b)
        q[d] = f
        for i, bc in enumerate(b):
            r[i + d] -= f * bc
        r = poly_normalize(r)
    return poly_normalize(q), poly_normalize(r)


def sturm_sequence(coeffs):
    p0 = poly_normalize([Fraction(c) for c in coeffs])
    p1 = poly_deriv(p0)
    seq = [p0, poly_normalize(p1)]
    while len(seq[-1]) > 1 or seq[-1][0] != 0:
        _, r = poly_divmod(seq[-2], seq[-1])
        if r == [Fraction(0)]:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq, x):
    signs = []
    for p in seq:
        v = poly_eval(p, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(coeffs, lo, hi):
    """Number of distinct real roots in (lo, hi]."""
    seq = sturm_sequence(coeffs)
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def isolate_real_roots(coeffs, precision=Fraction(1, 10 ** 12)):
    """Disjoint rational intervals, one around each distinct real root."""
    coeffs = poly_normalize([Fraction(c) for c in coeffs])
    if len(coeffs) == 1:
        return []
    lead = abs(coeffs[-1])
    bound = 1 + max(abs(c) for c in coeffs[:-1]) / lead
    intervals = [(-bound, bound)]
    isolated = []
    while intervals:
        lo, hi = intervals.pop()
        n = sturm_count(coeffs, lo, hi)
        if n == 0:
            continue
        if n == 1 and hi - lo <= precision:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if poly_eval(coeffs, mid) == 0:
            # nudge the split point off the root
            mid += min(precision, hi - lo) / 7
        if n == 1:
            cnt = sturm_count(coeffs, lo, mid)
            lo, hi = (lo, mid) if cnt == 1 else (mid, hi)
            while hi - lo > precision:
                m2 = (lo + hi) / 2
                if poly_eval(coeffs, m2) == 0:
                    m2 += min(precision, hi - lo) / 7
                if sturm_count(coeffs, lo, m2) == 1:
                    hi = m2
                else:
                    lo = m2
            isolated.append((lo, hi))
        else:
            intervals.append((lo, mid))
            intervals.append((mid, hi))
    return sorted(isolated)


def charpoly(matrix):
    """Characteristic polynomial det(xI - M) by Faddeev-LeVerrier.

    O(n^4) fraction operations; intended for small matrices (test oracle).
    """
    n = matrix.shape[0]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = ExactMatrix.zero(n)
    I = ExactMatrix.identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        M = matrix.matmul(M + I.scale(c))
        c = -M.trace() / k
        coeffs[n - k] = c
    return coeffs


def krylov_minpoly(matrix, attempts=3, seed=11):
    """Exact minimal polynomial via Krylov subspaces from random vectors.

    Returns ascending coefficients, monic.  lcm over a few starting vectors;
    for diagonalizable matrices this is (with overwhelming probability) the
    true minimal polynomial, and callers verify p(M) annihilates M exactly
    when completeness matters.
    """
    import random

    n = matrix.shape[0]
    rng = random.Random(seed)
    result = [Fraction(1)]
    for _ in range(attempts):
        v0 = [Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(n)]
        rows = [v0]
        while True:
            v = matrix.matvec(rows[-1])
            # dependence test for [rows..., v], columns in the ambient space
            cand = rows + [v]
            _, pivots = rref([[cand[i][j] for i in range(len(cand))]
                              for j in range(n)])
            if len(pivots) < len(cand):
                break
            rows.append(v)
        k = len(rows)
        # solve sum_i c_i M^i v0 = M^k v0; consistent and unique by construction
        aug = [[rows[i][j] for i in range(k)] + [v[j]] for j in range(n)]
        red, pivots = rref(aug)
        sol = [Fraction(0)] * k
        for r, pc in enumerate(pivots):
            if pc < k:
                sol[pc] = red[r][k]
        p = [-s for s in sol] + [Fraction(1)]
        result = poly_lcm(result, p)
        if len(result) - 1 == n:
            break
    return result


def poly_gcd(a, b):
    a = poly_normalize(a)
    b = poly_normalize(b)
    while b != [Fraction(0)]:
        _, r = poly_divmod(a, b)
        a, b = b, r
        if b == [Fraction(0)]:
            break
    if a[-1] != 0:
        a = [c / a[-1] for c in a]
    return a


def poly_lcm(a, b):
    g = poly_gcd(a, b)
    q, _ = poly_divmod(_poly_mul(a, b), g)
    if q[-1] != 0:
        q = [c / q[-1] for c in q]
    return q


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return out


def rational_roots(coeffs):
    """All rational roots of a rational-coefficient polynomial, exactly."""
    coeffs = poly_normalize([Fraction(c) for c in coeffs])
    if len(coeffs) == 1:
        return []
    # clear denominators to an integer polynomial
    den = 1
    for c in coeffs:
        den = den * c.denominator // _igcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    while ints and ints[0] == 0:
        ints = ints[1:]
        # zero root handled separately below
    roots = set()
    if poly_eval(coeffs, Fraction(0)) == 0:
        roots.add(Fraction(0))
    if not ints:
        return sorted(roots)
    a0, an = abs(ints[0]), abs(ints[-1])
    for p in _divisors(a0):
        for q in _divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if poly_eval(coeffs, cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def _igcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    n = abs(n)
    if n == 0:
        return []
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


# -- generalized symmetric eigensolver -----------------------------------


class EigenValue:
    """One pencil eigenvalue: exact Fraction when certified, float advisory
    otherwise, with multiplicity and an a-posteriori residual bound."""

    __slots__ = ("value", "certified", "multiplicity", "residual", "vectors")

    def __init__(self, value, certified, multiplicity, residual, vectors=()):
        self.value = value
        self.certified = certified
        self.multiplicity = multiplicity
        self.residual = residual
        self.vectors = list(vectors)

    def __repr__(self):
        tag = "exact" if self.certified else "approx"
        return "EigenValue(%s, %s, mult=%d)" % (self.value, tag, self.multiplicity)


def generalized_eigen(A, G, tol=1e-12):
    """Ascending eigenvalues of A v = lambda G v for symmetric A, definite G.

    Rational eigenvalues are certified exactly (nullspace rank of
    A - lambda G); leftovers come from the float path with exact residual
    verification against ``tol``.
    """
    if not A.is_symmetric() or not G.is_symmetric():
        raise StructuralError("generalized_eigen requires symmetric matrices")
    if not is_positive_definite(G):
        raise StructuralError("G is not positive definite")
    n = A.shape[0]
    if A.shape != G.shape:
        raise StructuralError("shape mismatch")

    M = ExactMatrix(solve(G, [[A[i][j] for i in range(n)] for j in range(n)])).transpose()
    minpoly = krylov_minpoly(M)
    roots = rational_roots(minpoly)

    found = []
    total_mult = 0
    for lam in roots:
        shifted = A - G.scale(lam)
        vecs = nullspace(shifted)
        if not vecs:
            continue
        found.append(EigenValue(lam, True, len(vecs), Fraction(0), vecs))
        total_mult += len(vecs)

    if total_mult < n:
        approx = _float_eigen(A, G, tol, exclude=[ev.value for ev in found],
                              missing=n - total_mult)
        found.extend(approx)
    found.sort(key=lambda ev: float(ev.value))
    return found


def _float_eigen(A, G, tol, exclude, missing):
    import numpy as np
    from scipy.linalg import eigh

    vals, vecs = eigh(np.array(A.to_floats()), np.array(G.to_floats()))
    Gf = np.array(G.to_floats())
    Af = np.array(A.to_floats())
    out = []
    taken = 0
    excl = [float(x) for x in exclude]
    for i, lam in enumerate(vals):
        if taken >= missing:
            break
        if any(abs(lam - x) < 1e-7 for x in excl):
            continue
        v = vecs[:, i]
        r = Af @ v - lam * (Gf @ v)
        vnorm = float((v @ (Gf @ v)) ** 0.5)
        residual = float((r @ r) ** 0.5) / max(vnorm, 1e-300)
        if residual > tol:
            raise EigenSolveError(
                "float eigenpair residual %.3g exceeds tol %.3g" % (residual, tol),
                best_residual=residual)
        out.append(EigenValue(float(lam), False, 1, residual, [list(map(float, v))]))
        taken += 1
    return out
