"""Pointwise quaternionic linear algebra: quaternion triples, the Casimir
operator, the four Sp(n)-invariant pieces of a bilinear form, and the
projection norm inequalities.

Everything is exact rational 4n x 4n matrix algebra in an orthonormal
frame (g is the identity).  Endomorphisms are identified with bilinear
forms through g, which is transpose-free in this frame.

Sign convention for n = 1 (resolves the trace-sign ambiguity): the
symmetric part of the [3]-component of a form Psi equals
(tr Psi / 4) g, where tr is the g-trace of the bilinear form; this is the
sign forced by the exact reconstruction part3 + partm1 = Psi applied to
Psi = g.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import StructuralError, UnsupportedDimensionError
from .linalg import ExactMatrix, rank
from .models import quat_left_matrices


class QuatTriple:
    """Three anticommuting complex structures on a 4n-dimensional rational
    inner-product space, with g the identity in the standard frame."""

    def __init__(self, n, I1, I2, I3):
        if n < 1:
            raise StructuralError("quaternionic dimension must be positive")
        self.n = n
        dim = 4 * n
        mats = []
        for M in (I1, I2, I3):
            M = M if isinstance(M, ExactMatrix) else ExactMatrix(M)
            if M.shape != (dim, dim):
                raise StructuralError("endomorphism is not %dx%d" % (dim, dim))
            mats.append(M)
        self.I1, self.I2, self.I3 = mats
        self.g = ExactMatrix.identity(dim)

    @classmethod
    def standard(cls, n=1):
        """Left multiplication by i, j, k on H^n."""
        li, lj, lk = quat_left_matrices(blocks=1)
        dim = 4 * n
        big = [[[0] * dim for _ in range(dim)] for _ in range(3)]
        for blk in range(n):
            for s, m4 in enumerate((li, lj, lk)):
                for a in range(4):
                    for b in range(4):
                        big[s][4 * blk + a][4 * blk + b] = m4[a][b]
        return cls(n, big[0], big[1], big[2])

    @property
    def dim(self):
        return 4 * self.n

    @property
    def structures(self):
        return (self.I1, self.I2, self.I3)


class BilinearForm:
    """A 4n x 4n rational matrix with a symmetry tag."""

    def __init__(self, entries, symmetry_tag=None):
        self.entries = entries if isinstance(entries, ExactMatrix) \
            else ExactMatrix(entries)
        n, m = self.entries.shape
        if n != m:
            raise StructuralError("bilinear forms are square")
        if symmetry_tag is None:
            if self.entries.is_symmetric():
                symmetry_tag = "symmetric"
            elif self.entries.is_antisymmetric():
                symmetry_tag = "antisymmetric"
            else:
                symmetry_tag = "general"
        else:
            if symmetry_tag == "symmetric" and not self.entries.is_symmetric():
                raise StructuralError("matrix is not symmetric")
            if symmetry_tag == "antisymmetric" and not self.entries.is_antisymmetric():
                raise StructuralError("matrix is not antisymmetric")
        self.symmetry_tag = symmetry_tag

    @property
    def dim(self):
        return self.entries.shape[0]

    def __add__(self, other):
        return BilinearForm(self.entries + other.entries)

    def __sub__(self, other):
        return BilinearForm(self.entries - other.entries)

    def scale(self, s):
        return BilinearForm(self.entries.scale(s))

    def __eq__(self, other):
        return isinstance(other, BilinearForm) and self.entries == other.entries

    def trace(self):
        return self.entries.trace()

    def frobenius(self, other):
        return self.entries.frobenius_inner(other.entries)

    def norm_sq(self):
        return self.frobenius(self)

    def symmetric_part(self):
        return BilinearForm(self.entries.scale(Fraction(1, 2))
                            + self.entries.transpose().scale(Fraction(1, 2)))

    def antisymmetric_part(self):
        return BilinearForm(self.entries.scale(Fraction(1, 2))
                            - self.entries.transpose().scale(Fraction(1, 2)))


class InvariantDecomposition:
    """The [3]/[-1] split and the four sign pieces of a bilinear form."""

    def __init__(self, part3, partm1, parts_pm):
        self.part3 = part3
        self.partm1 = partm1
        self.parts_pm = parts_pm  # (+++, +--, -+-, --+)
        self.sym_m1 = partm1.symmetric_part()
        self.antisym_m1 = partm1.antisymmetric_part()


def _twist(t, s, form):
    """Psi(I_s ., I_s .) as a matrix: I_s^T Psi I_s."""
    I = t.structures[s]
    return I.transpose().matmul(form).matmul(I)


def validate_triple(t):
    """Per-axiom pass/fail report for the quaternion and compatibility
    identities; exact arithmetic, zero residual required."""
    dim = t.dim
    ident = ExactMatrix.identity(dim)
    report = []

    def check(name, ok):
        report.append({"name": name, "pass": bool(ok)})

    for s, I in enumerate(t.structures, start=1):
        sq = I.matmul(I)
        check("I%d^2 = -Id" % s, sq == ident.scale(-1))
    check("I1 I2 = I3", t.I1.matmul(t.I2) == t.I3)
    check("I2 I3 = I1", t.I2.matmul(t.I3) == t.I1)
    check("I3 I1 = I2", t.I3.matmul(t.I1) == t.I2)
    check("I1 I2 = -I2 I1",
          t.I1.matmul(t.I2) == t.I2.matmul(t.I1).scale(-1))
    prod = t.I1.matmul(t.I2).matmul(t.I3)
    check("I1 I2 I3 = -Id", prod == ident.scale(-1))
    for s, I in enumerate(t.structures, start=1):
        check("g(I%d X, I%d Y) = g(X, Y)" % (s, s),
              I.transpose().matmul(I) == ident)
    return report


def casimir_apply(t, form):
    """Upsilon(Psi)(X,Y) = sum_s Psi(I_s X, I_s Y)."""
    m = _entries(form)
    if m.shape != (t.dim, t.dim):
        raise StructuralError("form size does not match the triple")
    acc = ExactMatrix.zero(t.dim)
    for s in range(3):
        acc = acc + _twist(t, s, m)
    return BilinearForm(acc)


def _entries(form):
    return form.entries if isinstance(form, BilinearForm) else ExactMatrix(form)


def decompose(t, form):
    """Split into the Casimir eigencomponents and the four sign pieces.

    part3 = (Psi + Upsilon Psi)/4 (eigenvalue 3), partm1 = (3 Psi -
    Upsilon Psi)/4 (eigenvalue -1); the sign pieces average the three
    twists with the corresponding sign patterns.
    """
    m = _entries(form)
    if m.shape != (t.dim, t.dim):
        raise StructuralError("form size does not match the triple")
    tw = [_twist(t, s, m) for s in range(3)]
    ups = tw[0] + tw[1] + tw[2]
    quarter = Fraction(1, 4)
    part3 = BilinearForm((m + ups).scale(quarter))
    partm1 = BilinearForm((m.scale(3) - ups).scale(quarter))
    signs = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))
    pieces = []
    for pat in signs:
        acc = m
        for s in range(3):
            acc = acc + tw[s].scale(pat[s])
        pieces.append(BilinearForm(acc.scale(quarter)))
    return InvariantDecomposition(part3, partm1, tuple(pieces))


def omega_matrix(t, s):
    """omega_s as a bilinear form: omega_s(X,Y) = g(I_s X, Y) = (I_s^T)_{XY}."""
    return BilinearForm(t.structures[s].transpose())


def omega_pairing(t, form, s):
    """g(Psi, omega_s) = sum_a Psi(e_a, I_s e_a)."""
    m = _entries(form)
    I = t.structures[s]
    return sum((m[a][b] * I[b][a] for a in range(t.dim) for b in range(t.dim)
                if m[a][b] and I[b][a]), Fraction(0))


def component_dims(t):
    """Exact dimensions of the [3]- and [-1]-eigenspaces inside the
    16-dimensional space of bilinear forms; n = 1 only."""
    if t.n != 1:
        raise UnsupportedDimensionError(
            "component dimensions are audited for n = 1 only")
    dim = t.dim
    size = dim * dim

    def op_matrix(proj):
        cols = []
        for a in range(dim):
            for b in range(dim):
                e = [[Fraction(1) if (i, j) == (a, b) else Fraction(0)
                      for j in range(dim)] for i in range(dim)]
                img = proj(BilinearForm(ExactMatrix(e))).entries
                cols.append([img[i][j] for i in range(dim) for j in range(dim)])
        return ExactMatrix([[cols[c][r] for c in range(size)]
                            for r in range(size)])

    p3 = op_matrix(lambda f: decompose(t, f).part3)
    pm1 = op_matrix(lambda f: decompose(t, f).partm1)
    idem3 = p3.matmul(p3) == p3
    idem1 = pm1.matmul(pm1) == pm1
    if not (idem3 and idem1):
        raise StructuralError("projectors are not idempotent")
    return rank(p3), rank(pm1)


def norm_inequalities(t, form):
    """lhs/rhs pairs for the two projection inequalities:
    |Psi_[-1]|^2 >= (1/4n) sum_s g(Psi, omega_s)^2 and
    |Psi_[3]|^2 >= (1/4n) (tr Psi)^2."""
    m = _entries(form)
    if m.shape != (t.dim, t.dim):
        raise StructuralError("form size does not match the triple")
    dec = decompose(t, m)
    fourn = Fraction(4 * t.n)
    lhs1 = dec.partm1.norm_sq()
    rhs1 = sum((omega_pairing(t, m, s) ** 2 for s in range(3)), Fraction(0)) / fourn
    lhs2 = dec.part3.norm_sq()
    rhs2 = BilinearForm(m).trace() ** 2 / fourn
    return (lhs1, rhs1), (lhs2, rhs2)


def serialize_form(form):
    """Row-major array of p/q strings (JSON-ready)."""
    m = _entries(form)
    return [[str(v.numerator) if v.denominator == 1
             else "%d/%d" % (v.numerator, v.denominator) for v in row]
            for row in m.rows]
