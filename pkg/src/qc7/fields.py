"""Polynomial tensor algebra helpers: matrices of polynomials, brackets,
exterior derivatives, and contractions used by the model geometry.

Conventions: a vector field is a PolyVector of ambient-coordinate
components; a one-form is also a PolyVector (its coordinate components); a
bilinear form or (1,1)-tensor is a PolyMatrix ``m[i][j]`` acting as
``B(u, v) = u^T m v`` resp. ``(Av)^i = sum_j m[i][j] v^j``.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import PolyScalar, PolyVector


class PolyMatrix:
    """Dense matrix of PolyScalar entries."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]

    @classmethod
    def identity(cls, n):
        return cls([[PolyScalar.const(1 if i == j else 0) for j in range(n)]
                    for i in range(n)])

    @classmethod
    def zero(cls, n, m=None):
        m = n if m is None else m
        return cls([[PolyScalar.zero() for _ in range(m)] for _ in range(n)])

    @classmethod
    def from_ints(cls, rows):
        return cls([[PolyScalar.const(v) for v in r] for r in rows])

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def __getitem__(self, i):
        return self.rows[i]

    def __add__(self, other):
        return PolyMatrix([[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return PolyMatrix([[a - b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.rows, other.rows)])

    def scale(self, s):
        return PolyMatrix([[a * s for a in r] for r in self.rows])

    def matmul(self, other, simplify=None):
        n, k = self.shape
        k2, m = other.shape
        assert k == k2
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = PolyScalar.zero()
                for t in range(k):
                    a = self.rows[i][t]
                    b = other.rows[t][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(simplify(acc) if simplify else acc)
            out.append(row)
        return PolyMatrix(out)

    def transpose(self):
        n, m = self.shape
        return PolyMatrix([[self.rows[i][j] for i in range(n)] for j in range(m)])

    def apply(self, vec, simplify=None):
        """Matrix times vector of PolyScalar."""
        out = []
        for row in self.rows:
            acc = PolyScalar.zero()
            for a, v in zip(row, vec):
                if a.is_zero() or v.is_zero():
                    continue
                acc = acc + a * v
            out.append(simplify(acc) if simplify else acc)
        return PolyVector(out)

    def pair(self, u, v, simplify=None):
        """u^T M v for vectors of PolyScalar."""
        acc = PolyScalar.zero()
        for i, row in enumerate(self.rows):
            ui = u[i]
            if ui.is_zero():
                continue
            for j, a in enumerate(row):
                if a.is_zero() or v[j].is_zero():
                    continue
                acc = acc + ui * a * v[j]
        return simplify(acc) if simplify else acc

    def contract_with(self, other):
        """Frobenius-style full contraction sum_ij self[i][j] * other[i][j]."""
        acc = PolyScalar.zero()
        for ra, rb in zip(self.rows, other.rows):
            for a, b in zip(ra, rb):
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
        return acc

    def map(self, fn):
        return PolyMatrix([[fn(a) for a in r] for r in self.rows])

    def eval(self, point):
        return [[a.eval(point) for a in r] for r in self.rows]

    def is_zero(self):
        return all(a.is_zero() for r in self.rows for a in r)


def outer(u, v):
    """Rank-one PolyMatrix u v^T."""
    return PolyMatrix([[a * b for b in v] for a in u])


def directional_derivative(X, f):
    """X(f) for a vector field X and scalar f: sum_i X^i d_i f."""
    acc = PolyScalar.zero()
    for i, xi in enumerate(X):
        if xi.is_zero():
            continue
        df = f.diff(i)
        if df.is_zero():
            continue
        acc = acc + xi * df
    return acc


def flat_derivative(X, Y):
    """Componentwise directional derivative D_X Y of a vector field."""
    return PolyVector([directional_derivative(X, c) for c in Y])


def lie_bracket(X, Y):
    """[X, Y] = D_X Y - D_Y X for polynomial vector fields."""
    return flat_derivative(X, Y) - flat_derivative(Y, X)


def gradient(f, dim):
    return PolyVector([f.diff(i) for i in range(dim)])


def d_one_form(eta):
    """Exterior derivative of a one-form with components eta_j:
    (d eta)_{ij} = d_i eta_j - d_j eta_i."""
    n = len(eta)
    return PolyMatrix([[eta[j].diff(i) - eta[i].diff(j) for j in range(n)]
                       for i in range(n)])


def frobenius_matrix(rows):
    """Exact numeric matrix (list of Fraction rows) from a PolyMatrix eval."""
    return [[Fraction(v) for v in row] for row in rows]
