"""Exact rational polynomials on R^8, reduction modulo the sphere relation,
integration over S^7, and rational point sampling.

Every geometric object in the package is built from :class:`PolyScalar`.
The representation is backend-owned (see :mod:`qc7.kernel`): a dict of
packed exponent keys to integer numerators plus a common denominator.
Instances are immutable in use; never mutate ``_terms``.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction

from . import kernel
from .errors import StructuralError

NVARS = kernel.NVARS


class PolyScalar:
    """A polynomial in x1..x8 with arbitrary-precision rational coefficients.

    ``reduced`` is True when the representative is canonical modulo the
    sphere ideal (no monomial divisible by x8^2).  Sums, scalar multiples and
    derivatives of reduced polynomials stay reduced; products generally do
    not and must be re-reduced by callers working on the sphere.
    """

    __slots__ = ("_terms", "_den", "reduced", "_maxexp")

    def __init__(self, terms, den=1, reduced=False, _canonical=False):
        if _canonical:
            self._terms, self._den = terms, den
        else:
            self._terms, self._den = kernel.normalize(terms, den)
        self.reduced = reduced or not self._terms
        self._maxexp = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls({}, 1, reduced=True, _canonical=True)

    @classmethod
    def const(cls, value):
        f = Fraction(value)
        if f == 0:
            return cls.zero()
        return cls({0: f.numerator}, f.denominator, reduced=True, _canonical=True)

    @classmethod
    def one(cls):
        return cls.const(1)

    @classmethod
    def var(cls, i):
        """The coordinate x_{i+1} for i in 0..7."""
        if not 0 <= i < NVARS:
            raise StructuralError("variable index out of range: %d" % i)
        return cls({kernel.pack(tuple(1 if j == i else 0 for j in range(NVARS))): 1},
                   1, reduced=True, _canonical=True)

    @classmethod
    def monomial(cls, exps, coeff=1):
        f = Fraction(coeff)
        if f == 0:
            return cls.zero()
        return cls({kernel.pack(exps): f.numerator}, f.denominator)

    @classmethod
    def from_terms(cls, mapping):
        """Build from {exponent-tuple: coefficient}."""
        acc = cls.zero()
        for exps, c in mapping.items():
            acc = acc + cls.monomial(exps, c)
        return acc

    # -- basic queries -------------------------------------------------

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def terms(self):
        """Iterate (exponent-tuple, Fraction) pairs in key order."""
        for k in sorted(self._terms):
            yield kernel.unpack(k), Fraction(self._terms[k], self._den)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        best = -1
        for k in self._terms:
            d = 0
            while k:
                d += k & 0xFF
                k >>= 8
            if d > best:
                best = d
        return best

    def max_var_exp(self):
        if self._maxexp is None:
            best = 0
            for k in self._terms:
                while k:
                    e = k & 0xFF
                    if e > best:
                        best = e
                    k >>= 8
            self._maxexp = best
        return self._maxexp

    def constant_value(self):
        """The coefficient of the constant monomial."""
        return Fraction(self._terms.get(0, 0), self._den)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        t, d = kernel.kadd(self._terms, self._den, other._terms, other._den)
        return PolyScalar(t, d, reduced=self.reduced and other.reduced,
                          _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        t, d = kernel.kneg(self._terms, self._den)
        return PolyScalar(t, d, reduced=self.reduced, _canonical=True)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            t, d = kernel.kscale(self._terms, self._den, f.numerator, f.denominator)
            return PolyScalar(t, d, reduced=self.reduced, _canonical=True)
        other = _coerce(other)
        if self.max_var_exp() + other.max_var_exp() > kernel.MAX_EXP:
            raise StructuralError("polynomial degree exceeds kernel exponent cap")
        t, d = kernel.kmul(self._terms, self._den, other._terms, other._den)
        return PolyScalar(t, d, _canonical=True)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        f = Fraction(scalar)
        return self * Fraction(f.denominator, f.numerator)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise StructuralError("polynomial powers must be nonnegative integers")
        out = PolyScalar.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PolyScalar.const(other)
        if not isinstance(other, PolyScalar):
            return NotImplemented
        return self._den == other._den and self._terms == other._terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None

    # -- calculus / geometry -------------------------------------------

    def diff(self, var):
        t, d = kernel.kdiff(self._terms, self._den, var)
        return PolyScalar(t, d, reduced=self.reduced, _canonical=True)

    def reduce_sphere(self):
        """Canonical representative modulo (x1^2 + ... + x8^2 - 1)."""
        if self.reduced:
            return self
        t, d = kernel.kreduce_sphere(self._terms, self._den)
        return PolyScalar(t, d, reduced=True, _canonical=True)

    def eval(self, point):
        """Exact evaluation at a point given as a sequence of rationals."""
        nums, pden = _point_ints(point)
        n, d = kernel.keval(self._terms, self._den, nums, pden)
        return Fraction(n, d)

    def integrate_sphere(self):
        """Integral over S^7 against the rotation-invariant probability
        measure; exact, valid for any representative."""
        n, d = kernel.kintegrate(self._terms, self._den)
        return Fraction(n, d)

    # -- formatting ----------------------------------------------------

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.terms():
            mono = "*".join(
                "x%d" % (i + 1) if e == 1 else "x%d^%d" % (i + 1, e)
                for i, e in enumerate(exps) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append("%s*%s" % (c, mono))
        out = " + ".join(parts)
        return out.replace("+ -", "- ")


def _coerce(value):
    if isinstance(value, PolyScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return PolyScalar.const(value)
    raise StructuralError("cannot coerce %r to PolyScalar" % (value,))


def _point_ints(point):
    """Common-denominator integer form of a rational point; pads to 8."""
    fr = [Fraction(c) for c in point]
    if len(fr) > NVARS:
        raise StructuralError("point has too many coordinates")
    fr += [Fraction(0)] * (NVARS - len(fr))
    pden = 1
    for f in fr:
        pden = pden * f.denominator // _gcd(pden, f.denominator)
    nums = tuple(int(f * pden) for f in fr)
    return nums, pden


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def integrate_product_sphere(a, b):
    """Exact integral of a*b over S^7 without forming the product."""
    n, d = kernel.kmul_integrate(a._terms, a._den, b._terms, b._den)
    return Fraction(n, d)


def integrate_moment_oracle(exps):
    """Independent moment oracle via the Dirichlet(1/2,...,1/2) reduction.

    The squared coordinates of a uniform point on S^7 are Dirichlet
    distributed, so the monomial moment equals
    prod_i (1/2)_(a_i) / (4)_(|a|) with rising factorials, for exponents
    2a_i (zero if any exponent is odd).  Used only as a test oracle for
    :meth:`PolyScalar.integrate_sphere`.
    """
    if any(e % 2 for e in exps):
        return Fraction(0)
    halves = [e // 2 for e in exps]
    num = Fraction(1)
    for a in halves:
        for m in range(a):
            num *= Fraction(1, 2) + m
    den = Fraction(1)
    for m in range(sum(halves)):
        den *= Fraction(NVARS, 2) + m
    return num / den


# -- vector fields and points ------------------------------------------


class PolyVector:
    """A tuple of PolyScalar components (an ambient-coordinate vector field)."""

    __slots__ = ("comps",)

    def __init__(self, comps):
        self.comps = tuple(_coerce(c) for c in comps)

    def __len__(self):
        return len(self.comps)

    def __getitem__(self, i):
        return self.comps[i]

    def __iter__(self):
        return iter(self.comps)

    def __add__(self, other):
        return PolyVector([a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return PolyVector([a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return PolyVector([-a for a in self.comps])

    def scale(self, s):
        return PolyVector([c * s for c in self.comps])

    def dot(self, other):
        acc = PolyScalar.zero()
        for a, b in zip(self.comps, other.comps):
            acc = acc + a * b
        return acc

    def eval(self, point):
        return tuple(c.eval(point) for c in self.comps)

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def map(self, fn):
        return PolyVector([fn(c) for c in self.comps])

    def __repr__(self):
        return "PolyVector(%s)" % (list(self.comps),)


class RationalPoint:
    """A point of S^7 with exactly unit rational coordinates."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        cs = tuple(Fraction(c) for c in coords)
        if len(cs) != NVARS:
            raise StructuralError("RationalPoint needs 8 coordinates")
        if sum(c * c for c in cs) != 1:
            raise StructuralError("coordinates do not satisfy sum x^2 = 1")
        self.coords = cs

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return NVARS

    def __eq__(self, other):
        return isinstance(other, RationalPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "RationalPoint(%s)" % (list(self.coords),)


def sample_rational_points(seed, count):
    """Deterministic rational points on S^7 via the stereographic map
    p = (2a_1, ..., 2a_7, |a|^2 - 1) / (|a|^2 + 1) from small random a in Q^7."""
    if count < 1:
        raise StructuralError("count must be >= 1")
    rng = random.Random(seed)
    points = []
    for _ in range(count):
        a = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(7)]
        points.append(stereographic_point(a))
    return points


def stereographic_point(a):
    a = [Fraction(c) for c in a]
    if len(a) != 7:
        raise StructuralError("stereographic parameter needs 7 coordinates")
    n2 = sum(c * c for c in a)
    denom = n2 + 1
    coords = [2 * c / denom for c in a] + [(n2 - 1) / denom]
    return RationalPoint(coords)


def random_poly(rng, degree, nterms, nvars=NVARS, coeff_bound=9):
    """Sparse random polynomial with small integer coefficients, reduced."""
    acc = PolyScalar.zero()
    for _ in range(nterms):
        d = rng.randint(0, degree)
        exps = [0] * NVARS
        for _ in range(d):
            exps[rng.randrange(nvars)] += 1
        c = 0
        while c == 0:
            c = rng.randint(-coeff_bound, coeff_bound)
        acc = acc + PolyScalar.monomial(tuple(exps), c)
    return acc.reduce_sphere() if nvars == NVARS else acc


# -- expression parsing (CLI input) -------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(x[1-8])|(\*\*|[-+*/^()]))")


def parse_poly(text):
    """Parse a polynomial expression in x1..x8 with integer or p/q
    coefficients, +, -, *, parentheses and ^ or ** powers."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos and not text[pos:].strip():
            break
        if m.end() == pos:
            raise StructuralError("cannot parse %r at offset %d" % (text, pos))
        num, var, op = m.groups()
        if num:
            tokens.append(("num", int(num)))
        elif var:
            tokens.append(("var", int(var[1]) - 1))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    if text[pos:].strip():
        raise StructuralError("cannot parse %r at offset %d" % (text, pos))

    state = {"i": 0}

    def peek():
        return tokens[state["i"]] if state["i"] < len(tokens) else (None, None)

    def take():
        tok = peek()
        state["i"] += 1
        return tok

    def parse_atom():
        kind, val = take()
        if kind == "num":
            return PolyScalar.const(val)
        if kind == "var":
            return PolyScalar.var(val)
        if kind == "op" and val == "(":
            e = parse_sum()
            kind, val = take()
            if (kind, val) != ("op", ")"):
                raise StructuralError("unbalanced parentheses in %r" % text)
            return e
        if kind == "op" and val == "-":
            return -parse_atom_with_pow()
        if kind == "op" and val == "+":
            return parse_atom_with_pow()
        raise StructuralError("unexpected token %r in %r" % (val, text))

    def parse_atom_with_pow():
        base = parse_atom()
        while peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num":
                raise StructuralError("exponent must be an integer in %r" % text)
            base = base ** val
        return base

    def parse_product():
        acc = parse_atom_with_pow()
        while True:
            kind, val = peek()
            if (kind, val) == ("op", "*"):
                take()
                acc = acc * parse_atom_with_pow()
            elif (kind, val) == ("op", "/"):
                take()
                kind, val = take()
                if kind != "num" or val == 0:
                    raise StructuralError("division only by nonzero integers in %r" % text)
                acc = acc / val
            else:
                return acc

    def parse_sum():
        acc = parse_product()
        while True:
            kind, val = peek()
            if (kind, val) == ("op", "+"):
                take()
                acc = acc + parse_product()
            elif (kind, val) == ("op", "-"):
                take()
                acc = acc - parse_product()
            else:
                return acc

    if not tokens:
        raise StructuralError("empty polynomial expression")
    result = parse_sum()
    if state["i"] != len(tokens):
        raise StructuralError("trailing tokens in %r" % text)
    return result
