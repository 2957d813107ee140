"""Exact polynomial kernel, pure-Python reference implementation.

A polynomial in the eight variables x1..x8 over Q is a pair ``(terms, den)``:
``terms`` maps a packed exponent key to an integer numerator and ``den`` is a
positive common denominator.  The key packs the exponents e0..e7 as bytes,

    key = e0 | e1 << 8 | ... | e7 << 56,

so multiplying monomials is integer addition of keys.  Exponents must stay
below 128, which keeps byte sums carry-free and keys positive.

Canonical form: no zero numerators, den > 0, gcd(content, den) = 1.  The zero
polynomial is ``({}, 1)``.  All functions return canonical pairs and never
mutate their inputs.

The compiled twin (_kernel_c) implements the same functions with identical
semantics; outputs must match exactly so either backend can serve the rest of
the package.
"""

from math import gcd

NVARS = 8
EXP_BITS = 8
EXP_MASK = 0xFF
MAX_EXP = 127

# low bit of every exponent byte; (k1 ^ k2) & ODD_MASK == 0 iff every
# exponent of the product monomial k1 + k2 is even (byte sums are carry-free)
ODD_MASK = 0x0101010101010101

# substitution x8^2 -> 1 - x1^2 - ... - x7^2, as (key delta, coefficient)
_SPHERE_SUB = [(0, 1)] + [(2 << (EXP_BITS * i), -1) for i in range(NVARS - 1)]

_X8_SHIFT = EXP_BITS * (NVARS - 1)


def unpack(key):
    """Return the 8-tuple of exponents packed in ``key``."""
    return tuple((key >> (EXP_BITS * i)) & EXP_MASK for i in range(NVARS))


def pack(exps):
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > MAX_EXP:
            raise ValueError("exponent out of range: %r" % (e,))
        key |= e << (EXP_BITS * i)
    return key


def normalize(terms, den):
    """Canonicalize an integer-coefficient dict with common denominator."""
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    clean = {k: c for k, c in terms.items() if c}
    if not clean:
        return {}, 1
    if den < 0:
        den = -den
        clean = {k: -c for k, c in clean.items()}
    g = den
    for c in clean.values():
        g = gcd(g, c)
        if g == 1:
            break
    if g > 1:
        clean = {k: c // g for k, c in clean.items()}
        den //= g
    return clean, den


def kadd(at, ad, bt, bd):
    if ad == bd:
        out = dict(at)
        for k, c in bt.items():
            nc = out.get(k, 0) + c
            if nc:
                out[k] = nc
            elif k in out:
                del out[k]
        if ad == 1:
            return (out, 1) if out else ({}, 1)
        return normalize(out, ad)
    g = gcd(ad, bd)
    la, lb = bd // g, ad // g
    den = ad * la
    out = {k: c * la for k, c in at.items()}
    for k, c in bt.items():
        nc = out.get(k, 0) + c * lb
        if nc:
            out[k] = nc
        elif k in out:
            del out[k]
    return normalize(out, den)


def kneg(at, ad):
    return {k: -c for k, c in at.items()}, ad


def kscale(at, ad, num, den):
    """Multiply by the rational num/den."""
    if num == 0:
        return {}, 1
    return normalize({k: c * num for k, c in at.items()}, ad * den)


def kmul(at, ad, bt, bd):
    if not at or not bt:
        return {}, 1
    if len(at) > len(bt):
        at, bt = bt, at
        ad, bd = bd, ad
    out = {}
    for k1, c1 in at.items():
        for k2, c2 in bt.items():
            k = k1 + k2
            nc = out.get(k, 0) + c1 * c2
            if nc:
                out[k] = nc
            elif k in out:
                del out[k]
    return normalize(out, ad * bd)


def kdiff(at, ad, var):
    """Partial derivative with respect to variable index ``var``."""
    shift = EXP_BITS * var
    out = {}
    for k, c in at.items():
        e = (k >> shift) & EXP_MASK
        if e:
            out[k - (1 << shift)] = c * e
    return normalize(out, ad)


def kreduce_sphere(at, ad):
    """Canonical representative modulo (x1^2 + ... + x8^2 - 1).

    Eliminates every monomial with x8-exponent >= 2 by substituting
    x8^2 = 1 - x1^2 - ... - x7^2 until exhaustion.
    """
    out = {}
    work = at
    while True:
        high = None
        for k, c in work.items():
            if (k >> _X8_SHIFT) >= 2:
                if high is None:
                    high = {}
                high[k] = c
            else:
                nc = out.get(k, 0) + c
                if nc:
                    out[k] = nc
                elif k in out:
                    del out[k]
        if high is None:
            break
        work = {}
        for k, c in high.items():
            base = k - (2 << _X8_SHIFT)
            for dk, dc in _SPHERE_SUB:
                kk = base + dk
                nc = work.get(kk, 0) + c * dc
                if nc:
                    work[kk] = nc
                elif kk in work:
                    del work[kk]
    return normalize(out, ad)


def keval(at, ad, nums, pden):
    """Evaluate at the rational point (nums[i]/pden); returns (num, den)."""
    if not at:
        return 0, 1
    maxdeg = 0
    degs = {}
    for k in at:
        d = 0
        kk = k
        while kk:
            d += kk & EXP_MASK
            kk >>= EXP_BITS
        degs[k] = d
        if d > maxdeg:
            maxdeg = d
    total = 0
    for k, c in at.items():
        v = c * pden ** (maxdeg - degs[k])
        kk = k
        i = 0
        while kk:
            e = kk & EXP_MASK
            if e:
                v *= nums[i] ** e
            kk >>= EXP_BITS
            i += 1
        total += v
    den = ad * pden ** maxdeg
    if total == 0:
        return 0, 1
    g = gcd(total, den)
    total //= g
    den //= g
    if den < 0:
        total, den = -total, -den
    return total, den


_MOMENT_CACHE = {}


def _moment(key):
    """Sphere moment of a monomial against the uniform probability measure.

    For exponents 2a = (2a_1, ..., 2a_8) the moment is
    prod_i (2a_i - 1)!! / prod_{m=0}^{|a|-1} (8 + 2m); zero if any exponent
    is odd.  Returned as a normalized integer pair (num, den).
    """
    cached = _MOMENT_CACHE.get(key)
    if cached is not None:
        return cached
    num = 1
    half = 0
    kk = key
    while kk:
        e = kk & EXP_MASK
        if e & 1:
            _MOMENT_CACHE[key] = (0, 1)
            return 0, 1
        for j in range(1, e, 2):
            num *= j
        half += e >> 1
        kk >>= EXP_BITS
    den = 1
    for m in range(half):
        den *= NVARS + 2 * m
    g = gcd(num, den)
    result = (num // g, den // g)
    _MOMENT_CACHE[key] = result
    return result


def kintegrate(at, ad):
    """Integral over the unit 7-sphere (probability measure); (num, den)."""
    tnum, tden = 0, 1
    for k, c in at.items():
        if k & ODD_MASK:
            # some exponent is odd, the term integrates to zero
            continue
        mn, md = _moment(k)
        tnum = tnum * md + c * mn * tden
        tden *= md
        g = gcd(tnum, tden)
        if g > 1:
            tnum //= g
            tden //= g
    if tnum == 0:
        return 0, 1
    den = tden * ad
    g = gcd(tnum, den)
    tnum //= g
    den //= g
    if den < 0:
        tnum, den = -tnum, -den
    return tnum, den


def kmul_integrate(at, ad, bt, bd):
    """Integral over the sphere of a product, without forming the product.

    Convolves only the even-parity pairs (odd monomials integrate to zero)
    and integrates termwise with cached moments.  Returns (num, den).
    """
    if not at or not bt:
        return 0, 1
    if len(at) > len(bt):
        at, bt = bt, at
        ad, bd = bd, ad
    prod = {}
    for k1, c1 in at.items():
        for k2, c2 in bt.items():
            if (k1 ^ k2) & ODD_MASK:
                continue
            k = k1 + k2
            nc = prod.get(k, 0) + c1 * c2
            if nc:
                prod[k] = nc
            elif k in prod:
                del prod[k]
    return kintegrate(prod, ad * bd)
