# cython: language_level=3, boundscheck=False, wraparound=False
"""Exact polynomial kernel, compiled twin of _kernel_pure.

Same data layout and same results, bit for bit: dicts mapping packed
exponent keys to integer numerators plus a positive common denominator.
Coefficients are Python ints (they outgrow machine words), so the speedup
comes from compiled loop structure, not native arithmetic.
"""

from math import gcd

NVARS = 8
EXP_BITS = 8
EXP_MASK = 0xFF
MAX_EXP = 127
ODD_MASK = 0x0101010101010101

_SPHERE_SUB = [(0, 1)] + [(2 << (EXP_BITS * i), -1) for i in range(NVARS - 1)]

# key deltas as Python ints: C int shifts would overflow at 56 bits
_VAR_DELTA = [1 << (EXP_BITS * i) for i in range(NVARS)]
_X8_SHIFT = EXP_BITS * (NVARS - 1)
_X8_DELTA = 2 << _X8_SHIFT


def unpack(key):
    return tuple((key >> (EXP_BITS * i)) & EXP_MASK for i in range(NVARS))


def pack(exps):
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > MAX_EXP:
            raise ValueError("exponent out of range: %r" % (e,))
        key |= e << (EXP_BITS * i)
    return key


def normalize(dict terms, den):
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    cdef dict clean = {}
    for k, c in terms.items():
        if c:
            clean[k] = c
    if not clean:
        return {}, 1
    if den < 0:
        den = -den
        for k in list(clean):
            clean[k] = -clean[k]
    g = den
    for c in clean.values():
        g = gcd(g, c)
        if g == 1:
            break
    if g > 1:
        for k in list(clean):
            clean[k] = clean[k] // g
        den = den // g
    return clean, den


def kadd(dict at, ad, dict bt, bd):
    cdef dict out
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
    la = bd // g
    lb = ad // g
    den = ad * la
    out = {}
    for k, c in at.items():
        out[k] = c * la
    for k, c in bt.items():
        nc = out.get(k, 0) + c * lb
        if nc:
            out[k] = nc
        elif k in out:
            del out[k]
    return normalize(out, den)


def kneg(dict at, ad):
    cdef dict out = {}
    for k, c in at.items():
        out[k] = -c
    return out, ad


def kscale(dict at, ad, num, den):
    if num == 0:
        return {}, 1
    cdef dict out = {}
    for k, c in at.items():
        out[k] = c * num
    return normalize(out, ad * den)


def kmul(dict at, ad, dict bt, bd):
    if not at or not bt:
        return {}, 1
    if len(at) > len(bt):
        at, bt = bt, at
        ad, bd = bd, ad
    cdef dict out = {}
    for k1, c1 in at.items():
        for k2, c2 in bt.items():
            k = k1 + k2
            nc = out.get(k, 0) + c1 * c2
            if nc:
                out[k] = nc
            elif k in out:
                del out[k]
    return normalize(out, ad * bd)


def kdiff(dict at, ad, var):
    shift = EXP_BITS * var
    delta = _VAR_DELTA[var]
    cdef dict out = {}
    cdef long e
    for k, c in at.items():
        e = (k >> shift) & EXP_MASK
        if e:
            out[k - delta] = c * e
    return normalize(out, ad)


def kreduce_sphere(dict at, ad):
    cdef dict out = {}
    cdef dict work = at
    cdef dict high, nwork
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
        nwork = {}
        for k, c in high.items():
            base = k - _X8_DELTA
            for dk, dc in _SPHERE_SUB:
                kk = base + dk
                nc = nwork.get(kk, 0) + c * dc
                if nc:
                    nwork[kk] = nc
                elif kk in nwork:
                    del nwork[kk]
        work = nwork
    return normalize(out, ad)


def keval(dict at, ad, nums, pden):
    if not at:
        return 0, 1
    cdef dict degs = {}
    cdef long d, maxdeg = 0
    cdef int i
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
    cached = _MOMENT_CACHE.get(key)
    if cached is not None:
        return cached
    num = 1
    half = 0
    cdef long e, j
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


def kintegrate(dict at, ad):
    tnum, tden = 0, 1
    for k, c in at.items():
        if k & ODD_MASK:
            continue
        mn, md = _moment(k)
        if mn == 0:
            continue
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


def kmul_integrate(dict at, ad, dict bt, bd):
    if not at or not bt:
        return 0, 1
    if len(at) > len(bt):
        at, bt = bt, at
        ad, bd = bd, ad
    cdef dict prod = {}
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
