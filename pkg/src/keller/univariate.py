"""Complete factorization of univariate integer polynomials.

Polynomials are dense lists of ints, ascending degree, no trailing zeros.
The pipeline is classical: squarefree split (Yun), distinct factors modulo
a suitable prime (Berlekamp), Hensel lifting past the factor coefficient
bound, then subset recombination with trial division. Everything is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import List, Tuple

from .errors import InternalInconsistencyError

IntPoly = List[int]


def strip(f: IntPoly) -> IntPoly:
    while f and f[-1] == 0:
        f.pop()
    return f


def deg(f: IntPoly) -> int:
    return len(f) - 1


def add(f: IntPoly, g: IntPoly) -> IntPoly:
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] += c
    return strip(out)


def sub(f: IntPoly, g: IntPoly) -> IntPoly:
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] -= c
    return strip(out)


def mul(f: IntPoly, g: IntPoly) -> IntPoly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return strip(out)


def scale(f: IntPoly, c: int) -> IntPoly:
    if not c:
        return []
    return [a * c for a in f]


def derivative(f: IntPoly) -> IntPoly:
    return strip([i * c for i, c in enumerate(f)][1:])


def content(f: IntPoly) -> int:
    g = 0
    for c in f:
        g = math.gcd(g, c)
    return g


def primitive(f: IntPoly) -> IntPoly:
    """Divide out the content and make the leading coefficient positive."""
    if not f:
        return []
    c = content(f)
    if f[-1] < 0:
        c = -c
    return [a // c for a in f]


def div_exact(f: IntPoly, g: IntPoly) -> IntPoly:
    """Exact division in Q[x] with an integrality check on the result."""
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    rem = [Fraction(c) for c in f]
    out = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    lg = Fraction(g[-1])
    while len(strip_frac(rem)) >= len(g):
        rem = strip_frac(rem)
        k = len(rem) - len(g)
        q = rem[-1] / lg
        out[k] = q
        for i, c in enumerate(g):
            rem[k + i] -= q * c
    rem = strip_frac(rem)
    if rem:
        raise InternalInconsistencyError("expected exact univariate division")
    res = []
    for q in strip_frac(out):
        if q.denominator != 1:
            raise InternalInconsistencyError("expected an integer quotient")
        res.append(q.numerator)
    return res


def strip_frac(f):
    while f and not f[-1]:
        f.pop()
    return f


def _prem(f: IntPoly, g: IntPoly) -> IntPoly:
    """Pseudo-remainder with content stripping along the way."""
    r = list(f)
    dg = deg(g)
    lg = g[-1]
    while r and deg(r) >= dg:
        dr = deg(r)
        lr = r[-1]
        r = strip(sub(scale(r, lg), [0] * (dr - dg) + scale(g, lr)))
        c = content(r)
        if c > 1:
            r = [a // c for a in r]
    return r


def gcd_z(f: IntPoly, g: IntPoly) -> IntPoly:
    """gcd of the primitive parts, positive leading coefficient."""
    a = primitive(list(f)) if f else []
    b = primitive(list(g)) if g else []
    if not a:
        return b
    if not b:
        return a
    if deg(a) < deg(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, primitive(r) if r else []
    return primitive(a)


def eval_at(f: IntPoly, x: int) -> int:
    out = 0
    for c in reversed(f):
        out = out * x + c
    return out


def squarefree_parts(f: IntPoly) -> List[Tuple[IntPoly, int]]:
    """Yun's algorithm on a primitive polynomial of degree >= 1.

    Returns [(part, multiplicity)] with each part squarefree and primitive,
    product of part**multiplicity equal to f up to sign.
    """
    d = derivative(f)
    g = gcd_z(f, d)
    if deg(g) == 0:
        return [(primitive(list(f)), 1)]
    w = div_exact(f, g)
    y = div_exact(d, g)
    out: List[Tuple[IntPoly, int]] = []
    i = 1
    while deg(w) > 0:
        z = sub(y, derivative(w))
        if not z:
            out.append((primitive(w), i))
            break
        h = gcd_z(w, z)
        if deg(h) > 0:
            out.append((primitive(h), i))
        w = div_exact(w, h) if deg(h) > 0 else w
        y = div_exact(z, h) if deg(h) > 0 else z
        i += 1
    return out


# -- arithmetic modulo a prime ----------------------------------------------


def _strip_mod(f: List[int]) -> List[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _mod(f: IntPoly, p: int) -> List[int]:
    return _strip_mod([c % p for c in f])


def _mul_mod(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _strip_mod(out)


def _divmod_mod(f, g, p):
    f = list(f)
    dg = deg(g)
    inv = pow(g[-1], p - 2, p)
    q = [0] * max(len(f) - dg, 0)
    while f and deg(f) >= dg:
        k = deg(f) - dg
        c = (f[-1] * inv) % p
        q[k] = c
        for i, b in enumerate(g):
            f[k + i] = (f[k + i] - c * b) % p
        _strip_mod(f)
    return _strip_mod(q), f


def _gcd_mod(f, g, p):
    a, b = list(f), list(g)
    while b:
        _, r = _divmod_mod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _monic_mod(f, p):
    if not f:
        return f
    inv = pow(f[-1], p - 2, p)
    return [(c * inv) % p for c in f]


def _pow_x_mod(e: int, f, p):
    """x**e modulo (f, p) by square and multiply."""
    result = [1]
    base = [0, 1]
    _, base = _divmod_mod(base, f, p)
    while e:
        if e & 1:
            result = _divmod_mod(_mul_mod(result, base, p), f, p)[1]
        e >>= 1
        if e:
            base = _divmod_mod(_mul_mod(base, base, p), f, p)[1]
    return result


def _nullspace_mod(matrix: List[List[int]], p: int) -> List[List[int]]:
    """Basis of the nullspace of a square matrix over F_p."""
    n = len(matrix)
    rows = [list(r) for r in matrix]
    pivot_col_of_row = []
    pivots = {}
    r = 0
    for col in range(n):
        pr = None
        for i in range(r, n):
            if rows[i][col] % p:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][col], p - 2, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(n):
            if i != r and rows[i][col] % p:
                fct = rows[i][col]
                rows[i] = [(a - fct * b) % p for a, b in zip(rows[i], rows[r])]
        pivots[col] = r
        r += 1
    basis = []
    free = [c for c in range(n) if c not in pivots]
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for col, prow in pivots.items():
            v[col] = (-rows[prow][fc]) % p
        basis.append(v)
    return basis


def _berlekamp(f: List[int], p: int) -> List[List[int]]:
    """Monic irreducible factors of a squarefree monic polynomial mod p."""
    n = deg(f)
    if n == 1:
        return [list(f)]
    # rows[i] = x**(i*p) mod f
    xp = _pow_x_mod(p, f, p)
    rows = []
    acc = [1]
    for i in range(n):
        row = acc + [0] * (n - len(acc))
        rows.append(row[:n])
        if i + 1 < n:
            acc = _divmod_mod(_mul_mod(acc, xp, p), f, p)[1]
    # v is in the fixed algebra iff v * (R - I) == 0 for row vector v
    a = [[(rows[i][j] - (1 if i == j else 0)) % p for i in range(n)] for j in range(n)]
    basis = _nullspace_mod(a, p)
    count = len(basis)
    factors = [list(f)]
    if count == 1:
        return factors
    for v in basis:
        vpoly = _strip_mod(list(v))
        if deg(vpoly) < 1:
            continue
        next_round = []
        for w in factors:
            if deg(w) <= 1:
                next_round.append(w)
                continue
            pieces = []
            rem = w
            for c in range(p):
                if deg(rem) < 1:
                    break
                shifted = list(vpoly)
                shifted[0] = (shifted[0] - c) % p
                g = _gcd_mod(rem, _strip_mod(shifted), p)
                if 0 < deg(g) < deg(rem):
                    pieces.append(g)
                    rem = _divmod_mod(rem, g, p)[0]
                elif deg(g) == deg(rem) and deg(g) > 0:
                    # the whole remainder is a multiple; keep going
                    continue
            if deg(rem) > 0:
                pieces.append(_monic_mod(rem, p))
            next_round.extend(pieces if pieces else [w])
        factors = next_round
        if len(factors) == count:
            break
    factors.sort()
    return factors


# -- Hensel lifting -----------------------------------------------------------


def _xgcd_mod(f, g, p):
    """(s, t) with s*f + t*g == 1 mod p for coprime f, g."""
    r0, r1 = list(f), list(g)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _divmod_mod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _strip_mod([(a - b) % p for a, b in _zip_pad(s0, _mul_mod(q, s1, p))])
        t0, t1 = t1, _strip_mod([(a - b) % p for a, b in _zip_pad(t0, _mul_mod(q, t1, p))])
    if deg(r0) != 0:
        raise InternalInconsistencyError("expected coprime polynomials mod p")
    inv = pow(r0[0], p - 2, p)
    s = [(c * inv) % p for c in s0]
    t = [(c * inv) % p for c in t0]
    return s, t


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


def _mod_m(f, m):
    return _strip_mod([c % m for c in f])


def _mul_m(f, g, m):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % m
    return _strip_mod(out)


def _divmod_monic_m(f, g, m):
    """Division by a monic polynomial with coefficients mod m."""
    f = list(f)
    dg = deg(g)
    q = [0] * max(len(f) - dg, 0)
    while f and deg(f) >= dg:
        k = deg(f) - dg
        c = f[-1] % m
        q[k] = c
        for i, b in enumerate(g):
            f[k + i] = (f[k + i] - c * b) % m
        _strip_mod(f)
    return _strip_mod(q), f


def _hensel_pair(f, g, h, s, t, p, target):
    """Lift f == g*h (mod p) with s*g + t*h == 1 to modulus >= target.

    All of f, g, h monic; returns (g*, h*) monic with f == g*h* mod p**k
    for the first p**k >= target.
    """
    m = p
    g, h, s, t = _mod_m(g, m), _mod_m(h, m), _mod_m(s, m), _mod_m(t, m)
    while m < target:
        m2 = m * m
        e = _mod_m(sub(f, mul(g, h)), m2)
        q, r = _divmod_monic_m(_mul_m(s, e, m2), h, m2)
        g1 = _mod_m(add(g, add(_mul_m(t, e, m2), _mul_m(q, g, m2))), m2)
        h1 = _mod_m(add(h, r), m2)
        b = _mod_m(sub(add(_mul_m(s, g1, m2), _mul_m(t, h1, m2)), [1]), m2)
        c, d = _divmod_monic_m(_mul_m(s, b, m2), h1, m2)
        s1 = _mod_m(sub(s, d), m2)
        t1 = _mod_m(sub(t, add(_mul_m(t, b, m2), _mul_m(c, g1, m2))), m2)
        g, h, s, t = g1, h1, s1, t1
        m = m2
    return g, h, m


def _hensel_multi(f, parts, p, target):
    """Lift a monic factorization mod p of monic f to modulus >= target."""
    if len(parts) == 1:
        return [f]
    k = len(parts) // 2
    g0 = [1]
    for q in parts[:k]:
        g0 = _mul_mod(g0, q, p)
    h0 = [1]
    for q in parts[k:]:
        h0 = _mul_mod(h0, q, p)
    s, t = _xgcd_mod(g0, h0, p)
    g, h, m = _hensel_pair(f, g0, h0, s, t, p, target)
    return _hensel_multi(g, parts[:k], p, m) + _hensel_multi(h, parts[k:], p, m)


_PRIMES = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
]


def _symmetric(f, m):
    half = m // 2
    out = []
    for c in f:
        c %= m
        if c > half:
            c -= m
        out.append(c)
    return strip(out)


def factor_squarefree_monic(f: IntPoly) -> List[IntPoly]:
    """Irreducible factors of a monic squarefree integer polynomial."""
    n = deg(f)
    if n <= 1:
        return [list(f)]
    fp = None
    for p in _PRIMES:
        fbar = _mod(f, p)
        if deg(fbar) != n:
            continue
        dbar = _mod(derivative(f), p)
        g = _gcd_mod(fbar, dbar, p)
        if deg(g) == 0:
            fp = p
            break
    if fp is None:
        raise InternalInconsistencyError("no usable prime for factorization")
    p = fp
    parts = _berlekamp(_monic_mod(_mod(f, p), p), p)
    if len(parts) == 1:
        return [list(f)]
    norm2 = math.isqrt(sum(c * c for c in f)) + 1
    bound = 2 * (1 << n) * norm2
    lifted = _hensel_multi(f, parts, p, bound)
    m = p
    while m < bound:
        m *= m
    lifted = [_mod_m(g, m) for g in lifted]

    result: List[IntPoly] = []
    current = list(f)
    idx = list(range(len(lifted)))
    size = 1
    while 2 * size <= len(idx):
        hit = None
        for combo in combinations(idx, size):
            cand = [1]
            for i in combo:
                cand = _mul_m(cand, lifted[i], m)
            cand = _symmetric(cand, m)
            if not cand or cand[-1] != 1:
                continue
            try:
                q = div_exact(current, cand)
            except InternalInconsistencyError:
                continue
            hit = (combo, cand, q)
            break
        if hit is None:
            size += 1
            continue
        combo, cand, q = hit
        result.append(cand)
        current = q
        idx = [i for i in idx if i not in combo]
    if deg(current) >= 1:
        result.append(current)
    check = [1]
    for g in result:
        check = mul(check, g)
    if check != list(f):
        raise InternalInconsistencyError("monic factorization failed to multiply back")
    return result


def factor_squarefree(f: IntPoly) -> List[IntPoly]:
    """Irreducible factors of a primitive squarefree integer polynomial."""
    f = primitive(list(f))
    n = deg(f)
    if n <= 0:
        return []
    if n == 1:
        return [f]
    lc = f[-1]
    if lc == 1:
        return factor_squarefree_monic(f)
    # make monic: F(x) = lc**(n-1) * f(x / lc)
    F = [f[i] * lc ** (n - 1 - i) for i in range(n)] + [1]
    monic_factors = factor_squarefree_monic(F)
    out = []
    for G in monic_factors:
        # map back through x -> lc * x and strip content
        g = [c * lc**i for i, c in enumerate(G)]
        out.append(primitive(g))
    check = [1]
    for g in out:
        check = mul(check, g)
    if primitive(check) != f:
        raise InternalInconsistencyError("factor recombination failed to multiply back")
    return sorted(out)


def factor(f: IntPoly) -> Tuple[int, List[Tuple[IntPoly, int]]]:
    """Full factorization: (content with sign, [(irreducible, multiplicity)])."""
    f = strip(list(f))
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    c = content(f)
    if f[-1] < 0:
        c = -c
    prim = [a // c for a in f]
    if deg(prim) == 0:
        return c, []
    out: List[Tuple[IntPoly, int]] = []
    for part, mult in squarefree_parts(prim):
        for g in factor_squarefree(part):
            out.append((g, mult))
    out.sort(key=lambda t: (t[0], t[1]))
    return c, out
