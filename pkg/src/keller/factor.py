"""Bivariate factorization over Q and the irreducibility-preservation tests.

The factor engine works on primitive squarefree parts: evaluate at a good
point on the second variable, factor the resulting univariate integer
polynomial, Hensel-lift that split back to a factorization over Q[[y]] to
enough precision, then recombine subsets by trial division. Non-monic
inputs are handled with the usual leading-coefficient substitution trick.

On top of that sit the maps-level checks: does each irreducible factor of
v keep a single irreducible image under f, are all unit generators of the
localized ring inside the image subalgebra, and a seeded sampling probe
for factorial closedness of the image subalgebra.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import univariate as uni
from .errors import (
    AlgebraicallyDependentError,
    DegreeCapExceeded,
    ExactDivisionError,
    InternalInconsistencyError,
)
from .groebner import RunStats, subring_membership
from .linalg import nullity
from .poly import (
    U12,
    Endomorphism,
    Polynomial,
    VarContext,
    _coeffs_in,
    _from_coeffs,
    _split_var_content,
    poly_gcd,
)

DEFAULT_FACTOR_DEGREE_CAP = 10


# -- squarefree decomposition -------------------------------------------------


def squarefree_decomposition(f: Polynomial) -> List[Tuple[Polynomial, int]]:
    """Split f into pairwise-coprime squarefree parts with multiplicities.

    The overall content is dropped: the product of part**multiplicity
    reconstructs f up to a constant. Parts come out canonically normalized.
    """
    if f.is_zero():
        raise ValueError("cannot decompose the zero polynomial")
    _, prim = f.content_and_primitive()
    merged: Dict[Polynomial, int] = {}
    for part, mult in _squarefree_rec(prim):
        key = part.normalized()
        merged[key] = merged.get(key, 0) + mult
    out = sorted(merged.items(), key=lambda t: (t[0].total_degree(), str(t[0])))
    return [(p, m) for p, m in out]


def _squarefree_rec(f: Polynomial) -> List[Tuple[Polynomial, int]]:
    if f.is_constant():
        return []
    main = None
    for i, name in enumerate(f.context.names):
        if f.degree_in(name) > 0:
            main = i
            break
    cont, prim = _split_var_content(f, main)
    out = [] if cont.is_constant() else _squarefree_rec(cont)
    name = f.context.names[main]
    d = prim.diff(name)
    g = poly_gcd(prim, d)
    if g.is_constant():
        out.append((prim.normalized(), 1))
        return out
    w = prim.exact_div(g)
    y = d.exact_div(g)
    i = 1
    while w.total_degree() > 0:
        z = y - w.diff(name)
        if z.is_zero():
            out.append((w.normalized(), i))
            break
        h = poly_gcd(w, z)
        if not h.is_constant():
            out.append((h.normalized(), i))
            w = w.exact_div(h)
            y = z.exact_div(h)
        else:
            y = z
        i += 1
    return out


# -- dense-in-x representation used by the y-adic lift ------------------------
#
# A polynomial is a list indexed by x-degree whose entries map y-degree to a
# Fraction. All products are truncated at a fixed y-precision.


Rep = List[Dict[int, Fraction]]


def _rep_strip(a: Rep) -> Rep:
    while a and not a[-1]:
        a.pop()
    return a


def _rep_from_poly(p: Polynomial, xi: int, yi: int, m: int) -> Rep:
    out: Rep = []
    for exps, c in p.terms.items():
        i, j = exps[xi], exps[yi]
        if j >= m:
            continue
        while len(out) <= i:
            out.append({})
        out[i][j] = out[i].get(j, Fraction(0)) + c
    for row in out:
        for k in [k for k, v in row.items() if not v]:
            del row[k]
    return _rep_strip(out)


def _rep_to_poly(a: Rep, context: VarContext, xi: int, yi: int) -> Polynomial:
    terms = {}
    base = [0] * context.arity
    for i, row in enumerate(a):
        for j, c in row.items():
            if c:
                e = list(base)
                e[xi] = i
                e[yi] = j
                terms[tuple(e)] = c
    return Polynomial(context, terms)


def _row_mul(a: Dict[int, Fraction], b: Dict[int, Fraction], m: int) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for j1, c1 in a.items():
        for j2, c2 in b.items():
            j = j1 + j2
            if j < m:
                out[j] = out.get(j, Fraction(0)) + c1 * c2
    return {j: c for j, c in out.items() if c}


def _row_addto(target: Dict[int, Fraction], src: Dict[int, Fraction], sign: int) -> None:
    for j, c in src.items():
        v = target.get(j, Fraction(0)) + sign * c
        if v:
            target[j] = v
        else:
            target.pop(j, None)


def _rep_mul(a: Rep, b: Rep, m: int) -> Rep:
    if not a or not b:
        return []
    out: Rep = [dict() for _ in range(len(a) + len(b) - 1)]
    for i1, r1 in enumerate(a):
        if not r1:
            continue
        for i2, r2 in enumerate(b):
            if r2:
                _row_addto(out[i1 + i2], _row_mul(r1, r2, m), 1)
    return _rep_strip(out)


def _rep_add(a: Rep, b: Rep, sign: int = 1) -> Rep:
    out: Rep = [dict(r) for r in a]
    while len(out) < len(b):
        out.append({})
    for i, r in enumerate(b):
        _row_addto(out[i], r, sign)
    return _rep_strip(out)


def _rep_trunc(a: Rep, m: int) -> Rep:
    out = [{j: c for j, c in row.items() if j < m} for row in a]
    return _rep_strip(out)


def _rep_divmod_monic(f: Rep, g: Rep, m: int) -> Tuple[Rep, Rep]:
    """Divide by g monic in x, coefficients taken modulo y**m."""
    rem = [dict(r) for r in f]
    dg = len(g) - 1
    if len(rem) <= dg:
        return [], _rep_strip(rem)
    q: Rep = [dict() for _ in range(len(rem) - dg)]
    for k in range(len(rem) - 1 - dg, -1, -1):
        lead = rem[k + dg] if k + dg < len(rem) else {}
        if not lead:
            continue
        q[k] = dict(lead)
        for i, gi in enumerate(g):
            if gi:
                _row_addto(rem[k + i], _row_mul(lead, gi, m), -1)
    return _rep_strip(q), _rep_strip(_rep_trunc(rem, m))


def _rep_mod_y(a: Rep) -> List[Fraction]:
    out = [row.get(0, Fraction(0)) for row in a]
    while out and not out[-1]:
        out.pop()
    return out


def _rep_const(c: Fraction) -> Rep:
    return [{0: c}] if c else []


def _uni_from_ints(f: Sequence[int]) -> Rep:
    return _rep_strip([({0: Fraction(c)} if c else {}) for c in f])


# univariate arithmetic over Q for the Bezout seed


def _q_strip(f: List[Fraction]) -> List[Fraction]:
    while f and not f[-1]:
        f.pop()
    return f


def _q_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _q_strip(out)


def _q_divmod(a, b):
    r = list(a)
    db = len(b) - 1
    inv = 1 / b[-1]
    q = [Fraction(0)] * max(len(r) - db, 0)
    while _q_strip(r) and len(r) - 1 >= db:
        k = len(r) - 1 - db
        c = r[-1] * inv
        q[k] = c
        for i, bc in enumerate(b):
            r[k + i] -= c * bc
        _q_strip(r)
    return _q_strip(q), r


def _q_xgcd(f, g):
    """(s, t) with s*f + t*g = 1 for coprime univariate rationals."""
    r0, r1 = list(f), list(g)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _q_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _q_sub(s0, _q_mul(q, s1))
        t0, t1 = t1, _q_sub(t0, _q_mul(q, t1))
    if len(r0) != 1:
        raise InternalInconsistencyError("expected coprime seed factors")
    inv = 1 / r0[0]
    return [c * inv for c in s0], [c * inv for c in t0]


def _q_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _q_strip(out)


def _lift_pair(F: Rep, g: Rep, h: Rep, s: Rep, t: Rep, m: int):
    """Lift F == g*h (mod y) with s*g + t*h == 1 (mod y) to precision y**m."""
    cur = 1
    while cur < m:
        nxt = min(2 * cur, m)
        e = _rep_trunc(_rep_add(F, _rep_mul(g, h, nxt), -1), nxt)
        q, r = _rep_divmod_monic(_rep_mul(s, e, nxt), h, nxt)
        g = _rep_trunc(_rep_add(_rep_add(g, _rep_mul(t, e, nxt)), _rep_mul(q, g, nxt)), nxt)
        h = _rep_trunc(_rep_add(h, r), nxt)
        b = _rep_add(
            _rep_add(_rep_mul(s, g, nxt), _rep_mul(t, h, nxt)),
            _rep_const(Fraction(-1)),
        )
        b = _rep_trunc(b, nxt)
        c, d = _rep_divmod_monic(_rep_mul(s, b, nxt), h, nxt)
        s = _rep_trunc(_rep_add(s, d, -1), nxt)
        t = _rep_trunc(_rep_add(t, _rep_add(_rep_mul(t, b, nxt), _rep_mul(c, g, nxt)), -1), nxt)
        cur = nxt
    return g, h


def _lift_tree(F: Rep, parts: List[List[int]], m: int) -> List[Rep]:
    """Lift a univariate split of F mod y to a factorization mod y**m."""
    if len(parts) == 1:
        return [_rep_trunc(F, m)]
    k = len(parts) // 2
    g0 = [1]
    for piece in parts[:k]:
        g0 = uni.mul(g0, piece)
    h0 = [1]
    for piece in parts[k:]:
        h0 = uni.mul(h0, piece)
    s, t = _q_xgcd([Fraction(c) for c in g0], [Fraction(c) for c in h0])
    g, h = _lift_pair(
        F,
        _uni_from_ints(g0),
        _uni_from_ints(h0),
        _rep_strip([({0: c} if c else {}) for c in s]),
        _rep_strip([({0: c} if c else {}) for c in t]),
        m,
    )
    return _lift_tree(g, parts[:k], m) + _lift_tree(h, parts[k:], m)


# -- the bivariate factor engine ----------------------------------------------


def _factor_univariate_image(f: Polynomial, name: str) -> List[Polynomial]:
    """Irreducible factors of a polynomial using only one variable."""
    d = f.degree_in(name)
    ctx = f.context
    vi = ctx.index(name)
    coeffs = [Fraction(0)] * (d + 1)
    for exps, c in f.terms.items():
        coeffs[exps[vi]] = c
    den = 1
    for c in coeffs:
        den = den * c.denominator // _int_gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    _, parts = uni.factor(ints)
    out = []
    for g, mult in parts:
        terms = {}
        for i, c in enumerate(g):
            if c:
                e = [0] * ctx.arity
                e[vi] = i
                terms[tuple(e)] = Fraction(c)
        out.extend([Polynomial(ctx, terms).normalized()] * mult)
    return out


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1


def _eval_y(rep_poly: Polynomial, xi: int, yi: int, c: int) -> List[int]:
    """Integer coefficient list of p(x, c) for an integer polynomial p."""
    coeffs: Dict[int, int] = {}
    for exps, v in rep_poly.terms.items():
        coeffs[exps[xi]] = coeffs.get(exps[xi], 0) + int(v) * c ** exps[yi]
    out = [0] * (max(coeffs) + 1)
    for i, v in coeffs.items():
        out[i] = v
    return uni.strip(out)


def _factor_squarefree_bivariate(part: Polynomial) -> List[Polynomial]:
    """Irreducible factors of a primitive squarefree bivariate polynomial.

    Splits off the coefficient content with respect to the chosen main
    variable first, so factors living in a single variable are not lost.
    """
    ctx = part.context
    used = part.variables_used()
    if len(used) == 1:
        return _factor_univariate_image(part, used[0])
    if len(used) > 2:
        raise ValueError("factorization supports at most two active variables")
    xn, yn = used[0], used[1]
    # keep the smaller x-degree for the monic trick
    if part.degree_in(xn) > part.degree_in(yn):
        xn, yn = yn, xn
    xi, yi = ctx.index(xn), ctx.index(yn)

    # a factor free of the main variable hides in the coefficient content
    cont, prim = _split_var_content(part, xi)
    if not cont.is_constant():
        both = _factor_squarefree_bivariate(cont) + _factor_squarefree_bivariate(prim)
        check = Polynomial.constant(ctx, 1)
        for g in both:
            check = check * g
        if check.content_and_primitive()[1] != part.content_and_primitive()[1]:
            raise InternalInconsistencyError("bivariate factors failed to multiply back")
        return sorted(both, key=lambda g: (g.total_degree(), str(g)))
    part = prim

    if part.degree_in(xn) == 1:
        return _linear_in_main(part, xi, yi)

    n = part.degree_in(xn)
    coeffs = _coeffs_in(part, xi)
    lc = coeffs[n]
    if lc.is_constant() and lc.constant_value() == 1:
        fstar = part
    else:
        scaled = {n: Polynomial.constant(ctx, 1)}
        for i in range(n):
            if i in coeffs:
                scaled[i] = coeffs[i] * lc ** (n - 1 - i)
        fstar = _from_coeffs(ctx, xi, scaled)

    # evaluation point with a squarefree image
    u = None
    point = None
    for c in _eval_points():
        cand = _eval_y(fstar, xi, yi, c)
        if len(cand) != n + 1:
            raise InternalInconsistencyError("monic image lost degree")
        if uni.deg(uni.gcd_z(cand, uni.derivative(cand))) == 0:
            u, point = cand, c
            break
    if u is None:
        raise InternalInconsistencyError("no squarefree evaluation point found")

    seed_parts = uni.factor_squarefree_monic(u)
    if len(seed_parts) == 1:
        return [part.normalized()]

    if point:
        yv = Polynomial.variable(ctx, yn)
        shift_map = {name: Polynomial.variable(ctx, name) for name in ctx.names}
        shift_map[yn] = yv + Polynomial.constant(ctx, point)
        fshift = fstar.substitute(shift_map)
    else:
        fshift = fstar
    m = fshift.degree_in(yn) + 1

    lifted = _lift_tree(_rep_from_poly(fshift, xi, yi, m), seed_parts, m)

    remaining = fshift
    found: List[Polynomial] = []
    idx = list(range(len(lifted)))
    size = 1
    while 2 * size <= len(idx):
        hit = None
        for combo in itertools.combinations(idx, size):
            cand = _rep_const(Fraction(1))
            for i in combo:
                cand = _rep_mul(cand, lifted[i], m)
            if any(c.denominator != 1 for row in cand for c in row.values()):
                continue
            cpoly = _rep_to_poly(cand, ctx, xi, yi)
            try:
                quotient = remaining.exact_div(cpoly)
            except ExactDivisionError:
                continue
            hit = (combo, cpoly, quotient)
            break
        if hit is None:
            size += 1
            continue
        combo, cpoly, remaining = hit
        found.append(cpoly)
        idx = [i for i in idx if i not in combo]
    if remaining.degree_in(xn) >= 1:
        found.append(remaining)

    # undo the shift, then undo the monic substitution x -> lc(y) * x
    out = []
    unshift = {name: Polynomial.variable(ctx, name) for name in ctx.names}
    if point:
        unshift[yn] = Polynomial.variable(ctx, yn) - Polynomial.constant(ctx, point)
    unmonic = {name: Polynomial.variable(ctx, name) for name in ctx.names}
    unmonic[xn] = lc * Polynomial.variable(ctx, xn)
    for g in found:
        if point:
            g = g.substitute(unshift)
        if not (lc.is_constant() and lc.constant_value() == 1):
            g = g.substitute(unmonic)
            # the substitution smuggles in powers of lc(y): strip the content
            # of g viewed as a polynomial in x
            g = _split_var_content(g, xi)[1]
        out.append(g.normalized())

    check = Polynomial.constant(ctx, 1)
    for g in out:
        check = check * g
    _, check_prim = check.content_and_primitive()
    _, part_prim = part.content_and_primitive()
    if check_prim != part_prim:
        raise InternalInconsistencyError("bivariate factors failed to multiply back")
    return sorted(out, key=lambda g: (g.total_degree(), str(g)))


def _linear_in_main(part: Polynomial, xi: int, yi: int) -> List[Polynomial]:
    """Factor a polynomial of degree 1 in its main variable."""
    coeffs = _coeffs_in(part, xi)
    a = coeffs.get(1)
    b = coeffs.get(0, Polynomial.zero(part.context))
    if b.is_zero():
        # a(y) * x
        out = _factor_univariate_image(a, part.context.names[yi]) if not a.is_constant() else []
        out.append(Polynomial.variable(part.context, part.context.names[xi]))
        return out
    g = poly_gcd(a, b)
    if g.is_constant():
        return [part.normalized()]
    rest = part.exact_div(g)
    out = _factor_univariate_image(g, part.context.names[yi])
    out.append(rest.normalized())
    return out


def _eval_points():
    yield 0
    for k in range(1, 700):
        yield k
        yield -k


# -- public factorization type and entry point --------------------------------


@dataclass(frozen=True)
class Factorization:
    """content * product(factor**multiplicity) reconstructs the input."""

    content: Fraction
    factors: Tuple[Tuple[Polynomial, int], ...]
    absolute: Optional[Tuple[Optional[bool], ...]] = None

    def product(self) -> Polynomial:
        if not self.factors:
            raise ValueError("no factors to multiply")
        ctx = self.factors[0][0].context
        acc = Polynomial.constant(ctx, self.content)
        for g, mult in self.factors:
            acc = acc * g**mult
        return acc

    def product_in(self, context: VarContext) -> Polynomial:
        acc = Polynomial.constant(context, self.content)
        for g, mult in self.factors:
            acc = acc * g**mult
        return acc

    def multiset(self) -> List[Polynomial]:
        out: List[Polynomial] = []
        for g, mult in self.factors:
            out.extend([g] * mult)
        return out


def factor_bivariate(
    f: Polynomial,
    *,
    degree_cap: int = DEFAULT_FACTOR_DEGREE_CAP,
    absolute: bool = False,
) -> Factorization:
    """Complete factorization over Q of a polynomial in at most 2 variables.

    Refuses inputs above the degree cap. With absolute=True, each factor
    additionally carries a verdict from the absolute-irreducibility
    certificate: True, False, or None when the certificate is inconclusive.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if f.total_degree() > degree_cap:
        raise DegreeCapExceeded(
            f"degree {f.total_degree()} exceeds the factorization cap {degree_cap}"
        )
    used = f.variables_used()
    if len(used) > 2:
        raise ValueError("factorization supports at most two variables")
    if f.is_constant():
        return Factorization(f.constant_value(), (), None)

    collected: Dict[Polynomial, int] = {}
    for part, mult in squarefree_decomposition(f):
        for g in _factor_squarefree_bivariate(part):
            key = g.normalized()
            collected[key] = collected.get(key, 0) + mult
    factors = tuple(
        sorted(collected.items(), key=lambda t: (t[0].total_degree(), str(t[0])))
    )

    prod = Polynomial.constant(f.context, 1)
    for g, mult in factors:
        prod = prod * g**mult
    lead_exp, lead_coeff = max(prod.terms.items(), key=lambda t: t[0])
    content = f.terms.get(lead_exp, Fraction(0)) / lead_coeff
    if prod * content != f:
        raise InternalInconsistencyError("factorization failed to multiply back")

    flags: Optional[Tuple[Optional[bool], ...]] = None
    if absolute:
        flags = tuple(absolute_irreducibility(g) for g, _ in factors)
    return Factorization(content, factors, flags)


# -- absolute irreducibility certificate ---------------------------------------


def absolute_irreducibility(f: Polynomial) -> Optional[bool]:
    """Certify whether a Q-irreducible polynomial stays irreducible over C.

    Counts the solutions of the Ruppert-style differential system; one
    solution certifies absolute irreducibility, more certify a proper
    splitting over C. Returns None when the input is out of the
    certificate's reach.
    """
    if f.is_zero() or f.is_constant():
        raise ValueError("expected a nonconstant polynomial")
    if f.total_degree() == 1:
        return True
    used = f.variables_used()
    if len(used) == 1:
        # a univariate polynomial of degree >= 2 splits into linears over C
        return False
    if len(used) > 2:
        return None
    ctx = f.context
    xn = used[0]
    yn = used[1]
    xi, yi = ctx.index(xn), ctx.index(yn)
    m1, m2 = f.degree_in(xn), f.degree_in(yn)
    fx = f.diff(xn)
    fy = f.diff(yn)

    def mono(a: int, b: int) -> Polynomial:
        e = [0] * ctx.arity
        e[xi] = a
        e[yi] = b
        return Polynomial.monomial(ctx, tuple(e))

    columns: List[Polynomial] = []
    # g-block: deg_x <= m1 - 1, deg_y <= m2
    for a in range(m1):
        for b in range(m2 + 1):
            g = mono(a, b)
            columns.append(f * g.diff(yn) - g * fy)
    # h-block: deg_x <= m1, deg_y <= m2 - 1
    for a in range(m1 + 1):
        for b in range(m2):
            h = mono(a, b)
            columns.append(-(f * h.diff(xn)) + h * fx)

    monomials = sorted({e for col in columns for e in col.terms})
    matrix = [
        [col.terms.get(e, Fraction(0)) for col in columns] for e in monomials
    ]
    dim = nullity(matrix)
    if dim == 1:
        return True
    if dim >= 2:
        return False
    return None


# -- irreducibility preservation under the map ---------------------------------


@dataclass(frozen=True)
class PreservationReport:
    """Whether the image of an irreducible v-factor stays irreducible."""

    source: Polynomial
    image: Polynomial
    image_factors: Factorization
    preserved: bool


def image_under(f: Endomorphism, g: Polynomial) -> Polynomial:
    """g(p, q) in the x,y context for a polynomial g in u1, u2."""
    return g.substitute({"u1": f.p, "u2": f.q})


def stays_irreducible(
    vj: Polynomial,
    f: Endomorphism,
    *,
    degree_cap: int = DEFAULT_FACTOR_DEGREE_CAP,
) -> PreservationReport:
    """Test whether the image vj(p, q) is still irreducible.

    vj must be irreducible over Q. Preserved means the image has exactly
    one irreducible factor with multiplicity 1.
    """
    check = factor_bivariate(vj, degree_cap=max(degree_cap, vj.total_degree()))
    if len(check.factors) != 1 or check.factors[0][1] != 1:
        raise ValueError("expected an irreducible polynomial to test")
    image = image_under(f, vj)
    if image.is_constant():
        raise AlgebraicallyDependentError(
            "the image of the tested factor is constant"
        )
    fact = factor_bivariate(image, degree_cap=degree_cap)
    preserved = len(fact.factors) == 1 and fact.factors[0][1] == 1
    return PreservationReport(vj, image, fact, preserved)


# -- localization units ---------------------------------------------------------


@dataclass(frozen=True)
class UnitWitness:
    """One irreducible factor of v(p, q), tagged by subring membership."""

    factor: Polynomial
    inside: bool
    membership: Optional[Polynomial]


@dataclass(frozen=True)
class UnitsVerdict:
    all_units_in_Cpq: bool
    witnesses: Tuple[UnitWitness, ...]


def localization_units_check(
    f: Endomorphism,
    v: Polynomial,
    *,
    degree_cap: int = DEFAULT_FACTOR_DEGREE_CAP,
    max_spairs: Optional[int] = None,
    max_degree: Optional[int] = None,
    stats: Optional[RunStats] = None,
) -> UnitsVerdict:
    """Check that every unit generator of C[x,y][1/v(p,q)] lies in C[p,q].

    The unit group of the localization is generated by constants and the
    irreducible factors of v(p, q), so the check tags each such factor via
    subring membership.
    """
    if v.is_zero():
        raise ValueError("v must be nonzero")
    if v.is_constant():
        return UnitsVerdict(True, ())
    vf = factor_bivariate(v, degree_cap=max(degree_cap, v.total_degree()))
    seen: Dict[Polynomial, UnitWitness] = {}
    for vj, _ in vf.factors:
        image = image_under(f, vj)
        if image.is_constant():
            raise AlgebraicallyDependentError(
                "a factor of v has constant image under the map"
            )
        wf = factor_bivariate(image, degree_cap=degree_cap)
        for w, _ in wf.factors:
            if w in seen:
                continue
            member = subring_membership(
                w, f, max_spairs=max_spairs, max_degree=max_degree, stats=stats
            )
            seen[w] = UnitWitness(w, member is not None, member)
    witnesses = tuple(
        seen[w]
        for w in sorted(seen, key=lambda g: (g.total_degree(), str(g)))
    )
    return UnitsVerdict(all(wit.inside for wit in witnesses), witnesses)


# -- factorially closed probe ----------------------------------------------------


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of the sampling probe for factorial closedness.

    violation holds a pair (a1, a2) with a1 * a2 in the image subalgebra
    but a1 outside it; None means no violation was found. The probe can
    refute factorial closedness, never prove it.
    """

    violation: Optional[Tuple[Polynomial, Polynomial]]
    checked: int


_PROBE_FIXED = (
    {(1, 0): Fraction(1)},
    {(0, 1): Fraction(1)},
    {(1, 1): Fraction(1)},
    {(1, 0): Fraction(1), (0, 1): Fraction(1)},
    {(1, 0): Fraction(1), (0, 1): Fraction(-1)},
    {(2, 0): Fraction(1), (0, 1): Fraction(-1)},
    {(0, 2): Fraction(1), (1, 0): Fraction(-1)},
)


def factorially_closed_probe(
    f: Endomorphism,
    *,
    samples: int = 12,
    degree_bound: int = 16,
    seed: int = 0,
    max_spairs: Optional[int] = None,
    max_degree: Optional[int] = None,
) -> ProbeResult:
    """Sample products forced into C[p,q] and test both cofactors for membership.

    Each sample takes a polynomial G, factors the image G(p, q) in C[x,y],
    splits its factor multiset into two nonempty products a1 * a2 = G(p,q),
    and requires both halves to be members. Finding a half outside is a
    witness against factorial closedness (and so against invertibility).
    """
    rng = random.Random(seed)
    candidates = [Polynomial(U12, t) for t in _PROBE_FIXED]

    def random_candidate() -> Polynomial:
        terms = {}
        for _ in range(rng.randint(2, 4)):
            e = (rng.randint(0, 2), rng.randint(0, 2))
            c = rng.randint(-3, 3)
            if c:
                terms[e] = terms.get(e, Fraction(0)) + c
        return Polynomial(U12, {e: c for e, c in terms.items() if c})

    checked = 0
    attempts = 0
    queue = list(candidates)
    while checked < samples and attempts < samples * 6:
        attempts += 1
        G = queue.pop(0) if queue else random_candidate()
        if G.is_zero() or G.is_constant():
            continue
        W = image_under(f, G)
        if W.is_constant():
            continue
        if W.total_degree() > degree_bound:
            continue
        fact = factor_bivariate(W, degree_cap=degree_bound)
        pieces = fact.multiset()
        if not pieces:
            continue
        if len(pieces) == 1:
            a1 = pieces[0]
            a2 = W.exact_div(a1)
        else:
            k = rng.randint(1, len(pieces) - 1)
            chosen = rng.sample(range(len(pieces)), k)
            a1 = Polynomial.constant(W.context, 1)
            for i in chosen:
                a1 = a1 * pieces[i]
            a2 = W.exact_div(a1)
        checked += 1
        first = subring_membership(a1, f, max_spairs=max_spairs, max_degree=max_degree)
        if first is None:
            return ProbeResult((a1, a2), checked)
        if not a2.is_constant():
            second = subring_membership(
                a2, f, max_spairs=max_spairs, max_degree=max_degree
            )
            if second is None:
                return ProbeResult((a2, a1), checked)
    return ProbeResult(None, checked)
