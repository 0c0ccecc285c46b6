"""Groebner bases over Q with an integer fraction-free core.

The engine works on primitive integer term maps: reductions scale the
polynomial being reduced instead of dividing, so no Fraction arithmetic
happens in the hot loop. Public results are converted back to canonical
`Polynomial` values. Reduced bases are deterministic: elements are
canonically normalized and sorted by their leading monomial, so two runs
over shuffled generators produce identical output.

Resource use is capped: a run raises ResourceCapExceeded when it exceeds
its S-pair budget or when an intermediate term passes the degree cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from heapq import heappop, heappush
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import (
    AlgebraicallyDependentError,
    ContextMismatchError,
    ResourceCapExceeded,
    UnknownVariableError,
    ZeroKernelError,
)
from .linalg import solve_sparse
from .poly import U12, U123, Endomorphism, Polynomial, VarContext

DEFAULT_MAX_SPAIRS = 50_000
DEFAULT_MAX_DEGREE = 60


@dataclass
class RunStats:
    """Mutable counters describing the work a computation performed."""

    spairs: int = 0
    max_degree: int = 0
    millis: float = 0.0

    def note_degree(self, d: int) -> None:
        if d > self.max_degree:
            self.max_degree = d

    def merge(self, other: "RunStats") -> None:
        self.spairs += other.spairs
        self.max_degree = max(self.max_degree, other.max_degree)
        self.millis += other.millis


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: "lex", "grevlex", or "block".

    A block order eliminates the first ``k`` context variables: monomials
    are compared grevlex on the first block, ties broken grevlex on the
    rest. Orders are context-width agnostic until keyed.
    """

    kind: str
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if self.kind == "block" and self.k < 1:
            raise ValueError("a block order needs k >= 1 eliminated variables")
        if self.kind != "block" and self.k:
            raise ValueError("only block orders take a block width")

    def key_func(self, arity: int):
        if self.kind == "block" and self.k >= arity:
            raise ValueError(f"block width {self.k} must be below arity {arity}")
        if self.kind == "lex":
            return lambda e: e
        if self.kind == "grevlex":
            return _grevlex_key
        k = self.k
        return lambda e: (_grevlex_key(e[:k]), _grevlex_key(e[k:]))

    def leading(self, p: Polynomial):
        """(exponent, coefficient) of the greatest term under this order."""
        if p.is_zero():
            raise ValueError("the zero polynomial has no leading term")
        key = self.key_func(p.context.arity)
        e = max(p.terms, key=key)
        return e, p.terms[e]


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def block_order(k: int) -> MonomialOrder:
    return MonomialOrder("block", k)


def _grevlex_key(e: tuple):
    return (sum(e), tuple(-x for x in reversed(e)))


@dataclass(frozen=True)
class Ideal:
    """A finitely generated ideal; zero generators are dropped on entry."""

    context: VarContext
    generators: tuple

    def __init__(self, context: VarContext, generators: Iterable[Polynomial]):
        gens = []
        for g in generators:
            if g.context != context:
                raise ContextMismatchError("ideal generators must share the context")
            if not g.is_zero():
                gens.append(g)
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "generators", tuple(gens))


# -- integer fraction-free engine ------------------------------------------
#
# A "row" is (terms, lt_exp, lt_coeff) with integer coefficients, primitive,
# and lt_coeff > 0 under the active order.


def _int_terms(p: Polynomial) -> dict:
    prim = p.normalized()
    return {e: c.numerator for e, c in prim.terms.items()}


def _row(terms: dict, keyf) -> tuple:
    lt = max(terms, key=keyf)
    if terms[lt] < 0:
        terms = {e: -c for e, c in terms.items()}
    return (terms, lt, terms[lt])


def _content_strip(d: dict) -> int:
    g = 0
    for v in d.values():
        g = math.gcd(g, v)
        if g == 1:
            return 1
    if g > 1:
        for k in d:
            d[k] //= g
    return g


def _reduce_int(
    terms: dict,
    rows: Sequence[tuple],
    keyf,
    max_degree: int,
    stats: RunStats,
):
    """Fully reduce an integer term map against rows.

    Returns (reduced_terms, multiplier) with
    multiplier * input == reduced + (ideal member); multiplier is a
    positive Fraction.
    """
    work = dict(terms)
    out: dict = {}
    lam_num = 1
    lam_den = 1
    steps = 0
    while work:
        e = max(work, key=keyf)
        c = work.pop(e)
        red = None
        for row in rows:
            lt = row[1]
            for a, b in zip(e, lt):
                if a < b:
                    break
            else:
                red = row
                break
        if red is None:
            out[e] = c
            continue
        rterms, rlt, rlc = red
        g = math.gcd(abs(c), rlc)
        scale = rlc // g
        ratio = c // g
        if scale != 1:
            lam_num *= scale
            for k in work:
                work[k] *= scale
            for k in out:
                out[k] *= scale
        shift = tuple(a - b for a, b in zip(e, rlt))
        for me, mc in rterms.items():
            if me == rlt:
                continue
            ke = tuple(a + b for a, b in zip(me, shift))
            nv = work.get(ke, 0) - ratio * mc
            if nv:
                if ke not in work:
                    d = sum(ke)
                    stats.note_degree(d)
                    if d > max_degree:
                        raise ResourceCapExceeded(
                            f"intermediate degree {d} exceeds the cap {max_degree}"
                        )
                work[ke] = nv
            else:
                work.pop(ke, None)
        steps += 1
        if steps % 32 == 0 and work:
            g2 = 0
            for v in work.values():
                g2 = math.gcd(g2, v)
                if g2 == 1:
                    break
            if g2 > 1:
                for v in out.values():
                    g2 = math.gcd(g2, v)
                    if g2 == 1:
                        break
            if g2 > 1:
                for k in work:
                    work[k] //= g2
                for k in out:
                    out[k] //= g2
                lam_den *= g2
    return out, Fraction(lam_num, lam_den)


def _spoly_int(row_i: tuple, row_j: tuple, lcm_e: tuple) -> dict:
    ti, lti, ci = row_i
    tj, ltj, cj = row_j
    g = math.gcd(ci, cj)
    mi = tuple(a - b for a, b in zip(lcm_e, lti))
    mj = tuple(a - b for a, b in zip(lcm_e, ltj))
    fi = cj // g
    fj = ci // g
    out: dict = {}
    for e, c in ti.items():
        k = tuple(a + b for a, b in zip(e, mi))
        out[k] = out.get(k, 0) + fi * c
    for e, c in tj.items():
        k = tuple(a + b for a, b in zip(e, mj))
        v = out.get(k, 0) - fj * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _buchberger_rows(
    gens: List[dict],
    keyf,
    max_spairs: int,
    max_degree: int,
    stats: RunStats,
) -> List[tuple]:
    rows: List[tuple] = []
    for terms in gens:
        t = dict(terms)
        _content_strip(t)
        rows.append(_row(t, keyf))

    def lcm_exp(a: tuple, b: tuple) -> tuple:
        return tuple(x if x > y else y for x, y in zip(a, b))

    heap: list = []

    def push_pair(i: int, j: int) -> None:
        L = lcm_exp(rows[i][1], rows[j][1])
        heappush(heap, (sum(L), keyf(L), i, j, L))

    for j in range(len(rows)):
        for i in range(j):
            push_pair(i, j)
    done = set()
    while heap:
        _, _, i, j, L = heappop(heap)
        if (i, j) in done:
            continue
        done.add((i, j))
        lti, ltj = rows[i][1], rows[j][1]
        if all(x == 0 or y == 0 for x, y in zip(lti, ltj)):
            continue  # coprime leading terms never yield new information
        skip = False
        for k in range(len(rows)):
            if k == i or k == j:
                continue
            ltk = rows[k][1]
            if all(a <= b for a, b in zip(ltk, L)):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik in done and pjk in done:
                    skip = True
                    break
        if skip:
            continue
        stats.spairs += 1
        if stats.spairs > max_spairs:
            raise ResourceCapExceeded(
                f"S-pair budget {max_spairs} exhausted"
            )
        s = _spoly_int(rows[i], rows[j], L)
        if not s:
            continue
        r, _ = _reduce_int(s, rows, keyf, max_degree, stats)
        if not r:
            continue
        _content_strip(r)
        rows.append(_row(r, keyf))
        new = len(rows) - 1
        for t in range(new):
            push_pair(t, new)
    return rows


def _minimalize_rows(rows: List[tuple], keyf) -> List[tuple]:
    order = sorted(range(len(rows)), key=lambda i: keyf(rows[i][1]))
    kept: List[tuple] = []
    for i in order:
        lt = rows[i][1]
        redundant = False
        for r in kept:
            klt = r[1]
            if all(a <= b for a, b in zip(klt, lt)):
                redundant = True
                break
        if not redundant:
            kept.append(rows[i])
    return kept


def _interreduce_rows(
    rows: List[tuple], keyf, max_degree: int, stats: RunStats
) -> List[tuple]:
    out = list(rows)
    for i in range(len(out)):
        others = out[:i] + out[i + 1 :]
        r, _ = _reduce_int(dict(out[i][0]), others, keyf, max_degree, stats)
        _content_strip(r)
        out[i] = _row(r, keyf)
    out.sort(key=lambda row: keyf(row[1]), reverse=True)
    return out


def _rows_to_polys(context: VarContext, rows: Sequence[tuple]) -> List[Polynomial]:
    return [
        Polynomial(context, {e: Fraction(c) for e, c in terms.items()})
        for terms, _, _ in rows
    ]


def buchberger(
    ideal: Ideal,
    order: MonomialOrder,
    *,
    max_spairs: int = DEFAULT_MAX_SPAIRS,
    max_degree: int = DEFAULT_MAX_DEGREE,
    stats: Optional[RunStats] = None,
) -> List[Polynomial]:
    """Reduced Groebner basis of the ideal under the given order.

    The result is inter-reduced, canonically normalized (primitive integer
    coefficients, positive leading coefficient under ``order``), and sorted
    by leading monomial, so it is unique for the ideal and order.
    """
    if not ideal.generators:
        raise ValueError("the zero ideal has no Groebner basis here")
    max_spairs = DEFAULT_MAX_SPAIRS if max_spairs is None else max_spairs
    max_degree = DEFAULT_MAX_DEGREE if max_degree is None else max_degree
    stats = stats if stats is not None else RunStats()
    keyf = order.key_func(ideal.context.arity)
    gens = [_int_terms(g) for g in ideal.generators]
    for poly in ideal.generators:
        stats.note_degree(poly.total_degree())
    rows = _buchberger_rows(gens, keyf, max_spairs, max_degree, stats)
    rows = _minimalize_rows(rows, keyf)
    rows = _interreduce_rows(rows, keyf, max_degree, stats)
    return _rows_to_polys(ideal.context, rows)


def normal_form(
    f: Polynomial,
    basis: Sequence[Polynomial],
    order: MonomialOrder,
    *,
    max_degree: int = DEFAULT_MAX_DEGREE,
    stats: Optional[RunStats] = None,
):
    """Fully reduce f against a basis; returns (remainder, changed).

    No term of the remainder is divisible by any basis leading term. An
    empty basis acts as the identity. The remainder is exact: it equals f
    minus a combination of basis elements.
    """
    max_degree = DEFAULT_MAX_DEGREE if max_degree is None else max_degree
    stats = stats if stats is not None else RunStats()
    basis = [b for b in basis if not b.is_zero()]
    if not basis or f.is_zero():
        return f, False
    for b in basis:
        if b.context != f.context:
            raise ContextMismatchError("normal_form needs one shared context")
    keyf = order.key_func(f.context.arity)
    rows = [_row(_int_terms(b), keyf) for b in basis]
    cont, prim = f.content_and_primitive()
    terms = {e: c.numerator for e, c in prim.terms.items()}
    reduced, lam = _reduce_int(terms, rows, keyf, max_degree, stats)
    scale = cont / lam
    rem = Polynomial(f.context, {e: scale * c for e, c in reduced.items()})
    return rem, rem != f


def eliminate(
    ideal: Ideal,
    drop: Iterable[str],
    *,
    max_spairs: int = DEFAULT_MAX_SPAIRS,
    max_degree: int = DEFAULT_MAX_DEGREE,
    stats: Optional[RunStats] = None,
) -> Ideal:
    """Eliminate the named variables from the ideal.

    Returns the ideal of relations among the remaining variables, generated
    by the elimination part of a block-order Groebner basis. Dropping
    nothing returns the ideal spanned by a grevlex basis.
    """
    names = ideal.context.names
    drop = tuple(dict.fromkeys(drop))
    for n in drop:
        if n not in names:
            raise UnknownVariableError(f"cannot eliminate unknown variable {n!r}")
    if not drop:
        return Ideal(
            ideal.context,
            buchberger(
                ideal, GREVLEX, max_spairs=max_spairs, max_degree=max_degree, stats=stats
            ),
        )
    kept = tuple(n for n in names if n not in drop)
    if not kept:
        raise ValueError("cannot eliminate every variable")
    work_ctx = VarContext(drop + kept)
    kept_ctx = VarContext(kept)
    work_ideal = Ideal(work_ctx, [g.reindex(work_ctx) for g in ideal.generators])
    basis = buchberger(
        work_ideal,
        block_order(len(drop)),
        max_spairs=max_spairs,
        max_degree=max_degree,
        stats=stats,
    )
    k = len(drop)
    out = []
    for b in basis:
        if all(not any(e[:k]) for e in b.terms):
            out.append(b.reindex(kept_ctx))
    return Ideal(kept_ctx, out)


# -- the kernel relation ----------------------------------------------------


@dataclass(frozen=True)
class KernelGenerator:
    """Generator of the relation ideal among (p, q, x).

    ``generator`` lives in the (u1, u2, u3) context, with u1, u2 standing
    for the two coordinate images and u3 for the first plane variable.
    ``coeffs[i]`` is the coefficient of u3**i, a polynomial in (u1, u2),
    and ``r`` is the u3-degree.
    """

    generator: Polynomial
    r: int
    coeffs: tuple


_KERNEL_CTX = VarContext(("y", "u1", "u2", "u3"))


def kernel_generator(
    f: Endomorphism,
    *,
    max_spairs: int = DEFAULT_MAX_SPAIRS,
    max_degree: int = DEFAULT_MAX_DEGREE,
    stats: Optional[RunStats] = None,
) -> KernelGenerator:
    """The single relation H(u1, u2, u3) tying the images p, q to x.

    H generates all polynomial identities H(p, q, x) == 0. The relation
    ideal is principal exactly when p and q are algebraically independent;
    a dependence (including a u3-free generator) raises
    AlgebraicallyDependentError, and an empty elimination raises
    ZeroKernelError.
    """
    stats = stats if stats is not None else RunStats()
    xname, yname = f.context.names
    yv = Polynomial.variable(_KERNEL_CTX, "y")
    u1 = Polynomial.variable(_KERNEL_CTX, "u1")
    u2 = Polynomial.variable(_KERNEL_CTX, "u2")
    u3 = Polynomial.variable(_KERNEL_CTX, "u3")
    images = {xname: u3, yname: yv}
    g1 = u1 - f.p.substitute(images)
    g2 = u2 - f.q.substitute(images)
    basis = buchberger(
        Ideal(_KERNEL_CTX, [g1, g2]),
        block_order(1),
        max_spairs=max_spairs,
        max_degree=max_degree,
        stats=stats,
    )
    elim = [b for b in basis if all(e[0] == 0 for e in b.terms)]
    if not elim:
        raise ZeroKernelError(
            "no relation ties the images to the plane variable; "
            "this cannot happen for a map with nonzero Jacobian"
        )
    if len(elim) > 1:
        raise AlgebraicallyDependentError(
            f"the coordinate images are algebraically dependent: the relation "
            f"ideal needs {len(elim)} generators"
        )
    H = elim[0].reindex(U123)
    r = H.degree_in("u3")
    if r == 0:
        raise AlgebraicallyDependentError(
            "the coordinate images satisfy a relation not involving the plane "
            "variable; they are algebraically dependent"
        )
    coeffs = []
    split = {}
    for exps, c in H.terms.items():
        split.setdefault(exps[2], {})[(exps[0], exps[1])] = c
    for i in range(r + 1):
        coeffs.append(Polynomial(U12, split.get(i, {})))
    return KernelGenerator(H, r, tuple(coeffs))


def birationality_degree(
    f: Endomorphism,
    *,
    max_spairs: int = DEFAULT_MAX_SPAIRS,
    max_degree: int = DEFAULT_MAX_DEGREE,
    stats: Optional[RunStats] = None,
) -> int:
    """Degree of the plane variable over the field generated by the images.

    Equals 1 exactly when adjoining the first variable to the image field
    already gives the whole rational function field.
    """
    return kernel_generator(
        f, max_spairs=max_spairs, max_degree=max_degree, stats=stats
    ).r


# -- membership in the image subalgebra -------------------------------------

_TAG_CTX = VarContext(("y", "x", "u1", "u2"))


@lru_cache(maxsize=128)
def _tag_basis(f: Endomorphism, max_spairs: int, max_degree: int):
    """Reduced lex basis of the tag ideal (u1 - p, u2 - q).

    Pure lex with y > x > u1 > u2 eliminates the plane variables, so
    elements with u-only leading terms are u-only polynomials.
    """
    stats = RunStats()
    xname, yname = f.context.names
    xv = Polynomial.variable(_TAG_CTX, "x")
    yv = Polynomial.variable(_TAG_CTX, "y")
    u1 = Polynomial.variable(_TAG_CTX, "u1")
    u2 = Polynomial.variable(_TAG_CTX, "u2")
    images = {xname: xv, yname: yv}
    g1 = u1 - f.p.substitute(images)
    g2 = u2 - f.q.substitute(images)
    basis = buchberger(
        Ideal(_TAG_CTX, [g1, g2]),
        LEX,
        max_spairs=max_spairs,
        max_degree=max_degree,
        stats=stats,
    )
    return tuple(basis), stats


@lru_cache(maxsize=128)
def _image_powers(f: Endomorphism, through: int):
    """All products p**k * q**l with k + l <= through, keyed by (k, l)."""
    out = {}
    pk = {0: Polynomial.constant(f.context, 1)}
    for k in range(1, through + 1):
        pk[k] = pk[k - 1] * f.p
    for k in range(through + 1):
        acc = pk[k]
        out[(k, 0)] = acc
        for l in range(1, through - k + 1):
            acc = acc * f.q
            out[(k, l)] = acc
    return out


def subring_membership(
    w: Polynomial,
    f: Endomorphism,
    *,
    max_spairs: int = DEFAULT_MAX_SPAIRS,
    max_degree: int = DEFAULT_MAX_DEGREE,
    interp_degree: Optional[int] = None,
    stats: Optional[RunStats] = None,
) -> Optional[Polynomial]:
    """Express w as a polynomial in the two coordinate images, if possible.

    Returns G in the (u1, u2) context with G(p, q) == w, or None when w is
    not in the image subalgebra. Two routes are used: a linear solve over
    monomials in the images (fast when a small G exists), then a normal
    form against the tag-variable elimination basis, whose remainder keeps
    a plane variable exactly when w is outside the subalgebra.
    """
    if w.context != f.context:
        raise ContextMismatchError("membership query needs the map's context")
    stats = stats if stats is not None else RunStats()
    if w.is_constant():
        return Polynomial.constant(U12, w.constant_value())

    cap = interp_degree
    if cap is None:
        cap = max(4, min(w.total_degree(), 6))
    products = _image_powers(f, cap)
    keys = sorted(products.keys())
    rows = [products[k].terms for k in keys]
    combo = solve_sparse(rows, w.terms)
    if combo is not None:
        terms = {}
        for (k, l), c in zip(keys, combo):
            if c:
                terms[(k, l)] = c
        G = Polynomial(U12, terms)
        return G

    basis, basis_stats = _tag_basis(f, max_spairs, max_degree)
    stats.merge(basis_stats)
    wt = w.reindex(_TAG_CTX)
    rem, _ = normal_form(wt, basis, LEX, max_degree=max_degree, stats=stats)
    if any(e[0] or e[1] for e in rem.terms):
        return None
    return rem.reindex(U12)


def clear_caches() -> None:
    """Drop memoized per-map bases and image power tables."""
    _tag_basis.cache_clear()
    _image_powers.cache_clear()
