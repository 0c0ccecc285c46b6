"""Exact sparse polynomial arithmetic over the rationals.

A polynomial is an immutable term map from exponent tuples to nonzero
`fractions.Fraction` coefficients, attached to a fixed ordered variable
context. Everything is exact; no floating point enters at any stage.

Term order conventions used throughout the package:

* "lex" compares exponent tuples left to right, so earlier context
  variables dominate.  Tuple comparison in Python is exactly this order,
  which is why leading terms are plain ``max()`` calls.
* Canonical unit normalization means: clear rational content so the
  coefficients are coprime integers, then flip the sign so the lex-leading
  coefficient is positive.  Gcds, factors, and denominators are always
  returned in this form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import (
    ContextMismatchError,
    ExactDivisionError,
    MissingAssignmentError,
    UnknownVariableError,
)

Exponent = tuple
Scalar = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class VarContext:
    """An ordered, duplicate-free tuple of variable names."""

    names: tuple

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("a variable context needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names!r}")
        for n in names:
            if not n or not (n[0].isalpha() or n[0] == "_"):
                raise ValueError(f"invalid variable name: {n!r}")
        object.__setattr__(self, "names", names)

    @property
    def arity(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariableError(
                f"variable {name!r} not in context {self.names!r}"
            ) from None

    def __repr__(self) -> str:
        return f"VarContext({', '.join(self.names)})"


XY = VarContext(("x", "y"))
U12 = VarContext(("u1", "u2"))
U123 = VarContext(("u1", "u2", "u3"))


def _coerce(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an int or Fraction, got {type(value).__name__}")


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("context", "terms", "_hash")

    def __init__(self, context: VarContext, terms: Mapping[Exponent, Scalar]):
        clean = {}
        arity = context.arity
        for exps, coeff in terms.items():
            exps = tuple(exps)
            if len(exps) != arity or any(e < 0 or not isinstance(e, int) for e in exps):
                raise ValueError(f"bad exponent tuple {exps!r} for arity {arity}")
            c = _coerce(coeff)
            if c:
                clean[exps] = c
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def _raw(cls, context: VarContext, clean_terms: dict) -> "Polynomial":
        """Fast path for internally constructed, already-clean term maps."""
        self = object.__new__(cls)
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "terms", clean_terms)
        object.__setattr__(self, "_hash", None)
        return self

    @classmethod
    def zero(cls, context: VarContext) -> "Polynomial":
        return cls._raw(context, {})

    @classmethod
    def constant(cls, context: VarContext, value: Scalar) -> "Polynomial":
        c = _coerce(value)
        if not c:
            return cls.zero(context)
        return cls._raw(context, {(0,) * context.arity: c})

    @classmethod
    def variable(cls, context: VarContext, name: str) -> "Polynomial":
        i = context.index(name)
        exps = tuple(1 if j == i else 0 for j in range(context.arity))
        return cls._raw(context, {exps: _ONE})

    @classmethod
    def monomial(cls, context: VarContext, exps: Exponent, coeff: Scalar = 1) -> "Polynomial":
        return cls(context, {tuple(exps): coeff})

    # -- predicates and basic queries ------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial (zero for the zero polynomial)."""
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()), _ZERO)

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.context.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def variables_used(self) -> tuple:
        used = [False] * self.context.arity
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(n for n, u in zip(self.context.names, used) if u)

    def leading_lex(self):
        """(exponent, coefficient) of the lex-greatest term."""
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # -- arithmetic -------------------------------------------------------

    def _check_context(self, other: "Polynomial") -> None:
        if self.context != other.context:
            raise ContextMismatchError(
                f"contexts differ: {self.context.names!r} vs {other.context.names!r}"
            )

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_context(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, _ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.context, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_context(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, _ZERO) - c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.context, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.context, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            if not c:
                return Polynomial.zero(self.context)
            return Polynomial._raw(
                self.context, {e: v * c for e, v in self.terms.items()}
            )
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_context(other)
        out = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = get(e, _ZERO) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial._raw(self.context, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        c = _coerce(scalar)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(self.context, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.context == other.context and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.context, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus and substitution ----------------------------------------

    def diff(self, name: str) -> "Polynomial":
        """Formal partial derivative with respect to one context variable."""
        i = self.context.index(name)
        out = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if not e:
                continue
            reduced = exps[:i] + (e - 1,) + exps[i + 1 :]
            v = out.get(reduced, _ZERO) + c * e
            if v:
                out[reduced] = v
            else:
                out.pop(reduced, None)
        return Polynomial._raw(self.context, out)

    def substitute(self, images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Evaluate at polynomial images, one per context variable.

        All images must share a single target context; the result lives there.
        """
        missing = [n for n in self.context.names if n not in images]
        if missing:
            raise MissingAssignmentError(f"no image given for {missing!r}")
        imgs = [images[n] for n in self.context.names]
        target = imgs[0].context
        for im in imgs[1:]:
            if im.context != target:
                raise ContextMismatchError(
                    "substitution images live in different contexts"
                )
        one = Polynomial.constant(target, 1)
        powers: list = [{0: one} for _ in imgs]

        def power(i: int, e: int) -> "Polynomial":
            cache = powers[i]
            if e in cache:
                return cache[e]
            top = max(k for k in cache if k <= e)
            acc = cache[top]
            for k in range(top + 1, e + 1):
                acc = acc * imgs[i]
                cache[k] = acc
            return acc

        acc = Polynomial.zero(target)
        for exps, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            acc = acc + term
        return acc

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        """Evaluate at a rational point."""
        total = _ZERO
        names = self.context.names
        vals = []
        for n in names:
            if n not in point:
                raise MissingAssignmentError(f"no value given for {n!r}")
            vals.append(_coerce(point[n]))
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(vals, exps):
                if e:
                    v *= x**e
            total += v
        return total

    # -- normal forms -----------------------------------------------------

    def content_and_primitive(self):
        """Split off the rational content.

        Returns ``(content, primitive)`` with ``self == content * primitive``,
        where the primitive part has coprime integer coefficients and a
        positive lex-leading coefficient.  The zero polynomial returns
        ``(Fraction(0), self)``.
        """
        if not self.terms:
            return _ZERO, self
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = math.gcd(num_gcd, c.numerator)
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        content = Fraction(num_gcd, den_lcm)
        if self.terms[max(self.terms)] < 0:
            content = -content
        inv = 1 / content
        prim = Polynomial._raw(
            self.context, {e: c * inv for e, c in self.terms.items()}
        )
        return content, prim

    def normalized(self) -> "Polynomial":
        """Canonical unit normalization (primitive, positive lex lead)."""
        if not self.terms:
            return self
        return self.content_and_primitive()[1]

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        """Exact division; raises ExactDivisionError when it does not divide."""
        if not isinstance(divisor, Polynomial):
            raise TypeError("exact_div expects a Polynomial divisor")
        self._check_context(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("exact division by the zero polynomial")
        if self.is_zero():
            return self
        lead_e, lead_c = divisor.leading_lex()
        rest = dict(self.terms)
        out = {}
        while rest:
            e = max(rest)
            c = rest.pop(e)
            q = tuple(a - b for a, b in zip(e, lead_e))
            if any(x < 0 for x in q):
                raise ExactDivisionError(f"{divisor} does not divide exactly")
            qc = c / lead_c
            out[q] = qc
            for de, dc in divisor.terms.items():
                if de == lead_e:
                    continue
                k = tuple(a + b for a, b in zip(q, de))
                v = rest.get(k, _ZERO) - qc * dc
                if v:
                    rest[k] = v
                else:
                    rest.pop(k, None)
        return Polynomial._raw(self.context, out)

    def divides(self, other: "Polynomial") -> bool:
        try:
            other.exact_div(self)
            return True
        except ExactDivisionError:
            return False

    # -- context plumbing ---------------------------------------------------

    def reindex(self, target: VarContext, rename: Optional[Mapping[str, str]] = None) -> "Polynomial":
        """Transport the polynomial into another context by variable name.

        Every variable actually used must map (via ``rename``, defaulting to
        the identity) to a name of the target context.
        """
        rename = rename or {}
        src = self.context.names
        pos = []
        for i, n in enumerate(src):
            tgt_name = rename.get(n, n)
            if tgt_name in target.names:
                pos.append(target.names.index(tgt_name))
            else:
                pos.append(-1)
        out = {}
        for exps, c in self.terms.items():
            new = [0] * target.arity
            for i, e in enumerate(exps):
                if not e:
                    continue
                if pos[i] < 0:
                    raise UnknownVariableError(
                        f"variable {src[i]!r} has no home in context {target.names!r}"
                    )
                new[pos[i]] = e
            key = tuple(new)
            if key in out:
                raise ValueError("rename map collapses two used variables")
            out[key] = c
        return Polynomial._raw(target, out)

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.context.names
        pieces = []
        for exps in sorted(self.terms):
            c = self.terms[exps]
            mono = []
            for n, e in zip(names, exps):
                if e == 1:
                    mono.append(n)
                elif e > 1:
                    mono.append(f"{n}^{e}")
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = "*".join(mono)
            else:
                body = "*".join([str(mag)] + mono)
            pieces.append((c < 0, body))
        first_neg, first_body = pieces[0]
        text = ("-" if first_neg else "") + first_body
        for neg, body in pieces[1:]:
            text += (" - " if neg else " + ") + body
        return text

    def __repr__(self) -> str:
        return f"Poly[{', '.join(self.context.names)}]({self})"


# -- module-level operations ---------------------------------------------


def partial_derivative(p: Polynomial, name: str) -> Polynomial:
    return p.diff(name)


def substitute(p: Polynomial, images: Mapping[str, Polynomial]) -> Polynomial:
    return p.substitute(images)


@dataclass(frozen=True)
class JacobianInfo:
    """The Jacobian determinant of a plane map together with its shape.

    ``kind`` is one of "zero", "constant" (meaning a nonzero constant), or
    "nonconstant"; ``value`` carries the constant when kind == "constant".
    """

    det: Polynomial
    kind: str
    value: Optional[Fraction]


def jacobian_det(p: Polynomial, q: Polynomial) -> JacobianInfo:
    """Determinant of the Jacobian matrix of the pair (p, q).

    Both polynomials must share one two-variable context; the derivative
    rows are taken in context order.
    """
    if p.context != q.context:
        raise ContextMismatchError("jacobian_det needs a shared context")
    if p.context.arity != 2:
        raise ValueError("jacobian_det is defined for two-variable contexts")
    a, b = p.context.names
    det = p.diff(a) * q.diff(b) - p.diff(b) * q.diff(a)
    if det.is_zero():
        return JacobianInfo(det, "zero", None)
    if det.is_constant():
        return JacobianInfo(det, "constant", det.constant_value())
    return JacobianInfo(det, "nonconstant", None)


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    """gcd on Q: gcd of numerators over lcm of denominators, non-negative."""
    num = math.gcd(a.numerator, b.numerator)
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return Fraction(num, den)


def _coeffs_in(p: Polynomial, i: int) -> dict:
    """View p as univariate in variable index i: degree -> coefficient poly."""
    out: dict = {}
    for exps, c in p.terms.items():
        e = exps[i]
        stripped = exps[:i] + (0,) + exps[i + 1 :]
        bucket = out.setdefault(e, {})
        bucket[stripped] = bucket.get(stripped, _ZERO) + c
    result = {}
    for d, terms in out.items():
        clean = {e: c for e, c in terms.items() if c}
        if clean:
            result[d] = Polynomial._raw(p.context, clean)
    return result


def _from_coeffs(context: VarContext, i: int, coeffs: Mapping[int, Polynomial]) -> Polynomial:
    out = {}
    for d, poly in coeffs.items():
        for exps, c in poly.terms.items():
            key = exps[:i] + (exps[i] + d,) + exps[i + 1 :]
            out[key] = out.get(key, _ZERO) + c
    return Polynomial._raw(context, {e: c for e, c in out.items() if c})


def _int_content(p: Polynomial) -> int:
    g = 0
    for c in p.terms.values():
        g = math.gcd(g, c.numerator)
    return g


def _gcd_many(polys) -> Polynomial:
    it = iter(polys)
    g = next(it)
    for p in it:
        if g.is_constant() and abs(g.constant_value()) == 1:
            break
        g = _gcd_int(g, p)
    return g


def _gcd_int(a: Polynomial, b: Polynomial) -> Polynomial:
    """gcd of integer-coefficient polynomials, integer content included."""
    if a.is_zero():
        a, b = b, a
    if b.is_zero():
        if a.is_zero():
            return a
        return a.normalized() * _int_content(a)
    ca = _int_content(a)
    cb = _int_content(b)
    cg = math.gcd(ca, cb)
    g = _gcd_prim(a.normalized(), b.normalized())
    return g * cg


def _main_var(a: Polynomial, b: Polynomial) -> int:
    """Highest variable index occurring in either polynomial, or -1."""
    best = -1
    for p in (a, b):
        for exps in p.terms:
            for i in range(p.context.arity - 1, best, -1):
                if exps[i]:
                    best = max(best, i)
                    break
    return best


def _prem(f: Polynomial, g: Polynomial, i: int) -> Polynomial:
    """Pseudo-remainder of f by g in variable index i (sloppy variant)."""
    ctx = f.context
    gc = _coeffs_in(g, i)
    dg = max(gc)
    lg = gc[dg]
    r = f
    while not r.is_zero():
        rc = _coeffs_in(r, i)
        dr = max(rc)
        if dr < dg:
            break
        lr = rc[dr]
        shift = Polynomial.monomial(
            ctx, tuple(dr - dg if j == i else 0 for j in range(ctx.arity))
        )
        r = lg * r - lr * shift * g
        c = _int_content(r)
        if c > 1:
            r = r * Fraction(1, c)
    return r


def _split_var_content(p: Polynomial, i: int):
    """Content/primitive split of p seen as univariate in variable i."""
    coeffs = _coeffs_in(p, i)
    cont = _gcd_many(list(coeffs.values()))
    if cont.is_constant() and abs(cont.constant_value()) == 1:
        return Polynomial.constant(p.context, 1), p
    prim = p.exact_div(cont)
    return cont, prim


def _gcd_prim(a: Polynomial, b: Polynomial) -> Polynomial:
    """gcd of primitive integer polynomials, canonically normalized."""
    if a.is_constant() or b.is_constant():
        return Polynomial.constant(a.context, 1)
    i = _main_var(a, b)
    ca, pa = _split_var_content(a, i)
    cb, pb = _split_var_content(b, i)
    gamma = _gcd_int(ca, cb)
    f, g = pa, pb
    if f.degree_in(f.context.names[i]) < g.degree_in(g.context.names[i]):
        f, g = g, f
    while not g.is_zero():
        r = _prem(f, g, i)
        if r.is_zero():
            f, g = g, r
            break
        _, r = _split_var_content(r.normalized(), i)
        f, g = g, r
    result = (gamma * f.normalized()).normalized()
    return result


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor over Q.

    The primitive part of the result is canonically normalized; the gcd of
    the two rational contents is kept as a scalar factor, so for instance
    integer inputs keep their shared integer content.
    """
    if a.context != b.context:
        raise ContextMismatchError("gcd needs a shared context")
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if a.is_zero():
        return b.normalized()
    if b.is_zero():
        return a.normalized()
    ca, pa = a.content_and_primitive()
    cb, pb = b.content_and_primitive()
    return _frac_gcd(ca, cb) * _gcd_prim(pa, pb)


def gcd_and_content(a: Polynomial, b: Polynomial):
    """(gcd, (content of a, content of b)); see poly_gcd for conventions."""
    g = poly_gcd(a, b)
    return g, (a.content_and_primitive()[0], b.content_and_primitive()[0])


def poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero() or b.is_zero():
        raise ValueError("lcm with the zero polynomial is undefined")
    g = poly_gcd(a, b)
    return (a * b).exact_div(g).normalized()


# -- plane endomorphisms --------------------------------------------------


class Endomorphism:
    """A polynomial self-map of the plane, stored by its coordinate images.

    The map sends (x, y) to (p(x, y), q(x, y)).  The Jacobian determinant
    is computed once at construction and cached.
    """

    __slots__ = ("p", "q", "jacobian", "_hash")

    def __init__(self, p: Polynomial, q: Polynomial):
        if p.context != q.context:
            raise ContextMismatchError("both coordinate images need one context")
        if p.context.arity != 2:
            raise ValueError("an endomorphism of the plane needs a 2-variable context")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "jacobian", jacobian_det(p, q))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Endomorphism is immutable")

    @property
    def context(self) -> VarContext:
        return self.p.context

    def is_keller(self) -> bool:
        """True when the Jacobian determinant is a nonzero constant."""
        return self.jacobian.kind == "constant"

    def degree(self) -> int:
        return max(self.p.total_degree(), self.q.total_degree())

    def apply(self, point: Mapping[str, Scalar]):
        return self.p.evaluate(point), self.q.evaluate(point)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Endomorphism):
            return NotImplemented
        return self.p == other.p and self.q == other.q

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.p, self.q))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"Endomorphism(p={self.p}, q={self.q})"


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """The composite map sending a point t to f(g(t)).

    With this convention the chain rule reads: the Jacobian determinant of
    the composite equals the determinant of f evaluated at g, times the
    determinant of g.
    """
    if f.context != g.context:
        raise ContextMismatchError("composition needs a shared context")
    a, b = f.context.names
    images = {a: g.p, b: g.q}
    return Endomorphism(f.p.substitute(images), f.q.substitute(images))


def identity_map(context: VarContext = XY) -> Endomorphism:
    a, b = context.names
    return Endomorphism(
        Polynomial.variable(context, a), Polynomial.variable(context, b)
    )
