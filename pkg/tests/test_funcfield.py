"""Tests for rational function coefficients, shape bases, and u/v splitting."""

from fractions import Fraction

import pytest

from keller.errors import (
    AlgebraicallyDependentError,
    InternalInconsistencyError,
    NotShapePositionError,
)
from keller.funcfield import (
    FFPolynomial,
    RationalFunction,
    shape_basis,
    uv_decomposition,
)
from keller.groebner import kernel_generator
from keller.parsing import parse_poly
from keller.poly import U12, U123, XY, Endomorphism, Polynomial
from keller.tame import random_tame

U1 = Polynomial.variable(U12, "u1")
U2 = Polynomial.variable(U12, "u2")
X = Polynomial.variable(XY, "x")
Y = Polynomial.variable(XY, "y")
ONE = RationalFunction.from_scalar(U12, 1)


def rf(num, den=None):
    return RationalFunction(num, den)


class TestRationalFunction:
    def test_reduces_to_lowest_terms(self):
        q = rf(U1**2 - U2**2, U1 + U2)
        assert q.num == U1 - U2
        assert q.is_polynomial()

    def test_denominator_normalized(self):
        q = rf(U1, 2 * U2)
        assert q.den == U2
        assert q.num == Polynomial.constant(U12, Fraction(1, 2)) * U1

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            rf(U1, Polynomial.zero(U12))

    def test_zero_numerator_collapses(self):
        q = rf(Polynomial.zero(U12), U1)
        assert q.is_zero()
        assert q.den == Polynomial.constant(U12, 1)

    def test_field_laws_on_samples(self):
        a = rf(U1, U2)
        b = rf(U2 + U1, U1)
        c = rf(Polynomial.constant(U12, 3), U1 * U2)
        assert (a + b) * c == a * c + b * c
        assert (a - a).is_zero()
        assert (a / b) * b == a
        assert -(-a) == a

    def test_division_by_zero_function(self):
        with pytest.raises(ZeroDivisionError):
            rf(U1) / rf(Polynomial.zero(U12))

    def test_string_forms(self):
        assert str(rf(U1)) == "u1"
        assert str(rf(U1, U2)) == "u1/u2"
        assert str(rf(U1 + U2, U2)) == "(u2 + u1)/u2"

    def test_immutable(self):
        q = rf(U1)
        with pytest.raises(AttributeError):
            q.num = U2


class TestFFPolynomial:
    def test_zero_coefficients_dropped(self):
        p = FFPolynomial(U12, {(1, 0): ONE, (0, 1): ONE - ONE})
        assert list(p.terms) == [(1, 0)]

    def test_leading_term_prefers_y(self):
        p = FFPolynomial(U12, {(5, 0): ONE, (0, 1): ONE})
        assert p.leading_exponent() == (0, 1)

    def test_arithmetic(self):
        x_term = FFPolynomial(U12, {(1, 0): ONE})
        const = FFPolynomial(U12, {(0, 0): rf(U1)})
        p = x_term + const
        assert (p - x_term) == const
        sq = p * p
        assert sq.coefficient(2, 0) == ONE
        assert sq.coefficient(1, 0) == rf(2 * U1)

    def test_monic_divides_by_leading(self):
        p = FFPolynomial(U12, {(2, 0): rf(U2), (0, 0): rf(U1 * U2)})
        m = p.monic()
        assert m.leading_coefficient() == ONE
        assert m.coefficient(0, 0) == rf(U1)

    def test_bad_exponent_rejected(self):
        with pytest.raises(ValueError):
            FFPolynomial(U12, {(1, 0, 0): ONE})


class TestShapeBasis:
    def test_shear(self):
        sb = shape_basis(Endomorphism(X, Y + X**2))
        assert sb.r == 1
        assert sb.g.degree_in_x() == 1
        # y = q - p^2 in the image field
        assert sb.h.terms == {(0, 0): rf(U2 - U1**2)}

    def test_x_times_y(self):
        sb = shape_basis(Endomorphism(X, X * Y))
        assert sb.r == 1
        assert sb.h.terms == {(0, 0): rf(U2, U1)}

    def test_square_first_coordinate(self):
        sb = shape_basis(Endomorphism(X**2, Y))
        assert sb.r == 2
        assert sb.g.coefficient(0, 0) == rf(-U1)

    def test_not_shape_position(self):
        with pytest.raises(NotShapePositionError) as err:
            shape_basis(Endomorphism(X**2, Y**2))
        assert "(0, 2)" in str(err.value) and "(2, 0)" in str(err.value)

    def test_dependent_images(self):
        with pytest.raises(AlgebraicallyDependentError):
            shape_basis(Endomorphism(X, X))


class TestUVDecomposition:
    def test_shear(self):
        dec = uv_decomposition(Endomorphism(X, Y + X**2))
        assert dec.u == parse_poly("u2 - u1^2", U123)
        assert dec.v == Polynomial.constant(U12, 1)
        assert dec.r == 1

    def test_x_times_y(self):
        dec = uv_decomposition(Endomorphism(X, X * Y))
        assert dec.u == Polynomial.variable(U123, "u2")
        assert dec.v == U1
        assert dec.r == 1

    def test_square_first_coordinate(self):
        dec = uv_decomposition(Endomorphism(X**2, Y))
        assert dec.u == Polynomial.variable(U123, "u2")
        assert dec.v == Polynomial.constant(U12, 1)
        assert dec.r == 2

    def test_defining_identity(self):
        for f in (
            Endomorphism(X, Y + X**2),
            Endomorphism(X, X * Y),
            Endomorphism(X**2, Y),
            Endomorphism(X + Y**3, Y),
        ):
            dec = uv_decomposition(f)
            v_img = dec.v.substitute({"u1": f.p, "u2": f.q})
            u_img = dec.u.substitute({"u1": f.p, "u2": f.q, "u3": X})
            assert (v_img * Y - u_img).is_zero()

    def test_degree_agrees_with_kernel(self):
        for a in range(1, 6):
            f = Endomorphism(X**a, Y)
            dec = uv_decomposition(f)
            k = kernel_generator(f)
            assert dec.r == k.r == a

    def test_accepts_matching_kernel(self):
        f = Endomorphism(X, Y + X**2)
        k = kernel_generator(f)
        dec = uv_decomposition(f, kernel=k)
        assert dec.r == 1

    def test_rejects_foreign_kernel(self):
        f = Endomorphism(X, Y + X**2)
        wrong = kernel_generator(Endomorphism(X**2, Y))
        with pytest.raises(InternalInconsistencyError):
            uv_decomposition(f, kernel=wrong)

    @pytest.mark.parametrize("seed", range(8))
    def test_tame_maps_have_polynomial_denominator_one(self, seed):
        f, _ = random_tame(seed)
        dec = uv_decomposition(f)
        assert dec.r == 1
        assert dec.v.is_constant()
