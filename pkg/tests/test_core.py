"""Tests for certified reals, vectors, cones and linear-form errors"""

import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from core import (
    ConeSpec,
    PrecisionReal,
    RealVector,
    SeriesOrigin,
    compare_certified,
    dist_to_nearest_int,
    float_screen,
    height,
    in_cone,
    linear_form_error,
    load_vector,
    vector_from_spec,
    veronese_vector,
)
from tests.fixtures import (
    SQRT2_DIGITS,
    create_vector_spec,
    make_sqrt_vector,
    sqrt_real,
    write_vector_file,
)
from utils import DimensionMismatch, ValidationError


class TestPrecisionReal:
    """Test enclosures and their origins"""

    def test_rational_is_exact(self):
        r = PrecisionReal.rational(1, 3)
        assert r.is_exact
        assert r.width == 0
        assert r.contains(Fraction(1, 3))

    def test_algebraic_encloses_root(self):
        """√2 is enclosed to the working precision"""
        r = sqrt_real(2)
        assert r.lower**2 <= 2 <= r.upper**2
        assert r.width <= Fraction(4, 1 << 128)
        assert abs(float(r.midpoint) - math.sqrt(2)) < 1e-15

    def test_refinement_narrows(self):
        r = sqrt_real(3, bits=64)
        finer = r.at(256)
        assert finer.width < r.width
        assert r.lower <= finer.lower and finer.upper <= r.upper

    def test_decimal_is_exact(self):
        r = PrecisionReal.decimal(SQRT2_DIGITS)
        assert r.is_exact
        assert r.contains(Fraction(SQRT2_DIGITS))

    def test_interval_with_two_roots_is_rejected(self):
        with pytest.raises(ValidationError):
            PrecisionReal.algebraic([1, 0, -2], -2, 2)

    def test_empty_interval(self):
        with pytest.raises(ValidationError):
            PrecisionReal(Fraction(1), Fraction(0))

    def test_series_tail_bound(self):
        """Growth 5 from a_1 = 1 gives exponents 1, 5, 25, 125"""
        origin = SeriesOrigin(Fraction(5))
        assert origin.exponents(100)[:4] == [1, 5, 25, 125]
        assert origin.partial_sum(2) == Fraction(1, 2) + Fraction(1, 32)
        assert origin.tail_bound(1) == Fraction(2, 1 << 5)
        lower, upper = origin.enclose(64)
        assert lower <= origin.partial_sum(3) <= upper

    def test_compare_certified(self):
        a = PrecisionReal.rational(1, 3)
        b = PrecisionReal.rational(1, 2)
        assert compare_certified(a, b) == -1
        assert compare_certified(b, a) == 1
        assert compare_certified(a, a) == 0
        assert compare_certified(PrecisionReal(Fraction(0), Fraction(1)), a) is None


class TestDistance:
    """Test ||r|| enclosures"""

    def test_distance_of_exact_values(self):
        assert dist_to_nearest_int(PrecisionReal.exact(Fraction(7, 3))).lower == Fraction(1, 3)
        assert dist_to_nearest_int(PrecisionReal.exact(Fraction(5, 2))).upper == Fraction(1, 2)
        assert dist_to_nearest_int(PrecisionReal.exact(4)).is_exact_zero

    @given(st.fractions(min_value=-10, max_value=10, max_denominator=1000))
    def test_distance_matches_definition(self, value):
        """||r|| = min(r - floor r, ceil r - r) for exact r"""
        d = dist_to_nearest_int(PrecisionReal.exact(value))
        expected = min(value - math.floor(value), math.ceil(value) - value)
        assert d.lower == d.upper == expected

    def test_linear_form_error_rational(self):
        alpha = RealVector.of(Fraction(1, 3), Fraction(1, 7))
        err = linear_form_error(alpha, (1, 1))
        assert err.lower == err.upper == Fraction(10, 21)

    def test_linear_form_error_exact_zero(self):
        alpha = RealVector.of(Fraction(1, 3), Fraction(1, 7))
        assert linear_form_error(alpha, (3, 0)).is_exact_zero

    def test_linear_form_error_irrational(self):
        """||5√2|| ≈ 0.0711"""
        alpha = make_sqrt_vector(2)
        err = linear_form_error(alpha, (5,))
        assert err.lower > 0
        assert float(err.midpoint) == pytest.approx(5 * math.sqrt(2) - 7, rel=1e-12)

    def test_dimension_mismatch(self):
        alpha = RealVector.of(Fraction(1, 3))
        with pytest.raises(DimensionMismatch):
            linear_form_error(alpha, (1, 2))

    def test_float_screen_margin_covers_error(self):
        """The float distance is within the margin of the certified value"""
        alpha = make_sqrt_vector(2, 3)
        screen = float_screen(alpha)
        vectors = np.array([[3, -2], [7, 5], [-11, 4]], dtype=np.int64)
        heights = np.abs(vectors).max(axis=1)
        distances = screen.distances(vectors)
        margins = screen.margins(heights)
        for row, dist, margin in zip(vectors, distances, margins):
            exact = linear_form_error(alpha, tuple(int(v) for v in row))
            assert float(exact.lower) - margin <= dist <= float(exact.upper) + margin


class TestCones:
    """Test cone membership"""

    def test_height(self):
        assert height((3, -5, 2)) == 5
        assert height(()) == 0

    def test_strict_cone(self):
        spec = ConeSpec(1)
        assert in_cone((3, 2), spec)
        assert not in_cone((2, 2), spec)
        assert in_cone((2, 2), ConeSpec(1, strict=False))

    def test_full_cone_is_vacuous(self):
        assert in_cone((1, 9), ConeSpec(2))

    def test_constant_widens_cone(self):
        assert in_cone((2, 3), ConeSpec(1, Fraction(2)))

    def test_tail_bound(self):
        assert ConeSpec(1).tail_bound(5) == 4
        assert ConeSpec(1, strict=False).tail_bound(5) == 5

    def test_invalid_cones(self):
        with pytest.raises(ValidationError):
            ConeSpec(0)
        with pytest.raises(ValidationError):
            ConeSpec(1, Fraction(0))
        with pytest.raises(DimensionMismatch):
            ConeSpec(3).check_dimension(2)


class TestVeronese:
    """Test points on the Veronese curve"""

    def test_rational_point(self):
        alpha = veronese_vector(PrecisionReal.rational(1, 2), 3)
        assert [c.lower for c in alpha.coords] == [Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)]

    def test_square_of_root_two(self):
        """(√2)² = 2 gets a degree-one annihilator"""
        alpha = veronese_vector(sqrt_real(2), 2)
        assert alpha.coords[0].contains(2)
        assert alpha.coords[1] == sqrt_real(2)

    def test_cube_of_root_two(self):
        xi = sqrt_real(2)
        alpha = veronese_vector(xi, 3)
        assert float(alpha.coords[0].midpoint) == pytest.approx(2 * math.sqrt(2))


class TestVectorFiles:
    """Test the vector input file"""

    def test_vector_from_spec(self):
        alpha = vector_from_spec(create_vector_spec())
        assert alpha.n == 2
        assert float(alpha.coords[1].midpoint) == pytest.approx(math.sqrt(3))

    def test_mixed_kinds(self):
        payload = create_vector_spec(
            [
                {"kind": "rational", "value": "1/3"},
                {"kind": "decimal", "value": "0.125"},
                {"kind": "series", "growth": "5"},
            ]
        )
        alpha = vector_from_spec(payload)
        assert alpha.coords[0].lower == Fraction(1, 3)
        assert alpha.coords[1].lower == Fraction(1, 8)
        assert not alpha.coords[2].is_exact

    def test_missing_fields(self):
        with pytest.raises(ValidationError):
            vector_from_spec(create_vector_spec([{"kind": "algebraic", "coeffs": [1, 0, -2]}]))

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            vector_from_spec(create_vector_spec(n=3))

    def test_round_trip_through_file(self, tmp_path):
        alpha = vector_from_spec(create_vector_spec())
        path = tmp_path / "alpha.json"
        path.write_text(json.dumps(alpha.to_spec()), encoding="utf-8")
        assert load_vector(path) == alpha

    def test_unreadable_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ValidationError):
            load_vector(path)
        assert load_vector(write_vector_file(tmp_path / "ok.json")).n == 2
