"""Tests for the bound calculators and the Minkowski body search"""

import math
from fractions import Fraction

import pytest

from bounds import (
    BodySpec,
    bound_golden,
    bound_schmidt,
    bound_table,
    bound_thurnheer,
    bound_uniform,
    bound_veronese,
    bounds_report,
    eta_for,
    minkowski_body_search,
    mu_from_eta,
    ratio_exceeds,
)
from core import PrecisionReal, RealVector
from enumeration import ConeRecord
from tests.fixtures import make_sqrt_vector, seeded_vector
from utils import (
    DomainError,
    SearchBudgetExceeded,
    ValidationError,
    parse_rational,
)


class TestBoundFormulas:
    """Test closed-form bounds"""

    def test_uniform(self):
        assert bound_uniform(5, 3, 2) == Fraction(5, 2)
        assert bound_uniform(Fraction(7, 2), 3, 3) == 3
        assert isinstance(bound_uniform(5.0, 3, 2), float)

    def test_uniform_domain(self):
        with pytest.raises(DomainError):
            bound_uniform(2, 3, 1)
        with pytest.raises(DomainError):
            bound_uniform(5, 3, 4)

    def test_thurnheer(self):
        assert bound_thurnheer(3, 6) == Fraction(5, 2)
        with pytest.raises(DomainError):
            bound_thurnheer(2, 1)

    def test_schmidt(self):
        """ŵ/(ŵ - 1) at ŵ = 2"""
        assert bound_schmidt(2) == 2
        assert bound_schmidt(3) == Fraction(3, 2)

    def test_golden(self):
        assert bound_golden(2) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-12)
        with pytest.raises(DomainError):
            bound_golden(1)

    @pytest.mark.parametrize("n", range(2, 51))
    def test_golden_exceeds_trivial(self, n):
        assert bound_golden(n) > n - 1 / n

    def test_veronese(self):
        assert bound_veronese(3, 1) == Fraction(5, 3)
        assert bound_veronese(3, 2) == Fraction(5, 2)
        with pytest.raises(DomainError):
            bound_veronese(3, 3)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_uniform_cap_matches_veronese(self, n):
        """At the largest uniform exponent 2n - 1 the two bounds coincide"""
        for ell in range(1, n):
            assert bound_uniform(2 * n - 1, n, ell) == bound_veronese(n, ell)

    def test_bound_table(self):
        assert bound_table(3) == {"2": ["3/2"], "3": ["5/3", "5/2"]}


class TestEta:
    """Test the body exponent"""

    def test_eta_for(self):
        assert eta_for(Fraction(3, 2), 1, 2) == 2
        assert eta_for(3, 1, 3, eps=Fraction(1, 2)) == Fraction(4, 5)

    @pytest.mark.parametrize("mu", [Fraction(3, 2), Fraction(7, 3), 4])
    def test_round_trip(self, mu):
        assert mu_from_eta(eta_for(mu, 1, 3), 1, 3) == mu

    def test_domain(self):
        with pytest.raises(DomainError):
            eta_for(1, 1, 2)
        with pytest.raises(DomainError):
            mu_from_eta(0, 1, 2)


class TestBodySpec:
    """Test body parameters"""

    def test_bounds(self):
        spec = BodySpec(make_sqrt_vector(2, 3), 10, Fraction(3, 2), 1)
        assert spec.head_bound == 31
        assert spec.form_exponent == (5, 2)

    def test_volume(self):
        spec = BodySpec(make_sqrt_vector(2, 3), 10, Fraction(2), 1)
        assert spec.form_exponent == (3, 1)
        assert spec.volume == 8

    def test_form_within(self):
        spec = BodySpec(make_sqrt_vector(2, 3), 10, Fraction(2), 1)
        assert spec.form_within(Fraction(1, 1000))
        assert not spec.form_within(Fraction(1, 999))

    def test_invalid(self):
        alpha = make_sqrt_vector(2, 3)
        with pytest.raises(ValidationError):
            BodySpec(alpha, 0, Fraction(1), 1)
        with pytest.raises(ValidationError):
            BodySpec(alpha, 10, Fraction(1, 2), 1)
        with pytest.raises(ValidationError):
            BodySpec(alpha, 10, Fraction(1), 3)


class TestBodySearch:
    """Test lattice enumeration inside the body"""

    def test_unit_body(self):
        """At N = 1 the point x = 0, x_0 = 1 is the lexicographic winner"""
        point = minkowski_body_search(BodySpec(make_sqrt_vector(2, 3), 1, Fraction(1), 1))
        assert point.x == [0, 0]
        assert point.x0 == 1

    def test_point_satisfies_constraints(self):
        alpha = make_sqrt_vector(2, 3)
        spec = BodySpec(alpha, 10, Fraction(2), 1)
        point = minkowski_body_search(spec)
        assert any(point.x) or point.x0 != 0
        assert abs(point.x[0]) <= 100
        assert abs(point.x[1]) <= 10
        assert parse_rational(point.form_hi) <= Fraction(1, 1000)
        value = point.x0 + sum(v * math.sqrt(k) for v, k in zip(point.x, (2, 3)))
        assert abs(value) <= 1e-3 + 1e-12
        first = next(v for v in point.x + [point.x0] if v != 0)
        assert first > 0

    def test_rational_vector(self):
        """α = (1/3, 1/5) admits an exact zero of the form"""
        alpha = RealVector.of(Fraction(1, 3), Fraction(1, 5))
        point = minkowski_body_search(BodySpec(alpha, 3, Fraction(1), 1))
        assert parse_rational(point.form_hi) <= Fraction(1, 9)

    @pytest.mark.parametrize("seed", range(20))
    @pytest.mark.parametrize("ell", [1, 2])
    @pytest.mark.parametrize("N", [10, 50, 100])
    def test_always_finds_point_seeded(self, seed, ell, N):
        spec = BodySpec(seeded_vector(3, seed), N, Fraction(2), ell)
        point = minkowski_body_search(spec)
        assert any(point.x) or point.x0 != 0
        assert all(abs(v) <= spec.head_bound for v in point.x[:ell])
        assert all(abs(v) <= N for v in point.x[ell:])
        assert spec.form_within(parse_rational(point.form_hi))

    def test_node_budget(self):
        spec = BodySpec(make_sqrt_vector(2, 3), 10, Fraction(2), 1)
        with pytest.raises(SearchBudgetExceeded):
            minkowski_body_search(spec, node_budget=1)


class TestRatioExceeds:
    """Test the certified comparison of record ratios"""

    @staticmethod
    def _records(*pairs):
        return [ConeRecord((-h, 0), h, PrecisionReal.exact(err)) for h, err in pairs]

    def test_proven_excess(self):
        high = self._records((10, Fraction(1, 10**6)))
        low = self._records((10, Fraction(1, 10**3)))
        assert ratio_exceeds(high, low, 2)
        assert not ratio_exceeds(low, high, 2)

    def test_equal_ratios_are_not_an_excess(self):
        records = self._records((10, Fraction(1, 100)), (100, Fraction(1, 10**4)))
        assert not ratio_exceeds(records, records, 2)

    def test_burn_in_hides_records(self):
        high = self._records((3, Fraction(1, 10**6)))
        low = self._records((10, Fraction(1, 10)))
        assert not ratio_exceeds(high, low, 5)


class TestBoundsReport:
    """Test the combined report"""

    def test_report_rows(self):
        report = bounds_report(make_sqrt_vector(2, 3), 1, 40, burn_in=2)
        assert (report.n, report.ell, report.N_max) == (2, 1, 40)
        assert report.tautology_ok is True
        assert report.mu_full == report.w
        names = [row.name for row in report.rows]
        assert "golden" in names
        assert names.count("veronese") == 1
        golden = next(row for row in report.rows if row.name == "golden")
        assert golden.estimate == report.mu
        assert golden.value == pytest.approx(bound_golden(2))

    def test_full_cone_uses_unrestricted_estimate(self):
        report = bounds_report(make_sqrt_vector(2, 3), 2, 30, burn_in=2)
        assert report.mu == report.w
        assert report.tautology_ok is True

    def test_invalid_ell(self):
        with pytest.raises(ValidationError):
            bounds_report(make_sqrt_vector(2, 3), 3, 30)
