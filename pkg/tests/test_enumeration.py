"""Tests for shell enumeration, record scans and exponent estimators"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core import ConeSpec, RealVector, height, in_cone
from enumeration import (
    RECORDS_CSV_HEADER,
    axis_scan,
    brute_force_oracle,
    default_grid,
    dirichlet_bound,
    dirichlet_floor_check,
    dirichlet_floor_report,
    estimate_mu,
    estimate_nu_tilde,
    estimate_w,
    estimate_w_hat,
    iter_shell_blocks,
    record_scan,
    records_csv_rows,
    shell_vectors,
)
from metrical import gap_series_vector
from tests.fixtures import make_sqrt_vector, seeded_vector
from utils import CapExceeded, NoRecords, ValidationError, parse_rational


def _summary(scan):
    return [(r.x, r.h) for r in scan.records]


def _assert_same_records(scan, oracle):
    assert _summary(scan) == _summary(oracle)
    for ours, ref in zip(scan.records, oracle.records):
        assert ours.err.lower <= ref.err.upper
        assert ref.err.lower <= ours.err.upper


class TestShells:
    """Test canonical shell generation"""

    def test_first_shell_of_axis_cone(self):
        """Only (-1, 0) has height 1 in the strict one-head cone"""
        assert shell_vectors(1, 2, ConeSpec(1)).tolist() == [[-1, 0]]

    def test_full_shell_size(self):
        """Half of the 5² - 3² vectors of height exactly 2"""
        assert len(shell_vectors(2, 2, ConeSpec(2))) == 8

    @settings(max_examples=30, deadline=None)
    @given(
        st.integers(min_value=1, max_value=6),
        st.integers(min_value=2, max_value=3),
        st.data(),
    )
    def test_shell_vectors_are_canonical(self, h, n, data):
        """Every row has height h, lies in the cone and starts negative"""
        ell = data.draw(st.integers(min_value=1, max_value=n))
        spec = ConeSpec(ell)
        rows = shell_vectors(h, n, spec)
        for row in rows.tolist():
            assert height(row) == h
            assert in_cone(row, spec)
            assert next(v for v in row if v != 0) < 0
        assert len({tuple(r) for r in rows.tolist()}) == len(rows)

    def test_blocks_cover_every_shell(self):
        spec = ConeSpec(1)
        blocks = list(iter_shell_blocks(2, spec, 1, 20, target_rows=16))
        assert len(blocks) > 1
        heights = np.concatenate([b.heights for b in blocks])
        assert heights.tolist() == list(range(1, 21))
        total = sum(len(b.vectors) for b in blocks)
        assert total == sum(len(shell_vectors(h, 2, spec)) for h in range(1, 21))


class TestRecordScan:
    """Test record scans against the brute-force oracle"""

    @pytest.mark.parametrize("ell", [1, 2])
    def test_matches_oracle_sqrt(self, ell):
        alpha = make_sqrt_vector(2, 3)
        spec = ConeSpec(ell)
        _assert_same_records(record_scan(alpha, spec, 30), brute_force_oracle(alpha, spec, 30))

    @pytest.mark.parametrize("seed", range(20))
    @pytest.mark.parametrize("n, ell, N", [(2, 1, 40), (3, 1, 10), (3, 2, 10)])
    def test_matches_oracle_seeded(self, seed, n, ell, N):
        """Same records, heights and overlapping error enclosures"""
        alpha = seeded_vector(n, seed)
        spec = ConeSpec(ell)
        _assert_same_records(record_scan(alpha, spec, N), brute_force_oracle(alpha, spec, N))

    def test_records_improve(self):
        scan = record_scan(make_sqrt_vector(2, 3), ConeSpec(1), 60)
        heights = [r.h for r in scan.records]
        assert heights == sorted(set(heights))
        for prev, curr in zip(scan.records, scan.records[1:]):
            assert curr.err.lower <= prev.err.upper
        assert scan.unresolved == 0

    def test_exact_zero_is_skipped(self):
        """Integer values of x.α such as x = (3, -1) never become records"""
        alpha = RealVector.of(Fraction(1, 3), 1)
        scan = record_scan(alpha, ConeSpec(2), 10)
        assert all(r.err.lower > 0 for r in scan.records)

    def test_workers_do_not_change_result(self):
        alpha = make_sqrt_vector(2, 3)
        single = record_scan(alpha, ConeSpec(1), 40)
        pooled = record_scan(alpha, ConeSpec(1), 40, workers=2)
        assert _summary(single) == _summary(pooled)

    def test_oracle_cap(self):
        alpha = make_sqrt_vector(2, 3)
        with pytest.raises(CapExceeded):
            brute_force_oracle(alpha, ConeSpec(1), 500)
        with pytest.raises(CapExceeded):
            brute_force_oracle(seeded_vector(4, 0), ConeSpec(1), 5)

    def test_csv_rows(self):
        scan = record_scan(make_sqrt_vector(2, 3), ConeSpec(1), 20)
        rows = records_csv_rows(scan.records)
        assert len(rows) == len(scan.records)
        assert all(len(row) == len(RECORDS_CSV_HEADER) for row in rows)
        assert rows[0][1] == ";".join(str(v) for v in scan.records[0].x)


class TestEstimators:
    """Test truncated exponent estimates"""

    def test_estimate_mu_burn_in(self):
        scan = record_scan(make_sqrt_vector(2, 3), ConeSpec(1), 50)
        report = estimate_mu(scan, burn_in=10)
        assert report.kind == "mu"
        assert report.truncation_height == 50
        assert report.estimate == max(r.ratio for r in scan.records if r.h >= 10)

    def test_estimate_mu_invalid_burn_in(self):
        scan = record_scan(make_sqrt_vector(2, 3), ConeSpec(1), 20)
        with pytest.raises(ValidationError):
            estimate_mu(scan, burn_in=1)
        with pytest.raises(NoRecords):
            estimate_mu(scan, burn_in=100)

    def test_gap_series_axis_ratio(self):
        """||32 α_1|| = 2^-20 + ..., so the ratio at height 32 is just below 4"""
        alpha = gap_series_vector(2, 4, seed=0)
        report = estimate_mu(axis_scan(alpha, 1 << 12, 0))
        assert 3.9 <= report.estimate <= 4.0

    def test_gap_series_axis_ratio_full_size(self):
        report = estimate_mu(axis_scan(gap_series_vector(3, 4, seed=0), 1 << 25, 0))
        assert report.estimate >= 3.9

    def test_estimate_mu_non_decreasing(self):
        alpha = make_sqrt_vector(2, 3, 5)
        estimates = [
            estimate_mu(record_scan(alpha, ConeSpec(1), N), burn_in=2).estimate for N in (10, 20, 40)
        ]
        assert estimates == sorted(estimates)

    def test_cone_estimate_below_full_estimate(self):
        alpha = make_sqrt_vector(2, 3)
        cone = estimate_mu(record_scan(alpha, ConeSpec(1), 60), burn_in=2)
        full = estimate_mu(record_scan(alpha, ConeSpec(2), 60), burn_in=2)
        assert cone.estimate <= full.estimate

    def test_estimate_w_is_full_cone_mu(self):
        alpha = make_sqrt_vector(2, 3)
        report = estimate_w(alpha, 40, burn_in=2)
        full = estimate_mu(record_scan(alpha, ConeSpec(2), 40), burn_in=2)
        assert report.kind == "w"
        assert report.estimate == full.estimate
        assert report.records == full.records

    def test_nu_tilde_planar_matches_mu(self):
        """With a single tail coordinate the auxiliary form is the full form"""
        alpha = make_sqrt_vector(2, 3)
        nu = estimate_nu_tilde(alpha, 1, 40, burn_in=2)
        mu = estimate_mu(record_scan(alpha, ConeSpec(1), 40), burn_in=2)
        assert nu.records == mu.records
        assert nu.estimate == mu.estimate

    def test_dirichlet_bound(self):
        assert dirichlet_bound(2, 1) == Fraction(1, 2)
        assert dirichlet_bound(10, 3) == Fraction(1, 1330)

    def test_default_grid(self):
        assert default_grid(40) == [2, 4, 8, 16, 32]

    def test_estimate_w_hat(self):
        report = estimate_w_hat(make_sqrt_vector(2, 3), 64)
        assert report.kind == "w_hat"
        assert report.dirichlet_failures == []
        assert [s.X for s in report.grid] == [2, 4, 8, 16, 32, 64]
        assert report.estimate == min(s.ratio for s in report.grid)

    def test_estimate_w_hat_grid_bounds(self):
        with pytest.raises(ValidationError):
            estimate_w_hat(make_sqrt_vector(2, 3), 64, grid=[1, 8])

    def test_nu_tilde_needs_proper_cone(self):
        alpha = make_sqrt_vector(2, 3, 5)
        report = estimate_nu_tilde(alpha, 1, 15, burn_in=2)
        assert report.kind == "nu_tilde"
        with pytest.raises(ValidationError):
            estimate_nu_tilde(alpha, 3, 15)


class TestDirichletFloors:
    """Test the pigeonhole floors"""

    @pytest.mark.parametrize("N", [10, 50])
    def test_floor_report(self, N):
        report = dirichlet_floor_report(make_sqrt_vector(2, 3, 5), ConeSpec(1), N)
        assert report.axis_ok
        assert report.full_ok

    @pytest.mark.parametrize("seed", range(10))
    @pytest.mark.parametrize("ell", [1, 2])
    @pytest.mark.parametrize("N", [10, 100, 1000])
    def test_floor_report_seeded(self, seed, ell, N):
        report = dirichlet_floor_report(seeded_vector(3, seed), ConeSpec(ell), N)
        assert report.axis_ok
        assert report.full_ok
        assert parse_rational(report.axis_best) < dirichlet_bound(N, ell)
        assert parse_rational(report.full_best) < dirichlet_bound(N, 3)

    @pytest.mark.parametrize("seed", [0, 1])
    def test_full_best_matches_scan(self, seed):
        """The lattice witness is the last record of the unrestricted scan"""
        alpha = seeded_vector(3, seed)
        report = dirichlet_floor_report(alpha, ConeSpec(1), 12)
        last = record_scan(alpha, ConeSpec(3), 12).records[-1]
        assert float(parse_rational(report.full_best)) == pytest.approx(float(last.err.upper), rel=1e-9)

    def test_floor_check(self):
        assert dirichlet_floor_check(make_sqrt_vector(2, 3), ConeSpec(1), 10)

    def test_floor_check_large_height(self):
        assert dirichlet_floor_check(seeded_vector(3, 4), ConeSpec(2), 1000)

    def test_floor_check_invalid_height(self):
        with pytest.raises(ValidationError):
            dirichlet_floor_check(make_sqrt_vector(2, 3), ConeSpec(1), 0)
