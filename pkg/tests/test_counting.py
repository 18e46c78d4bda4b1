"""Tests for the sieve, arithmetic functions and counting identities"""

import os
from fractions import Fraction
from unittest.mock import patch

import numpy as np
import pytest

import counting
from counting import (
    PN_CSV_HEADER,
    build_sieve,
    count_csv_rows,
    count_PN_exact,
    count_PN_moebius,
    count_prime_tail_exact,
    count_prime_tail_moebius_proxy,
    count_report,
    divisors,
    dyadic_divergence_probe,
    exceeds_six_over_pi_squared,
    factorize,
    moebius,
    moebius_sum,
    moebius_sum_bound,
    phi_sum_error_bound_check,
    prime_count,
    primes_up_to,
    six_over_pi_squared,
    totient,
    totient_partial_sum,
)
from utils import ValidationError


class TestSieve:
    """Test sieve tables"""

    def test_small_values(self):
        tables = build_sieve(30)
        assert tables.mobius[30] == -1
        assert tables.mobius[12] == 0
        assert tables.phi[12] == 4
        assert tables.spf[15] == 3
        assert tables.primes.tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_sieve_matches_functions(self):
        tables = build_sieve(200)
        for m in range(1, 201):
            assert tables.mobius[m] == moebius(m)
            assert tables.phi[m] == totient(m)

    def test_cache_round_trip(self, tmp_path):
        """Tables are written once and read back unchanged"""
        with patch.dict(os.environ, {"CONE_EXPONENTS_CACHE_DIR": str(tmp_path)}):
            first = counting._load_or_build(64)
            assert (tmp_path / "sieve_64.npz").exists()
            second = counting._load_or_build(64)
        assert np.array_equal(first.phi, second.phi)
        assert np.array_equal(first.mobius, second.mobius)

    def test_unreadable_cache_is_rebuilt(self, tmp_path):
        (tmp_path / "sieve_64.npz").write_bytes(b"not a numpy archive")
        with patch.dict(os.environ, {"CONE_EXPONENTS_CACHE_DIR": str(tmp_path)}):
            tables = counting._load_or_build(64)
        assert tables.phi[10] == 4


class TestArithmetic:
    """Test arithmetic functions"""

    def test_factorize(self):
        assert factorize(360) == {2: 3, 3: 2, 5: 1}
        assert factorize(2**61 - 1) == {2**61 - 1: 1}
        with pytest.raises(ValidationError):
            factorize(0)

    def test_divisors(self):
        assert divisors(12) == [1, 2, 3, 4, 6, 12]
        assert divisors(1) == [1]

    def test_totient_sum(self):
        assert totient_partial_sum(10) == 32

    def test_primes(self):
        assert primes_up_to(10) == [2, 3, 5, 7]
        assert primes_up_to(1) == []
        assert prime_count(100) == 25
        assert prime_count(1.5) == 0

    def test_six_over_pi_squared(self):
        lo, hi = six_over_pi_squared(64)
        assert lo < hi
        assert float(lo) == pytest.approx(0.6079271018540267)
        assert exceeds_six_over_pi_squared(Fraction(61, 100))
        assert not exceeds_six_over_pi_squared(Fraction(3, 5))


class TestMoebiusSums:
    """Test the Möbius sum and its corridor"""

    def test_product_form(self):
        """(1 - 1/4)(1 - 1/9) = 2/3"""
        assert moebius_sum(3, 12) == Fraction(2, 3)
        assert moebius_sum_bound(3, 12) == Fraction(2, 3)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_sum_matches_product(self, n):
        for N in range(1, 60):
            assert moebius_sum_bound(n, N) == moebius_sum(n, N)

    def test_unit_height(self):
        assert moebius_sum_bound(3, 1) == 1

    def test_dimension_two_rejected(self):
        with pytest.raises(ValidationError):
            moebius_sum_bound(2, 10)


class TestPrimitiveCounts:
    """Test #P_N by enumeration and by inversion"""

    def test_known_counts(self):
        """x = (10, 1) and (10, 3) are the only primitive points at N = 10"""
        assert count_PN_exact(2, 1, 10) == 2
        assert count_PN_exact(2, 1, 1) == 0

    @pytest.mark.parametrize("n,ell", [(2, 1), (3, 1), (3, 2), (4, 2)])
    def test_direct_matches_inversion(self, n, ell):
        limit = 40 if n <= 3 else 16
        for N in range(1, limit + 1):
            assert count_PN_exact(n, ell, N) == count_PN_moebius(n, ell, N)

    def test_invalid_cone(self):
        with pytest.raises(ValidationError):
            count_PN_moebius(3, 3, 10)
        with pytest.raises(ValidationError):
            count_PN_exact(3, 1, 0)

    def test_prime_tail(self):
        """Primes 3 and 5 pair with x_1 = 10 after dropping 2 and 5"""
        assert count_prime_tail_exact(1, 10) == 1
        assert count_prime_tail_moebius_proxy(1, 10) == 2.0
        assert count_prime_tail_exact(1, 3) == 0


class TestDivergence:
    """Test dyadic sums and totient asymptotics"""

    def test_dyadic_probe_partial_sums(self):
        """With ψ = 1 the partial sums are Σ_{r < 2^k} φ(r)"""
        assert dyadic_divergence_probe(lambda q: 1.0, 3) == [0.0, 1.0, 4.0, 18.0]
        assert dyadic_divergence_probe(lambda q: 1.0, 0) == [0.0]

    def test_dyadic_probe_converges(self):
        """ψ(q) = q^-3 gives a summable series"""
        sums = dyadic_divergence_probe(lambda q: q**-3.0, 16)
        assert len(sums) == 17
        assert sums[-1] - sums[-5] < 1e-3

    def test_phi_sum_error(self):
        assert phi_sum_error_bound_check(2, 2000) == []
        with pytest.raises(ValidationError):
            phi_sum_error_bound_check(10, 5)


class TestCountReport:
    """Test the collected count report"""

    def test_report(self):
        report = count_report(3, 1, 1, 12, exact=True)
        assert report.corridor_violations == []
        assert report.pn_counts == report.pn_exact_counts
        assert report.moebius_sums[12] == "2/3"
        assert report.totient_sums[10] == 32
        assert 0 < report.ratio_min <= report.ratio_max

    def test_csv(self):
        report = count_report(3, 2, 5, 9)
        rows = count_csv_rows(report)
        assert [row[0] for row in rows] == ["5", "6", "7", "8", "9"]
        assert all(len(row) == len(PN_CSV_HEADER) for row in rows)

    def test_empty_range(self):
        with pytest.raises(ValidationError):
            count_report(3, 1, 10, 5)
