"""Tests for parsing, configuration and output helpers"""

import os
from fractions import Fraction
from unittest.mock import patch

import pytest

from utils import (
    DEFAULT_PRECISION_CAP,
    CorridorViolation,
    DimensionMismatch,
    DomainError,
    InvariantViolation,
    SearchBudgetExceeded,
    ValidationError,
    dump_json,
    format_rational,
    get_cache_dir,
    get_precision_cap,
    get_thread_count,
    log_ratio,
    parse_height_range,
    parse_rational,
    parse_targets,
    render_csv,
    write_csv,
    write_json,
)


class TestParsing:
    """Test literal parsing"""

    def test_parse_rational_forms(self):
        """Integers, fractions and finite decimals parse exactly"""
        assert parse_rational("3") == 3
        assert parse_rational("-7/2") == Fraction(-7, 2)
        assert parse_rational("1.25") == Fraction(5, 4)
        assert parse_rational(Fraction(2, 3)) == Fraction(2, 3)

    def test_parse_rational_invalid(self):
        """Garbage and zero denominators are rejected"""
        with pytest.raises(ValidationError):
            parse_rational("abc")
        with pytest.raises(ValidationError):
            parse_rational("1/0")

    def test_parse_height_range(self):
        """Ranges and single heights"""
        assert parse_height_range("1..500") == (1, 500)
        assert parse_height_range("42") == (42, 42)
        assert parse_height_range(" 3 .. 7 ") == (3, 7)

    @pytest.mark.parametrize("text", ["0..5", "9..3", "a..b", "", "1..", "-1"])
    def test_parse_height_range_invalid(self, text):
        """Empty or malformed ranges raise"""
        with pytest.raises(ValidationError):
            parse_height_range(text)

    def test_parse_targets(self):
        """Comma-separated rationals"""
        assert parse_targets("60, 61,62") == (60, 61, 62)
        assert parse_targets("5/2,3") == (Fraction(5, 2), 3)
        with pytest.raises(ValidationError):
            parse_targets(" , ")


class TestFormatting:
    """Test rational rendering and ratios"""

    def test_format_rational(self):
        assert format_rational(Fraction(4, 2)) == "2"
        assert format_rational(Fraction(-3, 6)) == "-1/2"

    def test_log_ratio(self):
        """Ratio is undefined below height 2"""
        assert log_ratio(Fraction(1, 100), 1) is None
        assert log_ratio(Fraction(1, 100), 10) == pytest.approx(2.0)

    def test_log_ratio_huge_denominator(self):
        """Big rationals do not overflow floats"""
        assert log_ratio(Fraction(1, 2**2000), 2**1000) == pytest.approx(2.0)


class TestEnvironment:
    """Test environment-driven settings"""

    def test_precision_cap_default(self):
        with patch.dict(os.environ, {}, clear=True):
            assert get_precision_cap() == DEFAULT_PRECISION_CAP

    def test_precision_cap_override(self):
        with patch.dict(os.environ, {"CONE_EXPONENTS_PRECISION_CAP": "512"}):
            assert get_precision_cap() == 512

    def test_invalid_thread_count(self):
        """Non-integers and values below the minimum raise"""
        with patch.dict(os.environ, {"CONE_EXPONENTS_THREADS": "many"}):
            with pytest.raises(ValidationError):
                get_thread_count()
        with patch.dict(os.environ, {"CONE_EXPONENTS_THREADS": "0"}):
            with pytest.raises(ValidationError):
                get_thread_count()

    def test_cache_dir(self, tmp_path):
        with patch.dict(os.environ, {"CONE_EXPONENTS_CACHE_DIR": str(tmp_path)}):
            assert get_cache_dir() == tmp_path
        with patch.dict(os.environ, {}, clear=True):
            assert get_cache_dir() is None


class TestErrors:
    """Test the exception hierarchy"""

    def test_user_errors_are_value_errors(self):
        for error in (ValidationError, DimensionMismatch, DomainError):
            assert issubclass(error, ValueError)

    def test_invariant_violations(self):
        assert issubclass(CorridorViolation, InvariantViolation)
        assert issubclass(SearchBudgetExceeded, InvariantViolation)


class TestWriters:
    """Test deterministic writers"""

    def test_dump_json_is_sorted(self):
        text = dump_json({"b": 1, "a": [1, 2]})
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')
        assert dump_json({"b": 1, "a": 2}) == dump_json({"a": 2, "b": 1})

    def test_write_json_creates_parents(self, tmp_path):
        path = write_json(tmp_path / "nested" / "out.json", {"x": 1})
        assert path.read_text(encoding="utf-8") == '{\n  "x": 1\n}\n'

    def test_csv_line_endings(self, tmp_path):
        text = render_csv(["a", "b"], [[1, 2], [3, 4]])
        assert text == "a,b\n1,2\n3,4\n"
        path = write_csv(tmp_path / "t.csv", ["a"], [[1]])
        assert path.read_bytes() == b"a\n1\n"
