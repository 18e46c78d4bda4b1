"""
Common utilities for the cone-exponents laboratory
"""

import csv
import io
import json
import math
import os
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Tuple, Union

# Constants
DEFAULT_PRECISION_BITS = 128
DEFAULT_PRECISION_CAP = 4096
SCHEMA_VERSION = "1.0"

Number = Union[int, Fraction]


class ConeExponentsError(Exception):
    """Base exception for cone-exponents errors"""

    pass


class ValidationError(ConeExponentsError, ValueError):
    """Raised when user-supplied parameters are invalid"""

    pass


class DimensionMismatch(ConeExponentsError, ValueError):
    """Raised when vector dimensions disagree"""

    pass


class DomainError(ConeExponentsError, ValueError):
    """Raised when a formula is evaluated outside its domain"""

    pass


class PrecisionExhausted(ConeExponentsError):
    """Raised when a comparison cannot be certified below the precision cap"""

    pass


class CapExceeded(ConeExponentsError):
    """Raised when a request exceeds a configured size cap"""

    pass


class NoRecords(ConeExponentsError):
    """Raised when no record survives the burn-in height"""

    pass


class NoRootInWindow(ConeExponentsError):
    """Raised when no real root lies in the requested window"""

    pass


class MultipleRootsUnresolved(ConeExponentsError):
    """Raised when a window keeps more than one root after shrinking"""

    pass


class SearchExhausted(ConeExponentsError):
    """Raised when a construction step finds no admissible candidate"""

    pass


class InvariantViolation(ConeExponentsError):
    """Raised when a guaranteed mathematical property fails (a bug)"""

    pass


class CorridorViolation(InvariantViolation):
    """Raised when a Möbius sum leaves the (6/π², 1] corridor"""

    pass


class SearchBudgetExceeded(InvariantViolation):
    """Raised when the convex body search returns no lattice point"""

    pass


def _env_int(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    return value


def get_precision_cap() -> int:
    """Precision escalation cap in bits (CONE_EXPONENTS_PRECISION_CAP)"""
    return _env_int("CONE_EXPONENTS_PRECISION_CAP", DEFAULT_PRECISION_CAP)


def get_default_precision() -> int:
    """Working precision for generated vectors (CONE_EXPONENTS_PRECISION)"""
    return _env_int("CONE_EXPONENTS_PRECISION", DEFAULT_PRECISION_BITS)


def get_thread_count() -> int:
    """Worker cap used when no explicit value is given (CONE_EXPONENTS_THREADS)"""
    return _env_int("CONE_EXPONENTS_THREADS", 1)


def get_cache_dir() -> Optional[Path]:
    """Directory for persisted prime sieves, or None for in-memory only"""
    raw = os.getenv("CONE_EXPONENTS_CACHE_DIR")
    if not raw:
        return None
    return Path(raw).expanduser()


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    Parse an exact rational from '3', '-7/2' or a finite decimal like '1.25'

    Args:
        text: Rational literal or number

    Returns:
        Fraction: Exact value

    Raises:
        ValidationError: If the literal is not an exact rational
    """
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    value = str(text).strip()
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"Invalid rational: {text!r}")


def parse_height_range(text: str) -> Tuple[int, int]:
    """
    Parse a height range 'A..B' (inclusive) or a single height 'N'

    Args:
        text: Range literal

    Returns:
        tuple: (low, high) with 1 <= low <= high

    Raises:
        ValidationError: If the range is malformed or empty
    """
    match = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not match:
        raise ValidationError(f"Invalid height range: {text!r}")
    low = int(match.group(1))
    high = int(match.group(2)) if match.group(2) is not None else low
    if low < 1 or high < low:
        raise ValidationError(f"Empty height range: {text!r}")
    return low, high


def parse_targets(text: str) -> Tuple[Fraction, ...]:
    """Parse a comma-separated list of rational targets"""
    parts = [part for part in text.split(",") if part.strip()]
    if not parts:
        raise ValidationError("Targets list is empty")
    return tuple(parse_rational(part) for part in parts)


def format_rational(value: Number) -> str:
    """Render an exact rational as 'p' or 'p/q'"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def log_of_rational(value: Fraction) -> float:
    """Natural log of a positive rational with big numerator/denominator"""
    if value <= 0:
        raise DomainError(f"log of non-positive value {value}")
    return math.log(value.numerator) - math.log(value.denominator)


def log_ratio(err: Fraction, height: int) -> Optional[float]:
    """
    Exponent ratio -log(err)/log(height)

    Returns:
        float or None: None when height < 2, where the ratio is undefined
    """
    if height < 2:
        return None
    return -log_of_rational(Fraction(err)) / math.log(height)


def dump_json(payload: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline"""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Union[str, Path], payload: Any) -> Path:
    """Write deterministic JSON to path, creating parent directories"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dump_json(payload), encoding="utf-8")
    return target


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Render rows as CSV text with '\\n' line endings"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def write_csv(
    path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> Path:
    """Write a CSV table to path, creating parent directories"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(render_csv(header, rows), encoding="utf-8")
    return target
