"""
Certified arithmetic core: precision reals, vectors, cones and linear-form errors

Every real input is held as an exact rational enclosure [lower, upper] together
with the origin that produced it, so any coordinate can be re-evaluated at a
higher precision and comparisons are decided on exact integers.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, ClassVar, Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from pydantic import BaseModel, Field, model_validator
from pydantic import ValidationError as PydanticValidationError

from utils import (
    DEFAULT_PRECISION_BITS,
    DimensionMismatch,
    PrecisionExhausted,
    ValidationError,
    format_rational,
    get_precision_cap,
    parse_rational,
)

logger = logging.getLogger(__name__)

IntVector = Tuple[int, ...]

_X = sympy.Symbol("x")


def _floor_scaled(value: Fraction, scale: int) -> int:
    return (value.numerator * scale) // value.denominator


def _ceil_scaled(value: Fraction, scale: int) -> int:
    return -((-value.numerator * scale) // value.denominator)


def _sign_at(coeffs: Tuple[int, ...], point: Fraction) -> int:
    """Sign of P(point) for integer coefficients, highest degree first"""
    num, den = point.numerator, point.denominator
    acc = coeffs[0]
    den_power = 1
    for c in coeffs[1:]:
        den_power *= den
        acc = acc * num + c * den_power
    return (acc > 0) - (acc < 0)


@lru_cache(maxsize=128)
def _count_roots(coeffs: Tuple[int, ...], lower: Fraction, upper: Fraction) -> int:
    poly = sympy.Poly(list(coeffs), _X)
    return int(
        poly.count_roots(
            sympy.Rational(lower.numerator, lower.denominator),
            sympy.Rational(upper.numerator, upper.denominator),
        )
    )


@lru_cache(maxsize=1024)
def _refine_root(
    coeffs: Tuple[int, ...], lower: Fraction, upper: Fraction, bits: int
) -> Tuple[Fraction, Fraction]:
    """Bisect the isolating interval until width <= 2^-bits * max(1, |root|)"""
    lo, hi = lower, upper
    sign_lo = _sign_at(coeffs, lo)
    if sign_lo == 0:
        return lo, lo
    if _sign_at(coeffs, hi) == 0:
        return hi, hi
    unit = Fraction(1, 1 << bits)
    while hi - lo > unit * max(1, abs(lo), abs(hi)):
        mid = (lo + hi) / 2
        sign_mid = _sign_at(coeffs, mid)
        if sign_mid == 0:
            return mid, mid
        if sign_mid == sign_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


@dataclass(frozen=True)
class RationalOrigin:
    """Exact rational p/q"""

    value: Fraction

    kind: ClassVar[str] = "rational"
    exact: ClassVar[bool] = True

    def enclose(self, bits: int) -> Tuple[Fraction, Fraction]:
        return self.value, self.value

    def to_spec(self) -> Dict[str, Any]:
        return {"kind": self.kind, "value": format_rational(self.value)}


@dataclass(frozen=True)
class DecimalOrigin:
    """Finite decimal string, converted exactly"""

    text: str

    kind: ClassVar[str] = "decimal"
    exact: ClassVar[bool] = True

    def __post_init__(self):
        try:
            Decimal(self.text)
        except InvalidOperation:
            raise ValidationError(f"Invalid decimal literal: {self.text!r}")
        if not Decimal(self.text).is_finite():
            raise ValidationError(f"Decimal literal must be finite: {self.text!r}")

    @property
    def value(self) -> Fraction:
        return Fraction(Decimal(self.text))

    def enclose(self, bits: int) -> Tuple[Fraction, Fraction]:
        return self.value, self.value

    def to_spec(self) -> Dict[str, Any]:
        return {"kind": self.kind, "value": self.text}


@dataclass(frozen=True)
class AlgebraicOrigin:
    """
    Real root of an integer polynomial inside an isolating interval

    Coefficients are listed from the highest degree down. The polynomial is
    reduced to its squarefree part on construction through PrecisionReal.algebraic.
    """

    coeffs: Tuple[int, ...]
    lower: Fraction
    upper: Fraction

    kind: ClassVar[str] = "algebraic"
    exact: ClassVar[bool] = False

    def __post_init__(self):
        if len(self.coeffs) < 2 or self.coeffs[0] == 0:
            raise ValidationError("Algebraic origin needs a polynomial of degree >= 1")
        if self.lower > self.upper:
            raise ValidationError("Isolating interval has lower > upper")
        roots = _count_roots(self.coeffs, self.lower, self.upper)
        if roots != 1:
            raise ValidationError(
                f"Interval [{self.lower}, {self.upper}] holds {roots} roots, expected 1"
            )

    def enclose(self, bits: int) -> Tuple[Fraction, Fraction]:
        return _refine_root(self.coeffs, self.lower, self.upper, bits)

    def to_spec(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "coeffs": list(self.coeffs),
            "lower": format_rational(self.lower),
            "upper": format_rational(self.upper),
        }


@dataclass(frozen=True)
class SeriesOrigin:
    """
    Lacunary series sum_k 2^(-a_k), a_1 = start, a_(k+1) = ceil(growth * a_k)

    The tail after a_k is at most 2^(-a_(k+1)+1), so the enclosure
    [S_k, S_k + 2^(-a_(k+1)+1)] is exact and nested across precisions.
    """

    growth: Fraction
    start: int = 1

    kind: ClassVar[str] = "series"
    exact: ClassVar[bool] = False

    def __post_init__(self):
        if self.growth <= 1:
            raise ValidationError("Series growth must exceed 1")
        if self.start < 1:
            raise ValidationError("Series start exponent must be >= 1")

    def exponents(self, limit: int) -> List[int]:
        """All exponents a_k <= limit, followed by the first one above it"""
        result = [self.start]
        while result[-1] <= limit:
            result.append(math.ceil(self.growth * result[-1]))
        return result

    def partial_sum(self, terms: int) -> Fraction:
        exps = [self.start]
        while len(exps) < terms:
            exps.append(math.ceil(self.growth * exps[-1]))
        return sum((Fraction(1, 1 << a) for a in exps[:terms]), Fraction(0))

    def tail_bound(self, terms: int) -> Fraction:
        """Upper bound 2^(-a_(terms+1)+1) on the tail after `terms` terms"""
        exps = [self.start]
        while len(exps) < terms + 1:
            exps.append(math.ceil(self.growth * exps[-1]))
        return Fraction(2, 1 << exps[terms])

    def enclose(self, bits: int) -> Tuple[Fraction, Fraction]:
        exps = self.exponents(bits + 1)
        head = sum((Fraction(1, 1 << a) for a in exps[:-1]), Fraction(0))
        return head, head + Fraction(2, 1 << exps[-1])

    def to_spec(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "growth": format_rational(self.growth),
            "start": self.start,
        }


Origin = Union[RationalOrigin, DecimalOrigin, AlgebraicOrigin, SeriesOrigin]


@dataclass(frozen=True)
class PrecisionReal:
    """Certified enclosure of a real number; equality ignores precision_bits"""

    lower: Fraction
    upper: Fraction
    precision_bits: int = field(default=DEFAULT_PRECISION_BITS, compare=False)
    origin: Optional[Origin] = None

    def __post_init__(self):
        object.__setattr__(self, "lower", Fraction(self.lower))
        object.__setattr__(self, "upper", Fraction(self.upper))
        if self.lower > self.upper:
            raise ValidationError(f"Empty interval [{self.lower}, {self.upper}]")
        if self.precision_bits < 1:
            raise ValidationError("precision_bits must be positive")

    @classmethod
    def exact(cls, value: Union[int, Fraction], bits: int = DEFAULT_PRECISION_BITS):
        value = Fraction(value)
        return cls(value, value, bits)

    @classmethod
    def from_origin(cls, origin: Origin, bits: int = DEFAULT_PRECISION_BITS):
        lower, upper = origin.enclose(bits)
        return cls(lower, upper, bits, origin)

    @classmethod
    def rational(cls, p: int, q: int = 1, bits: int = DEFAULT_PRECISION_BITS):
        if q == 0:
            raise ValidationError("Zero denominator")
        return cls.from_origin(RationalOrigin(Fraction(p, q)), bits)

    @classmethod
    def decimal(cls, text: str, bits: int = DEFAULT_PRECISION_BITS):
        return cls.from_origin(DecimalOrigin(text.strip()), bits)

    @classmethod
    def algebraic(
        cls,
        coeffs: Sequence[int],
        lower: Union[str, int, Fraction],
        upper: Union[str, int, Fraction],
        bits: int = DEFAULT_PRECISION_BITS,
    ):
        poly = sympy.Poly([int(c) for c in coeffs], _X)
        squarefree = sympy.Poly(sympy.sqf_part(poly.as_expr()), _X)
        primitive = squarefree.primitive()[1]
        if primitive.LC() < 0:
            primitive = -primitive
        normalized = tuple(int(c) for c in primitive.all_coeffs())
        origin = AlgebraicOrigin(normalized, parse_rational(lower), parse_rational(upper))
        return cls.from_origin(origin, bits)

    @classmethod
    def series(
        cls,
        growth: Union[str, int, Fraction],
        bits: int = DEFAULT_PRECISION_BITS,
        start: int = 1,
    ):
        return cls.from_origin(SeriesOrigin(parse_rational(growth), start), bits)

    def at(self, bits: int) -> "PrecisionReal":
        """Re-evaluate at another precision (exact values only change metadata)"""
        if self.origin is not None:
            return PrecisionReal.from_origin(self.origin, bits)
        if self.is_exact:
            return PrecisionReal(self.lower, self.upper, bits)
        raise PrecisionExhausted("Cannot refine an enclosure without an origin")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    @property
    def is_exact_zero(self) -> bool:
        return self.lower == 0 and self.upper == 0

    def contains(self, value: Union[int, Fraction]) -> bool:
        return self.lower <= value <= self.upper

    def __float__(self) -> float:
        return float(self.midpoint)

    def __str__(self) -> str:
        if self.is_exact:
            return format_rational(self.lower)
        return f"[{float(self.lower)!r}, {float(self.upper)!r}]"


EXACT_ZERO = PrecisionReal.exact(0)


def compare_certified(a: PrecisionReal, b: PrecisionReal) -> Optional[int]:
    """-1, 0 or 1 when the order of a and b is certified, None when they overlap"""
    if a.upper < b.lower:
        return -1
    if b.upper < a.lower:
        return 1
    if a.is_exact and b.is_exact and a.lower == b.lower:
        return 0
    return None


@dataclass(frozen=True)
class RealVector:
    """Target vector α; all coordinates share the minimum precision"""

    coords: Tuple[PrecisionReal, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) < 1:
            raise ValidationError("A vector needs at least one coordinate")

    @classmethod
    def of(cls, *values: Union[PrecisionReal, int, Fraction, str], bits: int = 0):
        """Build from reals, ints/Fractions (rational) or decimal strings"""
        bits = bits or DEFAULT_PRECISION_BITS
        coords = []
        for value in values:
            if isinstance(value, PrecisionReal):
                coords.append(value)
            elif isinstance(value, str) and "/" in value:
                coords.append(PrecisionReal.from_origin(RationalOrigin(Fraction(value)), bits))
            elif isinstance(value, str):
                coords.append(PrecisionReal.decimal(value, bits))
            else:
                coords.append(PrecisionReal.from_origin(RationalOrigin(Fraction(value)), bits))
        return cls(tuple(coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def precision_bits(self) -> int:
        return min(c.precision_bits for c in self.coords)

    @property
    def is_exact(self) -> bool:
        return all(c.is_exact for c in self.coords)

    def at(self, bits: int) -> "RealVector":
        return RealVector(tuple(c.at(bits) for c in self.coords))

    def project(self, indices: Sequence[int]) -> "RealVector":
        return RealVector(tuple(self.coords[i] for i in indices))

    def to_spec(self) -> Dict[str, Any]:
        coords = []
        for c in self.coords:
            if c.origin is not None:
                coords.append(c.origin.to_spec())
            elif c.is_exact:
                coords.append({"kind": "rational", "value": format_rational(c.lower)})
            else:
                raise ValidationError("Vector coordinate has no serializable origin")
        return {"n": self.n, "coords": coords, "precision_bits": self.precision_bits}


@dataclass(frozen=True)
class ConeSpec:
    """
    Cone of integer vectors whose height is attained among the first ell
    coordinates: max|tail| < C * max|head| (or <= when strict is False)
    """

    ell: int
    constant_C: Fraction = Fraction(1)
    strict: bool = True

    def __post_init__(self):
        object.__setattr__(self, "constant_C", Fraction(self.constant_C))
        if self.ell < 1:
            raise ValidationError(f"ell must be >= 1, got {self.ell}")
        if self.constant_C <= 0:
            raise ValidationError("constant_C must be positive")

    def check_dimension(self, n: int) -> None:
        if self.ell > n:
            raise DimensionMismatch(f"ell={self.ell} exceeds dimension n={n}")

    def is_vacuous(self, n: int) -> bool:
        return self.ell == n

    def tail_bound(self, head_max: int) -> int:
        """Largest admissible max|tail| for a head of maximum head_max"""
        scaled = self.constant_C * head_max
        if self.strict:
            return math.ceil(scaled) - 1
        return math.floor(scaled)


def height(x: Sequence[int]) -> int:
    """Naive height max |x_i| (0 for the zero vector)"""
    return max((abs(v) for v in x), default=0)


def in_cone(x: Sequence[int], spec: ConeSpec) -> bool:
    """True iff the height of x is attained among its first ell coordinates"""
    spec.check_dimension(len(x))
    if spec.is_vacuous(len(x)):
        return True
    head = max(abs(v) for v in x[: spec.ell])
    tail = max(abs(v) for v in x[spec.ell :])
    bound = spec.constant_C * head
    return tail < bound if spec.strict else tail <= bound


def _distance_units(s_lo: int, s_hi: int, scale: int) -> Tuple[int, int]:
    """
    Enclosure of the distance to the nearest integer of [s_lo, s_hi] / scale,
    in units of 1 / (2 * scale)
    """
    k, r_lo = divmod(s_lo, scale)
    r_hi = s_hi - k * scale

    def tent(r: int) -> int:
        return 2 * min(r, scale - r)

    if r_hi <= scale:
        lo = min(tent(r_lo), tent(r_hi))
        if 2 * r_lo <= scale <= 2 * r_hi:
            hi = scale
        else:
            hi = max(tent(r_lo), tent(r_hi))
        return lo, hi
    if r_hi <= 2 * scale:
        left = scale if 2 * r_lo <= scale else tent(r_lo)
        rest = r_hi - scale
        right = scale if 2 * rest >= scale else tent(rest)
        return 0, max(left, right)
    return 0, scale


def dist_to_nearest_int(r: PrecisionReal) -> PrecisionReal:
    """
    Certified enclosure of ||r||, the distance from r to the nearest integer

    Raises:
        PrecisionExhausted: If the enclosure is too wide to say anything below 1/2
    """
    scale = math.lcm(r.lower.denominator, r.upper.denominator)
    s_lo = r.lower.numerator * (scale // r.lower.denominator)
    s_hi = r.upper.numerator * (scale // r.upper.denominator)
    lo, hi = _distance_units(s_lo, s_hi, scale)
    if lo == 0 and hi == scale and s_lo != s_hi:
        raise PrecisionExhausted(f"Interval {r} is too wide to bracket ||r||")
    return PrecisionReal(Fraction(lo, 2 * scale), Fraction(hi, 2 * scale), r.precision_bits)


@dataclass(frozen=True, eq=False)
class FixedPointView:
    """
    Integer image of α on the grid 1/scale: coordinate i lies in
    [lows[i], highs[i]] / scale, so every linear form is bounded exactly
    with integer arithmetic
    """

    scale: int
    lows: Tuple[int, ...]
    highs: Tuple[int, ...]
    bits: int

    def form_bounds(self, x: Sequence[int]) -> Tuple[int, int]:
        lo = hi = 0
        for xi, a, b in zip(x, self.lows, self.highs):
            if xi >= 0:
                lo += xi * a
                hi += xi * b
            else:
                lo += xi * b
                hi += xi * a
        return lo, hi

    def error(self, x: Sequence[int]) -> PrecisionReal:
        """Enclosure of ||x . α|| at this view's precision"""
        s_lo, s_hi = self.form_bounds(x)
        lo, hi = _distance_units(s_lo, s_hi, self.scale)
        denominator = 2 * self.scale
        if s_lo == s_hi:
            return PrecisionReal(Fraction(lo, denominator), Fraction(hi, denominator), self.bits)
        spread = max(1, sum(abs(v) for v in x)).bit_length()
        return PrecisionReal(
            Fraction(lo, denominator),
            Fraction(hi, denominator),
            max(1, self.bits - spread),
        )


@lru_cache(maxsize=64)
def fixed_point_view(alpha: RealVector, bits: int) -> FixedPointView:
    """Fixed-point view of α at the given precision (cached)"""
    refined = alpha.at(bits)
    scale = 1 << bits
    for c in refined.coords:
        if c.is_exact:
            scale = math.lcm(scale, c.lower.denominator)
    lows = tuple(_floor_scaled(c.lower, scale) for c in refined.coords)
    highs = tuple(_ceil_scaled(c.upper, scale) for c in refined.coords)
    return FixedPointView(scale, lows, highs, bits)


def linear_form_error(
    alpha: RealVector, x: Sequence[int], precision_cap: Optional[int] = None
) -> PrecisionReal:
    """
    Certified enclosure of ||x_1 α_1 + ... + x_n α_n||

    Starts at α's precision and doubles it while the enclosure still touches
    zero. A provably zero form returns EXACT_ZERO.

    Args:
        alpha: Target vector
        x: Integer coefficient vector of the same dimension
        precision_cap: Escalation cap in bits (defaults to the configured cap)

    Returns:
        PrecisionReal: Enclosure with positive lower bound, or EXACT_ZERO

    Raises:
        DimensionMismatch: If len(x) differs from alpha.n
        PrecisionExhausted: If the enclosure still straddles 0 at the cap
    """
    if len(x) != alpha.n:
        raise DimensionMismatch(f"Vector of length {len(x)} against n={alpha.n}")
    cap = precision_cap if precision_cap is not None else get_precision_cap()
    bits = alpha.precision_bits
    while True:
        enclosure = fixed_point_view(alpha, bits).error(x)
        if enclosure.lower > 0:
            return enclosure
        if enclosure.is_exact_zero:
            return EXACT_ZERO
        if bits >= cap:
            raise PrecisionExhausted(
                f"||x.α|| for x={tuple(x)} still straddles 0 at {bits} bits"
            )
        logger.debug("Escalating precision for x=%s from %d bits", tuple(x), bits)
        bits = min(2 * bits, cap)


@dataclass(frozen=True, eq=False)
class FloatScreen:
    """
    Float64 image of α with a rigorous error bound, used to discard integer
    vectors that provably cannot matter before exact evaluation

    For |x_i| <= H the computed distance differs from the true ||x . α|| by at
    most margin(H) = (n + 2) * 2^-50 * (H * (sum|a_i| + 1) + 1) + H * sum(width_i).
    """

    coefficients: np.ndarray
    magnitude: float
    width: float

    def distances(self, vectors: np.ndarray) -> np.ndarray:
        values = vectors.astype(np.float64) @ self.coefficients
        return np.abs(values - np.rint(values))

    def margins(self, heights: np.ndarray) -> np.ndarray:
        n = self.coefficients.shape[0]
        h = heights.astype(np.float64)
        return (n + 2) * 2.0**-50 * (h * self.magnitude + 1.0) + h * self.width


def float_screen(alpha: RealVector) -> FloatScreen:
    coefficients = np.array([float(c.midpoint) for c in alpha.coords], dtype=np.float64)
    magnitude = float(np.sum(np.abs(coefficients))) + 1.0
    width = 2.0 * sum(float(c.width) for c in alpha.coords)
    return FloatScreen(coefficients, magnitude, width)


def _power_enclosure(lower: Fraction, upper: Fraction, k: int) -> Tuple[Fraction, Fraction]:
    candidates = [lower**k, upper**k]
    lo, hi = min(candidates), max(candidates)
    if k % 2 == 0 and lower < 0 < upper:
        lo = Fraction(0)
    return lo, hi


def veronese_vector(xi: PrecisionReal, n: int) -> RealVector:
    """
    The point (ξ^n, ξ^(n-1), ..., ξ) on the Veronese curve

    ξ must be rational or algebraic. Each power gets its own algebraic origin:
    the resultant of P(y) and x - y^k annihilates ξ^k, and the isolating interval
    comes from powering ξ's enclosure until it separates a single root.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    if xi.is_exact:
        return RealVector(
            tuple(PrecisionReal.exact(xi.lower**k, xi.precision_bits) for k in range(n, 0, -1))
        )
    origin = xi.origin
    if not isinstance(origin, AlgebraicOrigin):
        raise ValidationError("veronese_vector needs a rational or algebraic ξ")
    y = sympy.Symbol("y")
    base = sympy.Poly(list(origin.coeffs), y).as_expr()
    cap = get_precision_cap()
    coords = []
    for k in range(n, 0, -1):
        if k == 1:
            coords.append(xi)
            continue
        annihilator = sympy.sqf_part(sympy.resultant(base, _X - y**k, y))
        poly = sympy.Poly(annihilator, _X).primitive()[1]
        coeffs = tuple(int(c) for c in poly.all_coeffs())
        if coeffs[0] < 0:
            coeffs = tuple(-c for c in coeffs)
        bits = max(64, xi.precision_bits)
        while True:
            lower, upper = _power_enclosure(*origin.enclose(bits), k)
            if _count_roots(coeffs, lower, upper) == 1:
                coords.append(
                    PrecisionReal.from_origin(
                        AlgebraicOrigin(coeffs, lower, upper), xi.precision_bits
                    )
                )
                break
            if bits >= cap:
                raise PrecisionExhausted(f"Cannot isolate ξ^{k} below {cap} bits")
            bits *= 2
    return RealVector(tuple(coords))


class CoordinateSpec(BaseModel):
    """One coordinate of the vector input file"""

    kind: Literal["rational", "decimal", "algebraic", "series"]
    value: Optional[str] = None
    coeffs: Optional[List[int]] = None
    lower: Optional[str] = None
    upper: Optional[str] = None
    growth: Optional[str] = None
    start: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_fields(self):
        required = {
            "rational": ["value"],
            "decimal": ["value"],
            "algebraic": ["coeffs", "lower", "upper"],
            "series": ["growth"],
        }[self.kind]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind} coordinate is missing {', '.join(missing)}")
        return self

    def to_real(self, bits: int) -> PrecisionReal:
        if self.kind == "rational":
            return PrecisionReal.from_origin(RationalOrigin(parse_rational(self.value)), bits)
        if self.kind == "decimal":
            return PrecisionReal.decimal(self.value, bits)
        if self.kind == "algebraic":
            return PrecisionReal.algebraic(self.coeffs, self.lower, self.upper, bits)
        return PrecisionReal.series(self.growth, bits, self.start)


class VectorFile(BaseModel):
    """Vector input file: {"n": int, "coords": [...], "precision_bits": int}"""

    n: int = Field(ge=1)
    coords: List[CoordinateSpec]
    precision_bits: int = Field(default=DEFAULT_PRECISION_BITS, ge=1)

    @model_validator(mode="after")
    def _check_length(self):
        if len(self.coords) != self.n:
            raise ValueError(f"Expected {self.n} coords, got {len(self.coords)}")
        return self


def vector_from_spec(payload: Dict[str, Any]) -> RealVector:
    """
    Build a RealVector from the vector input file structure

    Raises:
        ValidationError: If the structure or any coordinate is invalid
    """
    try:
        spec = VectorFile.model_validate(payload)
    except PydanticValidationError as e:
        raise ValidationError(f"Invalid vector specification: {e}")
    return RealVector(tuple(c.to_real(spec.precision_bits) for c in spec.coords))


def load_vector(path: Union[str, Path]) -> RealVector:
    """Read and validate a vector input file"""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f"Cannot read vector file {path}: {e}")
    return vector_from_spec(payload)
