"""
Effective construction of ξ whose Veronese vector has prescribed cone
exponents

Each step picks a prime g_j and an integer c_j, takes a root γ_j of an
Eisenstein polynomial P_j and sets ξ_j = (c_j + γ_j) / g_j, so that
Q_j(X) = P_j(g_j X - c_j) is the minimal polynomial of ξ_j. Steps cycle
through ell = 1..n; step j lands within g_(j-1)^(-λ) of the previous
point, which fixes the size of |Q_(j-1)(ξ)|.
"""

import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from core import PrecisionReal, RealVector, veronese_vector
from utils import (
    DEFAULT_PRECISION_BITS,
    MultipleRootsUnresolved,
    NoRootInWindow,
    PrecisionExhausted,
    SCHEMA_VERSION,
    SearchExhausted,
    ValidationError,
    format_rational,
    get_precision_cap,
    log_of_rational,
    parse_rational,
    write_json,
)

logger = logging.getLogger(__name__)

_X = sympy.Symbol("x")

DEFAULT_G_BIT_BUDGET = 4096
DEFAULT_MAX_PRIME_ATTEMPTS = 256
DEFAULT_C_MAX = 256
SCREEN_SLACK = 1 + 1e-9

Coefficients = Tuple[int, ...]


# Polynomial helpers (coefficients listed from the leading term down)


def _poly(coeffs: Sequence[int]) -> sympy.Poly:
    return sympy.Poly([int(c) for c in coeffs], _X)


def _coeffs(poly: sympy.Poly) -> Coefficients:
    return tuple(int(c) for c in poly.all_coeffs())


def _height(coeffs: Sequence[int]) -> int:
    return max(abs(c) for c in coeffs)


def _evaluate(coeffs: Sequence[int], x: Fraction) -> Fraction:
    value = Fraction(0)
    for c in coeffs:
        value = value * x + c
    return value


def _fraction(value: sympy.Rational) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def family_base(n: int, ell: int, g: int) -> int:
    """[g^((n-ell)/ell)], exact"""
    root, _ = sympy.integer_nthroot(g ** (n - ell), ell)
    return int(root)


def poly_family(n: int, ell: int, g: int) -> Coefficients:
    """
    X^n - 2([g^((n-ell)/ell)] X - 1)^ell for ell < n, X^n - 2 g^n for ell = n

    Args:
        n: Degree (>= 2)
        ell: Cone index, 1 <= ell <= n
        g: Integer >= 2

    Returns:
        tuple: Coefficients from the leading term down
    """
    if n < 2 or not 1 <= ell <= n:
        raise ValidationError(f"Need n >= 2 and 1 <= ell <= n, got n={n}, ell={ell}")
    if g < 2:
        raise ValidationError(f"g must be >= 2, got {g}")
    if ell == n:
        return _coeffs(sympy.Poly(_X**n - 2 * g**n, _X))
    a = family_base(n, ell, g)
    return _coeffs(sympy.Poly(_X**n - 2 * (a * _X - 1) ** ell, _X))


def shifted_top_family(n: int) -> Coefficients:
    """2(X - 1)^n - X^n, the monic top-index polynomial with roots of size O(1)"""
    return _coeffs(sympy.Poly(2 * (_X - 1) ** n - _X**n, _X))


def step_polynomial(n: int, ell: int, g: int) -> Coefficients:
    """P_j for a step with index ell"""
    if ell == n:
        return shifted_top_family(n)
    return poly_family(n, ell, g)


def is_eisenstein(coeffs: Sequence[int], p: int) -> bool:
    """p divides every non-leading coefficient, not the leading one, and p² not the constant"""
    coeffs = [int(c) for c in coeffs]
    if len(coeffs) < 2:
        return False
    lead, rest, constant = coeffs[0], coeffs[1:], coeffs[-1]
    return lead % p != 0 and all(c % p == 0 for c in rest) and constant % (p * p) != 0


def shift_polynomial(coeffs: Sequence[int], g: int, c: int) -> Coefficients:
    """Q(X) = P(g X - c) by binomial expansion"""
    degree = len(coeffs) - 1
    result = [0] * (degree + 1)
    # result[k] is the coefficient of X^k
    for i, a in enumerate(coeffs):
        power = degree - i
        for k in range(power + 1):
            result[k] += a * math.comb(power, k) * g**k * (-c) ** (power - k)
    return tuple(reversed(result))


def polynomial_norm(coeffs: Sequence[int], c: int) -> int:
    """Norm of c + γ over the roots γ of the monic P: (-1)^n P(-c)"""
    if coeffs[0] != 1:
        raise ValidationError("Norm formula needs a monic polynomial")
    degree = len(coeffs) - 1
    return (-1) ** degree * int(_evaluate(coeffs, Fraction(-c)))


# Root isolation


def is_squarefree(coeffs: Sequence[int]) -> bool:
    """gcd(P, P') is constant"""
    poly = _poly(coeffs)
    return sympy.degree(sympy.gcd(poly, poly.diff(_X))) <= 0


def real_roots_in(
    coeffs: Sequence[int], lower: Fraction, upper: Fraction
) -> List[Tuple[Fraction, Fraction]]:
    """
    Isolating intervals of the real roots of P in [lower, upper], ascending;
    repeated roots are listed once
    """
    poly = _poly(coeffs)
    if not is_squarefree(coeffs):
        poly = sympy.Poly(sympy.sqf_part(poly.as_expr()), _X)
    intervals = poly.intervals(
        inf=sympy.Rational(lower.numerator, lower.denominator),
        sup=sympy.Rational(upper.numerator, upper.denominator),
    )
    return sorted((_fraction(a), _fraction(b)) for (a, b), _ in intervals)


def _refine(coeffs: Sequence[int], lo: Fraction, hi: Fraction, width: Fraction) -> Tuple[Fraction, Fraction]:
    poly = _poly(coeffs)
    if hi - lo <= width:
        return lo, hi
    a, b = poly.refine_root(
        sympy.Rational(lo.numerator, lo.denominator),
        sympy.Rational(hi.numerator, hi.denominator),
        eps=sympy.Rational(width.numerator, width.denominator),
    )
    return _fraction(a), _fraction(b)


def isolate_root_near(
    coeffs: Sequence[int],
    target: Union[Fraction, int, str],
    radius: Union[Fraction, int, str],
    bits: int = DEFAULT_PRECISION_BITS,
) -> PrecisionReal:
    """
    Certified interval, of width <= radius, for the real root of P nearest
    to target among those within radius of it

    Several roots in the window are refined until the nearest one is
    separated from the rest; roots that stay equidistant raise.

    Raises:
        NoRootInWindow: If no real root lies within radius of target
        MultipleRootsUnresolved: If the nearest root cannot be singled out
        ValidationError: If P is not squarefree or radius is not positive
    """
    if not is_squarefree(coeffs):
        raise ValidationError(f"P = {tuple(coeffs)} has a repeated factor")
    target = parse_rational(target)
    radius = parse_rational(radius)
    if radius <= 0:
        raise ValidationError("radius must be positive")
    roots = real_roots_in(coeffs, target - radius, target + radius)
    if not roots:
        raise NoRootInWindow(f"No real root within {radius} of {target}")
    width = radius
    cap = get_precision_cap()
    for _ in range(cap):
        roots = [_refine(coeffs, lo, hi, width) for lo, hi in roots]
        far = [max(abs(lo - target), abs(hi - target)) for lo, hi in roots]
        near = [
            Fraction(0) if lo <= target <= hi else min(abs(lo - target), abs(hi - target))
            for lo, hi in roots
        ]
        best = min(range(len(roots)), key=lambda i: far[i])
        if all(far[best] < near[i] for i in range(len(roots)) if i != best):
            lo, hi = roots[best]
            return PrecisionReal.algebraic(coeffs, lo, hi, bits)
        width /= 2
    raise MultipleRootsUnresolved(f"Roots near {target} stay equidistant")


def step_root(coeffs: Sequence[int], n: int, ell: int, g: int, bits: int) -> PrecisionReal:
    """
    γ_j: the largest real root in the cluster near 1/[g^((n-ell)/ell)] for
    ell < n, the largest real root for the top index
    """
    if ell == n:
        bound = Fraction(2 + sum(abs(c) for c in coeffs))
        roots = real_roots_in(coeffs, -bound, bound)
    else:
        a = family_base(n, ell, g)
        roots = real_roots_in(coeffs, Fraction(1, 2 * a), Fraction(3, 2 * a))
    if not roots:
        raise NoRootInWindow(f"No real root for the step polynomial with ell={ell}, g={g}")
    lo, hi = roots[-1]
    return PrecisionReal.algebraic(coeffs, lo, hi, bits)


# Parameters and state


def big_g(n: int) -> int:
    """G(n) = 2n³ + 2n² + 2n + 1"""
    return 2 * n**3 + 2 * n**2 + 2 * n + 1


def delta_ell(n: int, ell: int) -> Fraction:
    """δ_ell = 1 - n(ell - 1)/ell"""
    return 1 - Fraction(n * (ell - 1), ell)


def lambda_for(n: int, ell: int, mu: Union[Fraction, int, str]) -> Fraction:
    """λ_ell solving δ_ell + λ_ell / n = μ"""
    return n * (parse_rational(mu) - delta_ell(n, ell))


def geometric_prediction(n: int, ell: int, lam: Union[Fraction, int]) -> Fraction:
    """
    -log|Q_j(ξ)| / log H(Q_j) predicted from the root positions alone:
    λ/n - 1 + n(ell - 1)/ell²
    """
    return Fraction(lam) / n - 1 + Fraction(n * (ell - 1), ell * ell)


def target_offset(n: int, ell: int) -> Fraction:
    """
    Root-geometry prediction minus the target μ_ell: n(ell - 1)/ell² - δ_ell - 1

    Equals -2 for ell = 1, so audited ℓ = 1 ratios sit two below μ_1.
    """
    return Fraction(n * (ell - 1), ell * ell) - delta_ell(n, ell) - 1


def ell_for_step(j: int, n: int) -> int:
    """ell ≡ j (mod n), in 1..n"""
    return (j - 1) % n + 1


def ceil_power(g: int, exponent: Fraction) -> int:
    """Smallest integer R with R >= g^exponent, for exponent >= 0"""
    p, q = exponent.numerator, exponent.denominator
    root, exact = sympy.integer_nthroot(g**p, q)
    return int(root) if exact else int(root) + 1


class ConstructionParams(BaseModel):
    """Targets μ_(n,1) <= ... <= μ_(n,n) and search limits"""

    n: int
    targets: List[str]
    chi: Optional[str] = None
    g_bit_budget: int = DEFAULT_G_BIT_BUDGET
    max_prime_attempts: int = DEFAULT_MAX_PRIME_ATTEMPTS
    c_max: int = DEFAULT_C_MAX
    allow_small_targets: bool = False

    @field_validator("targets", mode="before")
    @classmethod
    def _normalize_targets(cls, value):
        return [format_rational(parse_rational(v)) for v in value]

    @model_validator(mode="after")
    def _check(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if len(self.targets) != self.n:
            raise ValueError(f"Expected {self.n} targets, got {len(self.targets)}")
        mus = self.mu
        if any(b < a for a, b in zip(mus, mus[1:])):
            raise ValueError("Targets must be non-decreasing")
        if self.chi is None:
            self.chi = str(big_g(self.n) + 1)
        if parse_rational(self.chi) <= big_g(self.n):
            raise ValueError(f"chi must exceed G(n) = {big_g(self.n)}")
        if any(lam < 1 for lam in self.lambdas):
            raise ValueError("Every λ_ell must be >= 1; raise the targets")
        threshold = parse_rational(self.chi) + self.n
        if mus[0] < threshold:
            if not self.allow_small_targets:
                raise ValueError(
                    f"μ_(n,1) = {mus[0]} below the large-target threshold {threshold}"
                )
            logger.warning(
                "μ_(n,1) = %s below the large-target threshold %s; audits are indicative only",
                format_rational(mus[0]),
                format_rational(threshold),
            )
        return self

    @property
    def mu(self) -> List[Fraction]:
        return [parse_rational(t) for t in self.targets]

    @property
    def lambdas(self) -> List[Fraction]:
        return [lambda_for(self.n, ell, mu) for ell, mu in enumerate(self.mu, start=1)]


class StepRecord(BaseModel):
    """One accepted step; rationals are stored as 'p/q' strings"""

    j: int
    ell: int
    g: int
    c: int
    P: List[int]
    Q: List[int]
    height_Q: int
    gamma_lo: str
    gamma_hi: str
    xi_lo: str
    xi_hi: str
    bits: int
    radius_denominator: Optional[int] = None

    def xi(self, bits: Optional[int] = None) -> PrecisionReal:
        return PrecisionReal.algebraic(
            self.Q,
            parse_rational(self.xi_lo),
            parse_rational(self.xi_hi),
            bits or self.bits,
        )


class ConstructionState(BaseModel):
    schema_version: str = SCHEMA_VERSION
    params: ConstructionParams
    steps: List[StepRecord] = Field(default_factory=list)

    @property
    def j(self) -> int:
        return len(self.steps)

    def xi(self, bits: Optional[int] = None) -> PrecisionReal:
        if not self.steps:
            raise ValidationError("Construction has no steps yet")
        return self.steps[-1].xi(bits)


def construction_params(
    n: int,
    targets: Sequence[Union[Fraction, int, str]],
    **options,
) -> ConstructionParams:
    """Validated parameters; pydantic errors become ValidationError"""
    try:
        return ConstructionParams(n=n, targets=list(targets), **options)
    except PydanticValidationError as e:
        raise ValidationError(str(e)) from e


def new_state(params: ConstructionParams) -> ConstructionState:
    return ConstructionState(params=params)


# Steps


def _window(n: int) -> Tuple[Fraction, Fraction]:
    return Fraction(1, 1 << (2 * n + 4)), Fraction(1, 1 << (2 * n))


def _g_window_ok(n: int, g: int, c: int) -> bool:
    return c >= 1 and (c << (2 * n + 2)) <= g <= (c << (2 * n + 3))


def _candidate(
    n: int, j: int, ell: int, g: int, c: int, gamma: PrecisionReal, coeffs: Coefficients, bits: int
) -> StepRecord:
    Q = shift_polynomial(coeffs, g, c)
    xi_lo = (c + gamma.lower) / g
    xi_hi = (c + gamma.upper) / g
    return StepRecord(
        j=j,
        ell=ell,
        g=g,
        c=c,
        P=list(coeffs),
        Q=list(Q),
        height_Q=_height(Q),
        gamma_lo=format_rational(gamma.lower),
        gamma_hi=format_rational(gamma.upper),
        xi_lo=format_rational(xi_lo),
        xi_hi=format_rational(xi_hi),
        bits=bits,
    )


def _basic_checks(n: int, g: int, c: int, coeffs: Coefficients, xi_lo: Fraction, xi_hi: Fraction) -> Optional[str]:
    if not _g_window_ok(n, g, c):
        return "window 2^(2n+2) c <= g <= 2^(2n+3) c"
    if polynomial_norm(coeffs, c) % g == 0:
        return "g divides the norm of c + γ"
    low, high = _window(n)
    if not (low < xi_lo and xi_hi < high):
        return "ξ outside (2^(-2n-4), 2^(-2n))"
    return None


def _first_step(params: ConstructionParams) -> StepRecord:
    n = params.n
    ell = ell_for_step(1, n)
    bits = DEFAULT_PRECISION_BITS
    for c in range(1, params.c_max + 1):
        for g in sympy.primerange(c << (2 * n + 2), (c << (2 * n + 3)) + 1):
            g = int(g)
            coeffs = step_polynomial(n, ell, g)
            gamma = step_root(coeffs, n, ell, g, bits)
            record = _candidate(n, 1, ell, g, c, gamma, coeffs, bits)
            reason = _basic_checks(
                n, g, c, coeffs, parse_rational(record.xi_lo), parse_rational(record.xi_hi)
            )
            if reason is None:
                return record
            logger.debug("Step 1 rejects (c=%d, g=%d): %s", c, g, reason)
    raise SearchExhausted(f"No admissible (c, g) for step 1 with c <= {params.c_max}")


def next_step(state: ConstructionState) -> ConstructionState:
    """
    Append step j = state.j + 1

    Step 1 scans c = 1, 2, ... and the primes of the window 2^(2n+2) c <= g <= 2^(2n+3) c in
    increasing order. Later steps aim at ξ_(j-1) + r/2 with
    r = 1/ceil(g_(j-1)^λ) and accept ξ_j in [ξ_(j-1) + r/4, ξ_(j-1) + 3r/4),
    trying primes g >= 4/r in increasing order. The first admissible
    candidate wins.

    Raises:
        SearchExhausted: If g would exceed the bit budget or no prime qualifies
    """
    params = state.params
    n = params.n
    j = state.j + 1
    ell = ell_for_step(j, n)
    if j == 1:
        record = _first_step(params)
    else:
        prev = state.steps[-1]
        lam = params.lambdas[prev.ell - 1]
        R = ceil_power(prev.g, lam)
        radius = Fraction(1, R)
        bits = max(prev.bits + 32, 2 * R.bit_length() + 128)
        g_start = max(1 << (2 * n + 2), 4 * R)
        if g_start.bit_length() > params.g_bit_budget:
            raise SearchExhausted(
                f"Step {j} needs g of {g_start.bit_length()} bits, budget {params.g_bit_budget}"
            )
        xi_prev = prev.xi(bits)
        target = xi_prev.midpoint + radius / 2
        accept_lo = xi_prev.upper + radius / 4
        accept_hi = xi_prev.lower + 3 * radius / 4
        record = None
        g = g_start - 1
        for _ in range(params.max_prime_attempts):
            g = int(sympy.nextprime(g))
            coeffs = step_polynomial(n, ell, g)
            gamma = step_root(coeffs, n, ell, g, bits)
            c = math.floor(g * target - gamma.midpoint + Fraction(1, 2))
            candidate = _candidate(n, j, ell, g, c, gamma, coeffs, bits)
            xi_lo, xi_hi = parse_rational(candidate.xi_lo), parse_rational(candidate.xi_hi)
            reason = _basic_checks(n, g, c, coeffs, xi_lo, xi_hi)
            if reason is None and not (accept_lo <= xi_lo and xi_hi < accept_hi):
                reason = "ξ_j outside the nesting interval"
            if reason is None:
                record = candidate.model_copy(update={"radius_denominator": R})
                break
            logger.debug("Step %d rejects (c=%d, g=%d): %s", j, c, g, reason)
        if record is None:
            raise SearchExhausted(
                f"No admissible prime among {params.max_prime_attempts} from {g_start}"
            )
    logger.info(
        "Step %d (ell=%d): g has %d bits, H(Q) has %d bits",
        j,
        ell,
        record.g.bit_length(),
        record.height_Q.bit_length(),
    )
    return state.model_copy(update={"steps": state.steps + [record]})


def run_construction(
    params: ConstructionParams,
    steps: int,
    state: Optional[ConstructionState] = None,
) -> ConstructionState:
    """Run (or resume) the construction until it has `steps` steps"""
    if steps < 1:
        raise ValidationError(f"steps must be >= 1, got {steps}")
    state = state or new_state(params)
    while state.j < steps:
        state = next_step(state)
    return state


def save_state(state: ConstructionState, path: Union[str, Path]) -> Path:
    return write_json(path, state.model_dump(mode="json"))


def load_state(path: Union[str, Path]) -> ConstructionState:
    """
    Load a saved construction

    Raises:
        ValidationError: If the file is missing or not a valid state
    """
    target = Path(path)
    if not target.exists():
        raise ValidationError(f"State file not found: {target}")
    try:
        return ConstructionState.model_validate_json(target.read_text(encoding="utf-8"))
    except PydanticValidationError as e:
        raise ValidationError(f"Invalid state file {target}: {e}") from e


def construction_vector(state: ConstructionState, bits: Optional[int] = None) -> RealVector:
    """(ξ^n, ..., ξ) for the last ξ_J"""
    return veronese_vector(state.xi(bits), state.params.n)


# Audits


def evaluate_abs(coeffs: Sequence[int], x: PrecisionReal) -> Tuple[Fraction, Fraction]:
    """Certified bounds on |Q(x)| from a centred evaluation with a Lipschitz bound"""
    m = x.midpoint
    value = abs(_evaluate(coeffs, m))
    M = max(abs(x.lower), abs(x.upper))
    degree = len(coeffs) - 1
    lipschitz = sum(
        (degree - i) * abs(a) * M ** (degree - i - 1)
        for i, a in enumerate(coeffs)
        if degree - i > 0
    )
    spread = lipschitz * x.width / 2
    return max(Fraction(0), value - spread), value + spread


def _certified_abs(coeffs: Sequence[int], state: ConstructionState, bits: int) -> Tuple[Fraction, Fraction, int]:
    cap = get_precision_cap()
    while True:
        lo, hi = evaluate_abs(coeffs, state.xi(bits))
        if lo > 0:
            return lo, hi, bits
        if bits >= cap:
            raise PrecisionExhausted(f"|Q(ξ)| not separated from 0 at {bits} bits")
        bits = min(2 * bits, cap)


class AuditRecord(BaseModel):
    j: int
    ell: int
    height_Q: int
    log_abs_value: float
    ratio: float
    target: float
    deviation: float
    geometric_prediction: float
    geometric_deviation: float
    target_offset: float


def audit_step(state: ConstructionState, j: int) -> AuditRecord:
    """
    Log-ratio -log|Q_j(ξ_J)| / log H(Q_j) at the last point ξ_J, against the
    target δ_ell + λ_ell/n = μ_ell and the root-geometry prediction

    deviation tracks target_offset rather than zero; geometric_deviation is
    the one expected within ±0.5.

    Raises:
        ValidationError: If j is not an earlier step
        PrecisionExhausted: If |Q_j(ξ_J)| cannot be separated from zero
    """
    if not 1 <= j < state.j:
        raise ValidationError(f"Audit needs 1 <= j < J={state.j}, got {j}")
    step = state.steps[j - 1]
    params = state.params
    lo, hi, _ = _certified_abs(step.Q, state, max(state.steps[-1].bits, 2 * step.bits))
    log_value = log_of_rational(hi)
    ratio = -log_value / math.log(step.height_Q)
    target = params.mu[step.ell - 1]
    prediction = geometric_prediction(params.n, step.ell, params.lambdas[step.ell - 1])
    return AuditRecord(
        j=j,
        ell=step.ell,
        height_Q=step.height_Q,
        log_abs_value=log_value,
        ratio=ratio,
        target=float(target),
        deviation=ratio - float(target),
        geometric_prediction=float(prediction),
        geometric_deviation=ratio - float(prediction),
        target_offset=float(target_offset(params.n, step.ell)),
    )


class LowerBoundReport(BaseModel):
    """Smallest |Q(ξ)| H(Q)^μ_(n,1) over the scanned polynomials"""

    degree_cap: int
    height_cap: int
    polynomials_checked: int
    excluded: int
    lambda_hat: float
    argmin: List[int]
    margin: float


def _primitive_polynomials(degree: int, B: int) -> np.ndarray:
    """Primitive integer polynomials of degree <= degree, height <= B, first nonzero coefficient positive"""
    axis = np.arange(-B, B + 1, dtype=np.int64)
    grid = np.meshgrid(*([axis] * (degree + 1)), indexing="ij")
    rows = np.stack(grid, axis=-1).reshape(-1, degree + 1)
    nonzero = rows != 0
    keep = nonzero.any(axis=1)
    rows = rows[keep]
    first = np.argmax(rows != 0, axis=1)
    rows = rows[rows[np.arange(len(rows)), first] > 0]
    return rows[np.gcd.reduce(rows, axis=1) == 1]


def _padded(coeffs: Sequence[int], length: int) -> Coefficients:
    return (0,) * (length - len(coeffs)) + tuple(int(c) for c in coeffs)


def audit_lower_bound(
    state: ConstructionState,
    degree_cap: Optional[int] = None,
    height_cap: int = 20,
) -> LowerBoundReport:
    """
    Scan every primitive Q of degree <= degree_cap and height <= height_cap
    other than ±Q_j and report λ̂ = min |Q(ξ_J)| H(Q)^μ_(n,1)

    A float screen with a rigorous error bound shortlists the rows that can
    attain the minimum; those are evaluated with certified arithmetic. The
    margin is λ̂ itself, positive iff no scanned Q vanishes at ξ_J.

    Args:
        state: Construction with at least one step
        degree_cap: Degree bound (defaults to n)
        height_cap: Height bound B

    Returns:
        LowerBoundReport: λ̂, its minimizer and the number of polynomials scanned
    """
    degree = degree_cap or state.params.n
    if height_cap < 1:
        raise ValidationError(f"height_cap must be >= 1, got {height_cap}")
    mu1 = float(state.params.mu[0])
    xi = state.xi()
    rows = _primitive_polynomials(degree, height_cap)

    known = set()
    for step in state.steps:
        if step.height_Q <= height_cap and len(step.Q) <= degree + 1:
            known.add(_padded(step.Q, degree + 1))
            known.add(_padded([-c for c in step.Q], degree + 1))
    excluded = 0
    if known:
        mask = np.array([tuple(int(v) for v in row) not in known for row in rows])
        excluded = int(len(rows) - mask.sum())
        rows = rows[mask]

    x = float(xi.midpoint)
    powers = x ** np.arange(degree, -1, -1, dtype=np.float64)
    magnitudes = np.abs(rows).astype(np.float64)
    values = np.abs(rows.astype(np.float64) @ powers)
    error = (degree + 2) * 2.0**-50 * (magnitudes @ np.abs(powers) + 1.0)
    error += magnitudes @ (np.arange(degree, -1, -1) * (float(xi.width) + 2.0**-50))
    weights = magnitudes.max(axis=1) ** mu1
    upper = float(np.min((values + error) * weights)) * SCREEN_SLACK
    shortlist = np.nonzero((values - error) * weights <= upper)[0]

    lambda_hat = math.inf
    argmin: List[int] = []
    bits = xi.precision_bits
    for i in shortlist:
        coeffs = tuple(int(v) for v in rows[i])
        while len(coeffs) > 1 and coeffs[0] == 0:
            coeffs = coeffs[1:]
        lo, _, bits = _certified_abs(coeffs, state, bits)
        candidate = float(lo) * float(_height(coeffs)) ** mu1
        if candidate < lambda_hat:
            lambda_hat = candidate
            argmin = [int(v) for v in rows[i]]
    logger.info("Lower-bound audit over %d polynomials: λ̂ = %.6g", len(rows), lambda_hat)
    return LowerBoundReport(
        degree_cap=degree,
        height_cap=height_cap,
        polynomials_checked=int(len(rows)),
        excluded=excluded,
        lambda_hat=lambda_hat,
        argmin=argmin,
        margin=lambda_hat,
    )


def check_dominant_coefficient(step: StepRecord) -> bool:
    """The X^ell coefficient of Q_j is the strictly largest in absolute value"""
    degree = len(step.Q) - 1
    dominant = abs(step.Q[degree - step.ell])
    return all(abs(c) < dominant for i, c in enumerate(step.Q) if i != degree - step.ell)


def is_prime_step(step: StepRecord) -> bool:
    return bool(sympy.isprime(step.g))
