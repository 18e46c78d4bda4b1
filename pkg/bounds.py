"""
Closed-form lower bounds for cone exponents and the Minkowski body search

The calculators keep rational inputs rational (Fraction in, Fraction out) and
fall back to floats only when a float is passed in or a square root appears.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field
from sympy import integer_nthroot

from core import ConeSpec, IntVector, RealVector
from enumeration import (
    DEFAULT_BURN_IN,
    ConeRecord,
    estimate_mu,
    estimate_w_hat,
    record_scan,
)
from lattice import DEFAULT_NODE_BUDGET, box_points, form_enclosure
from utils import (
    DomainError,
    NoRecords,
    PrecisionExhausted,
    SearchBudgetExceeded,
    ValidationError,
    format_rational,
    get_precision_cap,
    log_ratio,
    parse_rational,
)

logger = logging.getLogger(__name__)

Real = Union[Fraction, float]

RATIO_SLACK = 1e-9


def _real(value) -> Real:
    if isinstance(value, float):
        return value
    return parse_rational(value)


def bound_uniform(w_hat, n: int, ell: int) -> Real:
    """
    Lower bound ℓ·ŵ/(ŵ − n + ℓ) for the cone exponent in terms of the
    uniform exponent

    Raises:
        DomainError: If ŵ <= n − ℓ or ℓ is outside [1, n]
    """
    if not 1 <= ell <= n:
        raise DomainError(f"ell must lie in [1, {n}], got {ell}")
    w_hat = _real(w_hat)
    if w_hat <= n - ell:
        raise DomainError(f"w_hat={w_hat} must exceed n - ell = {n - ell}")
    return ell * w_hat / (w_hat - n + ell)


def bound_thurnheer(w_hat, w) -> Real:
    """ŵ − 1 + ŵ/w, defined for w >= ŵ > 1"""
    w_hat, w = _real(w_hat), _real(w)
    if not w >= w_hat > 1:
        raise DomainError(f"Need w >= w_hat > 1, got w_hat={w_hat}, w={w}")
    return w_hat - 1 + w_hat / w


def bound_golden(n: int) -> float:
    """(n − 1 + √(n² + 2n − 3))/2; the golden ratio for n = 2"""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    return (n - 1 + math.sqrt(n * n + 2 * n - 3)) / 2


def bound_veronese(n: int, ell: int) -> Fraction:
    """Bound along the Veronese curve: 2ℓ − ℓ(2ℓ−1)/(n−1+ℓ)"""
    if not 1 <= ell < n:
        raise DomainError(f"Need 1 <= ell < n, got ell={ell}, n={n}")
    return 2 * ell - Fraction(ell * (2 * ell - 1), n - 1 + ell)


def bound_schmidt(w_hat) -> Real:
    """ŵ/(ŵ − 1): the planar case n = 2, ℓ = 1"""
    return bound_uniform(w_hat, 2, 1)


def eta_for(mu, ell: int, n: int, eps=0) -> Real:
    """
    Exponent η of the Minkowski body solving μ + ε = (ℓη + n − ℓ)/η

    Raises:
        DomainError: If μ + ε <= ℓ
    """
    total = _real(mu) + _real(eps)
    if total <= ell:
        raise DomainError(f"mu + eps = {total} must exceed ell = {ell}")
    return (n - ell) / (total - ell)


def mu_from_eta(eta, ell: int, n: int) -> Real:
    """Inverse of eta_for: (ℓη + n − ℓ)/η"""
    eta = _real(eta)
    if eta <= 0:
        raise DomainError(f"eta must be positive, got {eta}")
    return (ell * eta + n - ell) / eta


@dataclass(frozen=True)
class BodySpec:
    """
    Symmetric convex body in (x_0, x_1, ..., x_n):
    |x_i| <= N^η for i <= ℓ, |x_i| <= N for ℓ < i <= n,
    |x·α + x_0| <= N^(−ℓη − n + ℓ)
    """

    alpha: RealVector
    N: int
    eta: Fraction
    ell: int

    def __post_init__(self):
        object.__setattr__(self, "eta", parse_rational(self.eta))
        if self.N < 1:
            raise ValidationError(f"N must be >= 1, got {self.N}")
        if self.eta < 1:
            raise ValidationError(f"eta must be >= 1, got {self.eta}")
        if not 1 <= self.ell <= self.alpha.n:
            raise ValidationError(f"ell must lie in [1, {self.alpha.n}], got {self.ell}")

    @property
    def n(self) -> int:
        return self.alpha.n

    @property
    def head_bound(self) -> int:
        """floor(N^η)"""
        p, q = self.eta.numerator, self.eta.denominator
        return integer_nthroot(self.N**p, q)[0]

    @property
    def form_exponent(self) -> Tuple[int, int]:
        """(e, q) with N^(ℓη + n − ℓ) = N^(e/q)"""
        p, q = self.eta.numerator, self.eta.denominator
        return self.ell * p + (self.n - self.ell) * q, q

    @property
    def volume(self) -> Fraction:
        """Product of the side lengths; the powers of N cancel to 2^(n+1)"""
        e, q = self.form_exponent
        exponent = self.ell * self.eta + (self.n - self.ell) - Fraction(e, q)
        return Fraction(2) ** (self.n + 1) * Fraction(self.N) ** exponent

    def form_within(self, value_abs: Fraction) -> bool:
        """|v| <= N^(−ℓη − n + ℓ) decided on integers"""
        e, q = self.form_exponent
        return value_abs**q * self.N**e <= 1


class BodyPoint(BaseModel):
    x0: int
    x: List[int]
    form_hi: str
    head_bound: int
    tail_bound: int
    candidates: int
    nodes: int


def _ceil_root_power(N: int, e: int, q: int) -> int:
    """ceil(N^(e/q))"""
    root, exact = integer_nthroot(N**e, q)
    return root if exact else root + 1


def _point_key(x0: int, x: IntVector) -> Tuple[int, ...]:
    return tuple(x) + (x0,)


def _normalize(x0: int, x: IntVector) -> Tuple[int, IntVector]:
    key = _point_key(x0, x)
    first = next(v for v in key if v != 0)
    if first < 0:
        return -x0, tuple(-v for v in x)
    return x0, tuple(x)


def _certify(
    spec: BodySpec, x0: int, x: IntVector, precision_cap: int
) -> Optional[Fraction]:
    """Certified upper bound of |x·α + x_0| when the point is in the body, else None"""
    alpha = spec.alpha
    bits = alpha.precision_bits
    while True:
        lower, upper = form_enclosure(alpha, x0, x)
        abs_hi = max(abs(lower), abs(upper))
        abs_lo = Fraction(0) if lower <= 0 <= upper else min(abs(lower), abs(upper))
        if spec.form_within(abs_hi):
            return abs_hi
        if not spec.form_within(abs_lo):
            return None
        if bits >= precision_cap:
            raise PrecisionExhausted(f"Body membership of {(x0,) + tuple(x)} undecided at {bits} bits")
        bits = min(2 * bits, precision_cap)
        alpha = alpha.at(bits)


def minkowski_body_search(
    spec: BodySpec,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
    precision_cap: Optional[int] = None,
) -> BodyPoint:
    """
    Nonzero integer point of the body, found by lattice enumeration

    The body is scaled so that every constraint group becomes a box of
    half-side R, the resulting lattice is LLL-reduced and every lattice point
    of the enclosing ball is enumerated. Candidates are re-checked with
    certified arithmetic; the winner is the lexicographically smallest
    (x_1, ..., x_n, x_0) after making its first nonzero entry positive.

    Args:
        spec: Body description
        node_budget: Maximum enumeration nodes
        precision_cap: Escalation cap in bits for the membership check

    Returns:
        BodyPoint: The certified point

    Raises:
        SearchBudgetExceeded: If no point is found (impossible for a valid body)
    """
    cap = precision_cap if precision_cap is not None else get_precision_cap()
    n, ell, N = spec.n, spec.ell, spec.N
    A = spec.head_bound
    B = N
    e, q = spec.form_exponent
    inv_eps = _ceil_root_power(N, e, q)
    found = box_points(spec.alpha, [A] * ell + [B] * (n - ell), inv_eps, node_budget=node_budget)
    nodes = found.nodes
    logger.debug("Body lattice for N=%d, eta=%s, ell=%d: %d nodes", N, spec.eta, ell, nodes)
    best = None
    candidates = 0
    for x0, x in found.points:
        x0, x = _normalize(x0, x)
        form_hi = _certify(spec, x0, x, cap)
        if form_hi is None:
            continue
        candidates += 1
        key = _point_key(x0, x)
        if best is None or key < best[0]:
            best = (key, x0, x, form_hi)
    if best is None:
        raise SearchBudgetExceeded(
            f"No body point found for N={N}, eta={spec.eta}, ell={ell} after {nodes} nodes"
        )
    _, x0, x, form_hi = best
    return BodyPoint(
        x0=x0,
        x=list(x),
        form_hi=format_rational(form_hi),
        head_bound=A,
        tail_bound=B,
        candidates=candidates,
        nodes=nodes,
    )


class BoundRow(BaseModel):
    name: str
    ell: Optional[int] = None
    value: Optional[float] = None
    exact: Optional[str] = None
    estimate: Optional[float] = None
    gap: Optional[float] = None
    note: Optional[str] = None


class BoundsReport(BaseModel):
    """Truncated estimates next to the closed-form bounds; gaps are advisory"""

    n: int
    ell: int
    N_max: int
    w_hat: Optional[float] = None
    w: Optional[float] = None
    mu: Optional[float] = None
    mu_full: Optional[float] = None
    tautology_ok: Optional[bool] = None
    rows: List[BoundRow] = Field(default_factory=list)


def _row(name: str, compute, estimate: Optional[float], ell: Optional[int] = None) -> BoundRow:
    try:
        value = compute()
    except DomainError as e:
        return BoundRow(name=name, ell=ell, estimate=estimate, note=str(e))
    exact = format_rational(value) if isinstance(value, Fraction) else None
    gap = estimate - float(value) if estimate is not None else None
    return BoundRow(name=name, ell=ell, value=float(value), exact=exact, estimate=estimate, gap=gap)


def _estimate_or_none(run) -> Optional[float]:
    try:
        return run().estimate
    except NoRecords as e:
        logger.warning("No estimate: %s", e)
        return None


def _ratio_bounds(records: Sequence[ConeRecord], burn_in: int) -> Optional[Tuple[float, float]]:
    """Largest lower and largest upper exponent ratio from the certified errors"""
    pairs = [
        (log_ratio(r.err.upper, r.h), log_ratio(r.err.lower, r.h))
        for r in records
        if r.h >= max(burn_in, 2)
    ]
    if not pairs:
        return None
    return max(lo for lo, _ in pairs), max(hi for _, hi in pairs)


def ratio_exceeds(
    records: Sequence[ConeRecord], reference: Sequence[ConeRecord], burn_in: int
) -> bool:
    """True only when the max ratio of records provably exceeds that of reference"""
    ours = _ratio_bounds(records, burn_in)
    theirs = _ratio_bounds(reference, burn_in)
    if ours is None or theirs is None:
        return False
    return ours[0] > theirs[1] + RATIO_SLACK


def bounds_report(
    alpha: RealVector,
    ell: int,
    N_max: int,
    burn_in: int = DEFAULT_BURN_IN,
    *,
    workers: int = 1,
    precision_cap: Optional[int] = None,
) -> BoundsReport:
    """
    Evaluate every bound formula at the truncated estimates of ŵ and w

    The only hard check is μ̂_{n,ℓ} <= μ̂_{n,n} on identical truncation, and
    tautology_ok is False only when the record error enclosures prove the
    opposite. Bound-vs-estimate gaps are reported and never asserted.
    """
    n = alpha.n
    if not 1 <= ell <= n:
        raise ValidationError(f"ell must lie in [1, {n}], got {ell}")
    w_hat = _estimate_or_none(
        lambda: estimate_w_hat(alpha, N_max, workers=workers, precision_cap=precision_cap)
    )
    full_scan = record_scan(
        alpha, ConeSpec(n), N_max, workers=workers, precision_cap=precision_cap
    )
    w = _estimate_or_none(lambda: estimate_mu(full_scan, burn_in, kind="w"))
    if ell == n:
        scan = full_scan
        mu = w
    else:
        scan = record_scan(
            alpha, ConeSpec(ell), N_max, workers=workers, precision_cap=precision_cap
        )
        mu = _estimate_or_none(lambda: estimate_mu(scan, burn_in))

    tautology_ok = None
    if mu is not None and w is not None:
        tautology_ok = not ratio_exceeds(scan.records, full_scan.records, burn_in)
        if not tautology_ok:
            logger.error("Cone estimate %.6f exceeds the unrestricted estimate %.6f", mu, w)

    rows: List[BoundRow] = []
    if w_hat is not None:
        rows.append(_row("uniform", lambda: bound_uniform(w_hat, n, ell), mu, ell))
        if w is not None:
            rows.append(_row("thurnheer", lambda: bound_thurnheer(w_hat, w), w))
        if n == 2:
            rows.append(_row("schmidt", lambda: bound_schmidt(w_hat), mu, 1))
    rows.append(_row("golden", lambda: bound_golden(n), mu if ell == 1 else None, 1))
    for k in range(1, n):
        rows.append(_row("veronese", lambda k=k: bound_veronese(n, k), mu if k == ell else None, k))

    return BoundsReport(
        n=n,
        ell=ell,
        N_max=N_max,
        w_hat=w_hat,
        w=w,
        mu=mu,
        mu_full=w,
        tautology_ok=tautology_ok,
        rows=rows,
    )


def bound_table(n_max: int) -> Dict[str, List[str]]:
    """Exact Veronese bounds for 1 <= ℓ < n <= n_max, keyed by n"""
    return {
        str(n): [format_rational(bound_veronese(n, ell)) for ell in range(1, n)]
        for n in range(2, n_max + 1)
    }
