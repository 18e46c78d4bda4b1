"""
Monte Carlo trials for the zero-one law at truncated height, series
partial sums, dimension formulas and the lacunary-series fixture
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from mpmath import iv
from mpmath.libmp import to_rational
from pydantic import BaseModel, Field

from core import ConeSpec, PrecisionReal, RealVector, float_screen, linear_form_error
from enumeration import iter_shell_blocks
from utils import (
    DomainError,
    Number,
    PrecisionExhausted,
    ValidationError,
    format_rational,
    get_default_precision,
    get_precision_cap,
    parse_rational,
)

logger = logging.getLogger(__name__)

UNIFORM_BITS = 128
SCREEN_SLACK = 1e-9


def _iv_bounds(value) -> Tuple[Fraction, Fraction]:
    lo, hi = value._mpi_
    return Fraction(*to_rational(lo)), Fraction(*to_rational(hi))


@dataclass(frozen=True)
class ApproxFunction:
    """
    ψ(h) = h^(-w) (log h)^log_exp for h >= 2, ψ(1) = 1

    Below the threshold where ψ starts decreasing the value is clamped to
    min(1, ψ(threshold)). ψ is non-increasing from the threshold on, and on
    every h >= 1 whenever ψ(threshold) <= 1.
    """

    w: Fraction
    log_exp: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "w", parse_rational(self.w))
        object.__setattr__(self, "log_exp", parse_rational(self.log_exp))
        if self.w <= 0:
            raise ValidationError(f"ψ exponent w must be positive, got {self.w}")

    @property
    def threshold(self) -> int:
        if self.log_exp <= 0:
            return 2
        return max(2, math.ceil(math.exp(float(self.log_exp / self.w))))

    def _effective(self, h: int) -> Tuple[int, bool]:
        """Height where ψ is evaluated and whether the value is capped at 1"""
        if h <= 1:
            return 1, True
        if h < self.threshold:
            return self.threshold, True
        return h, False

    def __call__(self, h: int) -> float:
        at, capped = self._effective(h)
        if at == 1:
            return 1.0
        value = math.exp(-float(self.w) * math.log(at) + float(self.log_exp) * math.log(math.log(at)))
        return min(1.0, value) if capped else value

    def values(self, heights: np.ndarray) -> np.ndarray:
        """Vectorized float ψ, used only for screening"""
        h = np.maximum(heights.astype(np.float64), float(self.threshold))
        logs = np.log(h)
        out = np.exp(-float(self.w) * logs + float(self.log_exp) * np.log(logs))
        clamp = heights < self.threshold
        out[clamp] = np.minimum(out[clamp], 1.0)
        out[heights <= 1] = 1.0
        return out

    def enclosure(self, h: int, bits: int = 64) -> Tuple[Fraction, Fraction]:
        """Certified rational bounds on ψ(h) at the given interval precision"""
        at, capped = self._effective(h)
        if at == 1:
            return Fraction(1), Fraction(1)
        old = iv.prec
        try:
            iv.prec = bits
            log_h = iv.log(iv.mpf(at))
            w = iv.mpf(self.w.numerator) / self.w.denominator
            k = iv.mpf(self.log_exp.numerator) / self.log_exp.denominator
            value = iv.exp(-w * log_h + k * iv.log(log_h))
            lo, hi = _iv_bounds(value)
        finally:
            iv.prec = old
        if capped:
            lo, hi = min(lo, Fraction(1)), min(hi, Fraction(1))
        return lo, hi

    def compare(self, err: Fraction, h: int, precision_cap: Optional[int] = None) -> int:
        """
        Sign of err - ψ(h), certified

        Raises:
            PrecisionExhausted: If the comparison stays open at the precision cap
        """
        at, capped = self._effective(h)
        if at == 1:
            return (err > 1) - (err < 1)
        if self.log_exp == 0:
            # err <= at^(-p/q)  <=>  err^q * at^p <= 1
            p, q = self.w.numerator, self.w.denominator
            lhs = err**q * at**p
            return (lhs > 1) - (lhs < 1)
        cap = precision_cap if precision_cap is not None else get_precision_cap()
        bits = 64
        while True:
            lo, hi = self.enclosure(h, bits)
            if err < lo:
                return -1
            if err > hi:
                return 1
            if bits >= cap:
                raise PrecisionExhausted(f"err={err} vs ψ({h}) unresolved at {bits} bits")
            bits = min(2 * bits, cap)

    def describe(self) -> str:
        text = f"h^-{format_rational(self.w)}"
        if self.log_exp:
            text += f" * log(h)^{format_rational(self.log_exp)}"
        return text


class ApproxFunctionModel(BaseModel):
    w: str
    log_exp: str
    threshold: int

    @classmethod
    def of(cls, psi: ApproxFunction) -> "ApproxFunctionModel":
        return cls(
            w=format_rational(psi.w),
            log_exp=format_rational(psi.log_exp),
            threshold=psi.threshold,
        )


class TrialOutcome(BaseModel):
    index: int
    witnesses: int
    first_witness_height: Optional[int] = None
    last_witness_height: Optional[int] = None
    unresolved: int = 0


class TrialReport(BaseModel):
    """hit_fraction is hits / trials exactly"""

    n: int
    ell: int
    psi: ApproxFunctionModel
    N_max: int
    trials: int
    seed: int
    hits: int
    hit_fraction: float
    stderr: float
    tail_hit_fraction: float
    unresolved_total: int = 0
    per_trial: List[TrialOutcome] = Field(default_factory=list)


class SweepRow(BaseModel):
    N_max: int
    hit_fraction: float
    tail_hit_fraction: float


SWEEP_CSV_HEADER = ["N_max", "hit_fraction", "tail_hit_fraction"]


@dataclass
class _TrialResult:
    index: int
    heights: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    witnesses: int = 0
    unresolved: int = 0


def uniform_vector(n: int, seed_sequence: np.random.SeedSequence) -> RealVector:
    """α uniform in [0,1)^n on the grid 2^-128, drawn from a Philox stream"""
    generator = np.random.Philox(seed_sequence)
    raw = generator.random_raw(2 * n)
    coords = []
    for i in range(n):
        m = (int(raw[2 * i]) << 64) | int(raw[2 * i + 1])
        coords.append(PrecisionReal.rational(m, 1 << UNIFORM_BITS))
    return RealVector(tuple(coords))


def trial_seeds(seed: int, trials: int) -> List[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(trials)


def _run_trial(
    index: int,
    alpha: RealVector,
    spec: ConeSpec,
    psi: ApproxFunction,
    N_max: int,
    precision_cap: int,
) -> _TrialResult:
    """All witnesses 2 <= H(x) <= N_max with 0 < ||x.α|| <= ψ(H(x))"""
    screen = float_screen(alpha)
    result = _TrialResult(index)
    heights = []
    for block in iter_shell_blocks(alpha.n, spec, 2, N_max):
        row_heights = block.row_heights()
        dist = screen.distances(block.vectors)
        limit = psi.values(row_heights) * (1 + SCREEN_SLACK) + screen.margins(row_heights)
        for i in np.nonzero(dist <= limit)[0]:
            x = tuple(int(v) for v in block.vectors[i])
            h = int(row_heights[i])
            try:
                err = linear_form_error(alpha, x, precision_cap)
                if err.is_exact_zero:
                    continue
                if psi.compare(err.upper, h, precision_cap) > 0:
                    if psi.compare(err.lower, h, precision_cap) > 0:
                        continue
                    raise PrecisionExhausted(f"ψ({h}) inside the enclosure of ||x.α||")
            except PrecisionExhausted as e:
                logger.debug("Trial %d: %s", index, e)
                result.unresolved += 1
                continue
            result.witnesses += 1
            heights.append(h)
    result.heights = np.unique(np.array(heights, dtype=np.int64))
    return result


def _run_trials(
    n: int,
    spec: ConeSpec,
    psi: ApproxFunction,
    N_max: int,
    trials: int,
    seed: int,
    workers: int,
    precision_cap: Optional[int],
) -> List[_TrialResult]:
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    if N_max < 2:
        raise ValidationError(f"N_max must be >= 2, got {N_max}")
    spec.check_dimension(n)
    cap = precision_cap if precision_cap is not None else get_precision_cap()
    alphas = [uniform_vector(n, s) for s in trial_seeds(seed, trials)]
    args = (
        list(range(trials)),
        alphas,
        [spec] * trials,
        [psi] * trials,
        [N_max] * trials,
        [cap] * trials,
    )
    if workers <= 1:
        results = list(map(_run_trial, *args))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_trial, *args))
    results.sort(key=lambda r: r.index)
    return results


def _fractions_at(results: Sequence[_TrialResult], N: int) -> Tuple[int, int]:
    hits = tail_hits = 0
    window_lo = (N + 1) // 2
    for r in results:
        inside = r.heights[r.heights <= N]
        if len(inside):
            hits += 1
            if inside[-1] >= window_lo:
                tail_hits += 1
    return hits, tail_hits


def sample_experiment(
    n: int,
    ell: int,
    psi: ApproxFunction,
    N_max: int,
    trials: int,
    seed: int,
    *,
    constant_C: Number = 1,
    workers: int = 1,
    precision_cap: Optional[int] = None,
) -> TrialReport:
    """
    Fraction of seeded uniform α with a cone witness 0 < ||x.α|| <= ψ(H(x))
    at some height 2 <= H(x) <= N_max

    Each trial draws α from its own spawned Philox stream, so the report
    depends only on (seed, parameters) and not on the worker count.

    Args:
        n: Dimension
        ell: Cone size
        psi: Approximation function
        N_max: Truncation height
        trials: Number of trials (>= 1)
        seed: Root seed
        constant_C: Cone constant
        workers: Process count for independent trials

    Returns:
        TrialReport: Hit fraction with binomial standard error
    """
    spec = ConeSpec(ell, Fraction(constant_C))
    results = _run_trials(n, spec, psi, N_max, trials, seed, workers, precision_cap)
    hits, tail_hits = _fractions_at(results, N_max)
    fraction = hits / trials
    unresolved = sum(r.unresolved for r in results)
    if unresolved:
        logger.warning("%d witness checks unresolved across %d trials", unresolved, trials)
    logger.info("ψ=%s N_max=%d: %d/%d hits", psi.describe(), N_max, hits, trials)
    return TrialReport(
        n=n,
        ell=ell,
        psi=ApproxFunctionModel.of(psi),
        N_max=N_max,
        trials=trials,
        seed=seed,
        hits=hits,
        hit_fraction=fraction,
        stderr=math.sqrt(fraction * (1 - fraction) / trials),
        tail_hit_fraction=tail_hits / trials,
        unresolved_total=unresolved,
        per_trial=[
            TrialOutcome(
                index=r.index,
                witnesses=r.witnesses,
                first_witness_height=int(r.heights[0]) if len(r.heights) else None,
                last_witness_height=int(r.heights[-1]) if len(r.heights) else None,
                unresolved=r.unresolved,
            )
            for r in results
        ],
    )


def sweep_experiment(
    n: int,
    ell: int,
    psi: ApproxFunction,
    N_values: Sequence[int],
    trials: int,
    seed: int,
    *,
    constant_C: Number = 1,
    workers: int = 1,
    precision_cap: Optional[int] = None,
) -> List[SweepRow]:
    """(N_max, hit_fraction, tail_hit_fraction) rows from a single run at max(N_values)"""
    if not N_values:
        raise ValidationError("N_values is empty")
    spec = ConeSpec(ell, Fraction(constant_C))
    results = _run_trials(
        n, spec, psi, max(N_values), trials, seed, workers, precision_cap
    )
    rows = []
    for N in sorted(set(N_values)):
        hits, tail_hits = _fractions_at(results, N)
        rows.append(
            SweepRow(N_max=N, hit_fraction=hits / trials, tail_hit_fraction=tail_hits / trials)
        )
    return rows


class SeriesReport(BaseModel):
    """Partial sums at h = 2, 4, 8, ... up to H (and at H itself)"""

    checkpoints: List[int]
    sums: List[float]
    log_damped_sums: List[float] = Field(default_factory=list)


def _checkpoints(H: int) -> List[int]:
    points = []
    h = 2
    while h < H:
        points.append(h)
        h *= 2
    points.append(H)
    return points


def _series(weights: np.ndarray, psi: ApproxFunction, H: int) -> Tuple[np.ndarray, np.ndarray]:
    heights = np.arange(1, H + 1, dtype=np.int64)
    terms = weights * psi.values(heights)
    return heights, np.cumsum(terms)


def groshev_series(n: int, psi: ApproxFunction, H: int) -> SeriesReport:
    """Partial sums of Σ_h h^(n-1) ψ(h), whose convergence decides the measure"""
    if H < 2:
        raise ValidationError(f"H must be >= 2, got {H}")
    heights = np.arange(1, H + 1, dtype=np.float64)
    _, sums = _series(heights ** (n - 1), psi, H)
    points = _checkpoints(H)
    return SeriesReport(checkpoints=points, sums=[float(sums[h - 1]) for h in points])


def auxiliary_series(ell: int, psi: ApproxFunction, H: int) -> SeriesReport:
    """
    Partial sums of Σ h^ell ψ(h) and Σ_{h>=2} h^ell ψ(h) / log h

    The first converging suffices for the null case and the second diverging
    for the full case; between the two the result is open.
    """
    if H < 2:
        raise ValidationError(f"H must be >= 2, got {H}")
    heights = np.arange(1, H + 1, dtype=np.float64)
    weights = heights**ell
    _, sums = _series(weights, psi, H)
    damping = np.zeros_like(heights)
    damping[1:] = 1.0 / np.log(heights[1:])
    _, damped = _series(weights * damping, psi, H)
    points = _checkpoints(H)
    return SeriesReport(
        checkpoints=points,
        sums=[float(sums[h - 1]) for h in points],
        log_damped_sums=[float(damped[h - 1]) for h in points],
    )


def _dimension(base: int, numerator: int, exponent: Union[Number, float]) -> Union[Fraction, float]:
    if isinstance(exponent, float):
        if math.isinf(exponent):
            return float(base)
        return base + numerator / (exponent + 1)
    return base + Fraction(numerator) / (Fraction(exponent) + 1)


def dim_exact_order(n: int, mu: Union[Number, float]) -> Union[Fraction, float]:
    """
    Hausdorff dimension n - 1 + (n+1)/(μ+1) of the α with exponent exactly μ

    Raises:
        DomainError: If μ < n
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if mu < n:
        raise DomainError(f"μ={mu} below the almost-everywhere value {n}")
    return _dimension(n - 1, n + 1, mu)


def dim_aux(ell: int, nu: Union[Number, float]) -> Union[Fraction, float]:
    """
    Dimension ell - 1 + (ell+2)/(ν+1) of the auxiliary set with exponent ν

    Raises:
        DomainError: If ν < ell + 1
    """
    if ell < 1:
        raise ValidationError(f"ell must be >= 1, got {ell}")
    if nu < ell + 1:
        raise DomainError(f"ν={nu} below ell+1={ell + 1}")
    return _dimension(ell - 1, ell + 2, nu)


def gap_series_vector(
    n: int,
    w_target: Number,
    seed: int,
    bits: Optional[int] = None,
) -> RealVector:
    """
    α_1 = Σ_k 2^(-a_k) with a_1 = 1, a_(k+1) = ceil((w_target+1) a_k); the
    other coordinates are seeded uniform

    ||2^(a_k) α_1|| is about 2^(a_k - a_(k+1)), so the axis ratio tends to w_target.
    """
    w_target = parse_rational(w_target)
    if w_target < 2:
        raise ValidationError(f"w_target must be >= 2, got {w_target}")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    bits = bits or get_default_precision()
    head = PrecisionReal.series(w_target + 1, bits)
    rest = uniform_vector(n - 1, np.random.SeedSequence(seed)).coords if n > 1 else ()
    return RealVector((head,) + tuple(rest))
