"""
Exact arithmetic functions and the counting identities behind the
zero-one law: primitive cone vectors, Möbius sums and totient sums
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import sympy
from mpmath.libmp import mpf_pi, round_ceiling, round_floor, to_rational
from pydantic import BaseModel, Field

from utils import (
    CorridorViolation,
    InvariantViolation,
    PrecisionExhausted,
    ValidationError,
    format_rational,
    get_cache_dir,
    get_precision_cap,
)

logger = logging.getLogger(__name__)

MIN_SIEVE = 1 << 12
EXACT_COUNT_CAP = 5000
PN_CSV_HEADER = ["N", "pn_exact", "pn_moebius", "ratio_to_N^(n-1)", "moebius_sum"]


@dataclass(frozen=True, eq=False)
class SieveTables:
    """Smallest prime factor, Möbius and totient values for 0..limit"""

    limit: int
    spf: np.ndarray
    mobius: np.ndarray
    phi: np.ndarray

    @property
    def primes(self) -> np.ndarray:
        idx = np.arange(self.limit + 1)
        return idx[(self.spf == idx) & (idx >= 2)]


def build_sieve(limit: int) -> SieveTables:
    """
    Eratosthenes sieve carrying smallest prime factors, μ and φ

    Args:
        limit: Largest integer covered (>= 1)

    Returns:
        SieveTables: Arrays indexed by integer
    """
    limit = max(limit, 1)
    spf = np.zeros(limit + 1, dtype=np.int64)
    mobius = np.ones(limit + 1, dtype=np.int8)
    phi = np.arange(limit + 1, dtype=np.int64)
    mobius[0] = 0
    for p in range(2, limit + 1):
        if spf[p] != 0:
            continue
        multiples = spf[p::p]
        multiples[multiples == 0] = p
        mobius[p::p] *= -1
        if p * p <= limit:
            mobius[p * p :: p * p] = 0
        phi[p::p] -= phi[p::p] // p
    spf[1] = 1
    return SieveTables(limit, spf, mobius, phi)


def _cache_path(limit: int) -> Optional[Path]:
    directory = get_cache_dir()
    if directory is None:
        return None
    return directory / f"sieve_{limit}.npz"


def _load_or_build(limit: int) -> SieveTables:
    path = _cache_path(limit)
    if path is not None and path.exists():
        try:
            with np.load(path) as data:
                logger.debug("Loaded sieve up to %d from %s", limit, path)
                return SieveTables(limit, data["spf"], data["mobius"], data["phi"])
        except (OSError, KeyError, ValueError) as e:
            logger.warning("Ignoring unreadable sieve cache %s: %s", path, e)
    tables = build_sieve(limit)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez_compressed(path, spf=tables.spf, mobius=tables.mobius, phi=tables.phi)
        logger.debug("Saved sieve up to %d to %s", limit, path)
    return tables


_SIEVE: Optional[SieveTables] = None


def sieve_tables(limit: int) -> SieveTables:
    """Shared sieve covering at least 0..limit; grows by powers of two"""
    global _SIEVE
    if _SIEVE is None or _SIEVE.limit < limit:
        size = MIN_SIEVE
        while size < limit:
            size *= 2
        _SIEVE = _load_or_build(size)
    return _SIEVE


def _check_positive(name: str, value: int) -> None:
    if value < 1:
        raise ValidationError(f"{name} must be >= 1, got {value}")


def factorize(m: int) -> Dict[int, int]:
    """Prime factorization, by sieve lookup when m is covered"""
    _check_positive("m", m)
    if _SIEVE is not None and m <= _SIEVE.limit:
        spf = _SIEVE.spf
        factors: Dict[int, int] = {}
        while m > 1:
            p = int(spf[m])
            factors[p] = factors.get(p, 0) + 1
            m //= p
        return factors
    return {int(p): int(e) for p, e in sympy.factorint(m).items()}


def moebius(m: int) -> int:
    """Möbius function μ(m) for m >= 1"""
    factors = factorize(m)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def totient(m: int) -> int:
    """Euler totient φ(m) for m >= 1"""
    result = m
    for p in factorize(m):
        result -= result // p
    return result


def divisors(m: int) -> List[int]:
    """Sorted positive divisors of m"""
    result = [1]
    for p, e in factorize(m).items():
        result = [d * p**k for d in result for k in range(e + 1)]
    return sorted(result)


def totient_partial_sum(N: int) -> int:
    """Σ_{r <= N} φ(r)"""
    _check_positive("N", N)
    tables = sieve_tables(N)
    return int(tables.phi[1 : N + 1].sum())


def primes_up_to(N: int) -> List[int]:
    """All primes p <= N (empty below 2)"""
    if N < 2:
        return []
    tables = sieve_tables(N)
    primes = tables.primes
    return [int(p) for p in primes[primes <= N]]


def prime_count(x: float) -> int:
    """Prime counting function π(x)"""
    N = math.floor(x)
    if N < 2:
        return 0
    tables = sieve_tables(N)
    return int(np.searchsorted(tables.primes, N, side="right"))


def six_over_pi_squared(bits: int = 64) -> Tuple[Fraction, Fraction]:
    """Rational enclosure of 6/π² from directed-rounded π"""
    pi_lo = Fraction(*to_rational(mpf_pi(bits, round_floor)))
    pi_hi = Fraction(*to_rational(mpf_pi(bits, round_ceiling)))
    return Fraction(6) / (pi_hi * pi_hi), Fraction(6) / (pi_lo * pi_lo)


def exceeds_six_over_pi_squared(value: Fraction, precision_cap: Optional[int] = None) -> bool:
    """Certified comparison value > 6/π² (6/π² is irrational, so never a tie)"""
    cap = precision_cap if precision_cap is not None else get_precision_cap()
    bits = 64
    while True:
        lo, hi = six_over_pi_squared(bits)
        if value > hi:
            return True
        if value < lo:
            return False
        if bits >= cap:
            raise PrecisionExhausted(f"Cannot separate {value} from 6/π² at {bits} bits")
        bits = min(2 * bits, cap)


def moebius_sum(n: int, N: int) -> Fraction:
    """Exact Σ_{d | N} μ(d)/d^(n-1) = Π_{p | N} (1 - p^(1-n))"""
    _check_positive("N", N)
    result = Fraction(1)
    for p in factorize(N):
        result *= 1 - Fraction(1, p ** (n - 1))
    return result


def moebius_sum_bound(n: int, N: int) -> Fraction:
    """
    Möbius sum with its corridor check

    Args:
        n: Dimension (>= 3)
        N: Height (>= 1)

    Returns:
        Fraction: Σ_{d | N} μ(d)/d^(n-1), certified inside (6/π², 1]

    Raises:
        CorridorViolation: If the value leaves the corridor
    """
    if n < 3:
        raise ValidationError(f"n must be >= 3, got {n}")
    value = sum(
        (Fraction(moebius(d), d ** (n - 1)) for d in divisors(N)), Fraction(0)
    )
    if value > 1 or not exceeds_six_over_pi_squared(value):
        raise CorridorViolation(f"Möbius sum {value} for n={n}, N={N} outside (6/π², 1]")
    return value


def _check_cone_dims(n: int, ell: int, N: int) -> None:
    if not 1 <= ell < n:
        raise ValidationError(f"Need 1 <= ell < n, got n={n}, ell={ell}")
    _check_positive("N", N)


def _nonneg_box(radius: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    axis = np.arange(radius + 1, dtype=np.int64)
    grid = np.meshgrid(*([axis] * k), indexing="ij")
    return np.stack(grid, axis=-1).reshape(-1, k)


def _row_gcd(rows: np.ndarray) -> np.ndarray:
    if rows.shape[1] == 0:
        return np.zeros(len(rows), dtype=np.int64)
    return np.gcd.reduce(rows, axis=1)


def _coprime_pairs(head_gcds: np.ndarray, tail_gcds: np.ndarray, N: int) -> int:
    """#{(a, b): gcd(a, b) = 1}, bucketing both sides by their gcd with N"""
    heads, head_counts = np.unique(np.gcd(head_gcds, N), return_counts=True)
    tails, tail_counts = np.unique(np.gcd(tail_gcds, N), return_counts=True)
    coprime = np.gcd.outer(heads, tails) == 1
    return int(head_counts @ coprime.astype(np.int64) @ tail_counts)


def count_PN_exact(n: int, ell: int, N: int) -> int:
    """
    #P_N by direct enumeration: x in Z_{>=0}^n with H(x) = N, x_n >= 1,
    2 * max(tail) <= max(head) and gcd(x) = 1

    Every vector of the box is generated; the gcd test is vectorized by
    bucketing head and tail gcds modulo their gcd with N.
    """
    _check_cone_dims(n, ell, N)
    if N > EXACT_COUNT_CAP:
        logger.warning("Direct count at N=%d may be slow", N)
    heads = _nonneg_box(N, ell)
    heads = heads[heads.max(axis=1) == N]
    tails = _nonneg_box(N // 2, n - ell)
    tails = tails[tails[:, -1] >= 1]
    if len(tails) == 0:
        return 0
    return _coprime_pairs(_row_gcd(heads), _row_gcd(tails), N)


def _primitive_free_count(n: int, ell: int, M: int) -> int:
    half = M // 2
    return ((M + 1) ** ell - M**ell) * (half + 1) ** (n - ell - 1) * half


def count_PN_moebius(n: int, ell: int, N: int) -> int:
    """#P_N as Σ_{d | N} μ(d) * #{x: H(x) = N/d, x_n >= 1, factor-2 cone}"""
    _check_cone_dims(n, ell, N)
    return sum(moebius(d) * _primitive_free_count(n, ell, N // d) for d in divisors(N))


def count_prime_tail_exact(ell: int, N: int) -> int:
    """
    #{(x_1..x_ell, p) in Z_{>=0}^(ell+1): max x_i = N, p prime <= N/2,
    gcd(x_1, ..., x_ell, p) = 1}
    """
    if ell < 1:
        raise ValidationError(f"ell must be >= 1, got {ell}")
    _check_positive("N", N)
    primes = np.array(primes_up_to(N // 2), dtype=np.int64)
    if len(primes) == 0:
        return 0
    heads = _nonneg_box(N, ell)
    heads = heads[heads.max(axis=1) == N]
    return _coprime_pairs(_row_gcd(heads), primes, N)


def count_prime_tail_moebius_proxy(ell: int, N: int) -> float:
    """Σ_{d | N} μ(d) (N/d)^(ell-1) π(N/(2d)), of the same order as the exact count"""
    if ell < 1:
        raise ValidationError(f"ell must be >= 1, got {ell}")
    _check_positive("N", N)
    return float(
        sum(
            moebius(d) * (N // d) ** (ell - 1) * prime_count(N / (2 * d))
            for d in divisors(N)
        )
    )


def dyadic_divergence_probe(psi: Callable[[int], float], K: int) -> List[float]:
    """
    Partial sums S_0 = 0, ..., S_K with
    S_k = Σ_{j < k} ψ(2^(j+1)) Σ_{2^j <= r < 2^(j+1)} φ(r)

    Growth linear in k witnesses divergence; a Cauchy tail witnesses convergence.
    """
    if K < 0:
        raise ValidationError(f"K must be >= 0, got {K}")
    sums = [0.0]
    if K == 0:
        return sums
    tables = sieve_tables(1 << K)
    cumulative = np.concatenate([[0], np.cumsum(tables.phi[1 : (1 << K) + 1])])
    for j in range(K):
        block = int(cumulative[(1 << (j + 1)) - 1] - cumulative[(1 << j) - 1])
        sums.append(sums[-1] + psi(1 << (j + 1)) * block)
    return sums


def phi_sum_error_bound_check(N_lo: int, N_hi: int, constant: float = 3.0) -> List[int]:
    """Heights N in [N_lo, N_hi] where |Σ φ(r) - 3N²/π²| > constant * N log N"""
    if N_lo < 2 or N_hi < N_lo:
        raise ValidationError(f"Invalid range {N_lo}..{N_hi}")
    tables = sieve_tables(N_hi)
    sums = np.cumsum(tables.phi[: N_hi + 1].astype(np.float64))
    N = np.arange(N_lo, N_hi + 1, dtype=np.float64)
    deviation = np.abs(sums[N_lo : N_hi + 1] - 3.0 * N * N / math.pi**2)
    failures = N[deviation > constant * N * np.log(N)]
    return [int(v) for v in failures]


class CountReport(BaseModel):
    """Counts and sums over a height range; corridor_violations must be empty"""

    n: int
    ell: int
    N_range: Tuple[int, int]
    pn_counts: Dict[int, int] = Field(default_factory=dict)
    pn_exact_counts: Dict[int, int] = Field(default_factory=dict)
    moebius_sums: Dict[int, str] = Field(default_factory=dict)
    totient_sums: Dict[int, int] = Field(default_factory=dict)
    corridor_violations: List[int] = Field(default_factory=list)
    ratio_min: Optional[float] = None
    ratio_max: Optional[float] = None


def count_report(n: int, ell: int, N_lo: int, N_hi: int, exact: bool = False) -> CountReport:
    """
    Collect #P_N, Möbius sums and totient sums for N_lo <= N <= N_hi

    Args:
        n: Dimension
        ell: Cone size (1 <= ell < n)
        N_lo: First height
        N_hi: Last height
        exact: Also count by direct enumeration and compare

    Returns:
        CountReport: With the empirical range of #P_N / N^(n-1)

    Raises:
        InvariantViolation: If the direct and Möbius counts disagree
    """
    _check_cone_dims(n, ell, N_lo)
    if N_hi < N_lo:
        raise ValidationError(f"Empty range {N_lo}..{N_hi}")
    report = CountReport(n=n, ell=ell, N_range=(N_lo, N_hi))
    totals = np.cumsum(sieve_tables(N_hi).phi[: N_hi + 1])
    ratios = []
    for N in range(N_lo, N_hi + 1):
        count = count_PN_moebius(n, ell, N)
        report.pn_counts[N] = count
        report.totient_sums[N] = int(totals[N])
        if count > 0:
            ratios.append(count / N ** (n - 1))
        if exact:
            direct = count_PN_exact(n, ell, N)
            report.pn_exact_counts[N] = direct
            if direct != count:
                raise InvariantViolation(
                    f"Direct count {direct} != Möbius count {count} at N={N}"
                )
        if n >= 3:
            try:
                report.moebius_sums[N] = format_rational(moebius_sum_bound(n, N))
            except CorridorViolation as e:
                logger.error("%s", e)
                report.corridor_violations.append(N)
    if ratios:
        report.ratio_min = min(ratios)
        report.ratio_max = max(ratios)
    logger.info(
        "Counted P_N for n=%d, ell=%d over %d..%d (ratio range %s..%s)",
        n,
        ell,
        N_lo,
        N_hi,
        report.ratio_min,
        report.ratio_max,
    )
    return report


def count_csv_rows(report: CountReport) -> List[List[str]]:
    rows = []
    for N, count in sorted(report.pn_counts.items()):
        exact = report.pn_exact_counts.get(N)
        rows.append(
            [
                str(N),
                "" if exact is None else str(exact),
                str(count),
                f"{count / N ** (report.n - 1):.12g}",
                report.moebius_sums.get(N, ""),
            ]
        )
    return rows
