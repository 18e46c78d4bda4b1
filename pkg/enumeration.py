"""
Record enumeration over height shells and truncated exponent estimates

Shells are scanned in increasing height. Inside a shell only canonical
vectors (first nonzero entry negative) are generated, since x and -x give the
same error and the negative one is lexicographically smaller. A float64 screen
with a rigorous error margin discards vectors that cannot matter; everything
that survives is decided with exact integer arithmetic.
"""

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from core import (
    ConeSpec,
    IntVector,
    PrecisionReal,
    RealVector,
    compare_certified,
    fixed_point_view,
    float_screen,
    height,
    in_cone,
    linear_form_error,
)
from lattice import DEFAULT_NODE_BUDGET, box_points
from utils import (
    CapExceeded,
    NoRecords,
    PrecisionExhausted,
    ValidationError,
    format_rational,
    get_precision_cap,
    log_ratio,
)

logger = logging.getLogger(__name__)

DEFAULT_BURN_IN = 10
ORACLE_CAP = 200
ORACLE_MAX_DIMENSION = 3
BLOCK_ROWS = 1 << 16


@dataclass(frozen=True)
class ConeRecord:
    """A record-setting cone vector with its certified error"""

    x: IntVector
    h: int
    err: PrecisionReal

    @property
    def ratio(self) -> Optional[float]:
        """-log(err)/log(h) evaluated at the upper end of the enclosure"""
        return log_ratio(self.err.upper, self.h)


@dataclass(frozen=True)
class ScanResult:
    """Records up to n_max plus the count of comparisons left undecided"""

    records: Tuple[ConeRecord, ...]
    unresolved: int
    n: int
    spec: ConeSpec
    n_max: int
    single_tail: bool = False


class RecordModel(BaseModel):
    h: int
    x: List[int]
    err_lo: str
    err_hi: str
    ratio: Optional[float] = None


class GridSample(BaseModel):
    X: int
    err_lo: Optional[str] = None
    err_hi: Optional[str] = None
    ratio: Optional[float] = None
    dirichlet_bound: str
    dirichlet_ok: bool


class ExponentReport(BaseModel):
    """Truncated exponent estimate; never a certified limsup"""

    kind: Literal["mu", "w", "w_hat", "nu_tilde"]
    n: int
    ell: int
    estimate: float
    burn_in_height: int
    truncation_height: int
    records: List[RecordModel] = Field(default_factory=list)
    unresolved_count: int = 0
    grid: List[GridSample] = Field(default_factory=list)
    dirichlet_failures: List[int] = Field(default_factory=list)


class FloorReport(BaseModel):
    """Best errors against the pigeonhole floors at a single height N"""

    N: int
    n: int
    ell: int
    axis_best: Optional[str] = None
    axis_bound: str
    axis_ok: bool
    full_best: Optional[str] = None
    full_bound: str
    full_ok: bool


def record_model(record: ConeRecord) -> RecordModel:
    return RecordModel(
        h=record.h,
        x=list(record.x),
        err_lo=format_rational(record.err.lower),
        err_hi=format_rational(record.err.upper),
        ratio=record.ratio,
    )


def records_csv_rows(records: Sequence[Union[ConeRecord, RecordModel]]) -> List[List[str]]:
    """Rows for the records table: h, x (semicolon-joined), err_lo, err_hi, ratio"""
    rows = []
    for record in records:
        if isinstance(record, ConeRecord):
            record = record_model(record)
        rows.append(
            [
                str(record.h),
                ";".join(str(v) for v in record.x),
                f"{float(Fraction(record.err_lo)):.17g}",
                f"{float(Fraction(record.err_hi)):.17g}",
                "" if record.ratio is None else f"{record.ratio:.12g}",
            ]
        )
    return rows


RECORDS_CSV_HEADER = ["h", "x", "err_lo", "err_hi", "ratio"]


# Shell generation


def _box(radius: int, k: int) -> np.ndarray:
    """All vectors of [-radius, radius]^k in lexicographic order"""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if radius < 0:
        return np.zeros((0, k), dtype=np.int64)
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    grid = np.meshgrid(*([axis] * k), indexing="ij")
    return np.stack(grid, axis=-1).reshape(-1, k)


def _exact_max(radius: int, k: int) -> np.ndarray:
    """All vectors of Z^k with max |x_i| == radius"""
    if radius == 0:
        return np.zeros((1, k), dtype=np.int64)
    parts = []
    inner = np.arange(-(radius - 1), radius, dtype=np.int64)
    outer = np.arange(-radius, radius + 1, dtype=np.int64)
    edge = np.array([-radius, radius], dtype=np.int64)
    for j in range(k):
        axes = [inner] * j + [edge] + [outer] * (k - 1 - j)
        grid = np.meshgrid(*axes, indexing="ij")
        parts.append(np.stack(grid, axis=-1).reshape(-1, k))
    return np.concatenate(parts)


def _combine(heads: np.ndarray, tails: np.ndarray) -> np.ndarray:
    if len(heads) == 0 or len(tails) == 0:
        return np.zeros((0, heads.shape[1] + tails.shape[1]), dtype=np.int64)
    return np.hstack(
        [np.repeat(heads, len(tails), axis=0), np.tile(tails, (len(heads), 1))]
    )


def _canonical(vectors: np.ndarray) -> np.ndarray:
    nonzero = vectors != 0
    first = np.argmax(nonzero, axis=1)
    leading = vectors[np.arange(len(vectors)), first]
    return vectors[leading < 0]


def shell_vectors(h: int, n: int, spec: ConeSpec, single_tail: bool = False) -> np.ndarray:
    """
    Canonical cone vectors of height exactly h, sorted lexicographically

    The head (first ell coordinates) has maximum m <= h and the tail stays
    inside the cone bound for m; when C > 1 the tail may carry the height.
    """
    ell = spec.ell
    if h < 1:
        return np.zeros((0, n), dtype=np.int64)
    if spec.is_vacuous(n):
        rows = _exact_max(h, n)
    else:
        parts = []
        for m in range(1, h + 1):
            bound = min(spec.tail_bound(m), h)
            if m == h and bound >= 0:
                parts.append(_combine(_exact_max(h, ell), _box(bound, n - ell)))
            elif m < h and bound == h:
                parts.append(_combine(_exact_max(m, ell), _exact_max(h, n - ell)))
        if not parts:
            return np.zeros((0, n), dtype=np.int64)
        rows = np.concatenate(parts)
        if single_tail:
            rows = rows[np.count_nonzero(rows[:, ell:], axis=1) <= 1]
    rows = _canonical(rows)
    order = np.lexsort(rows.T[::-1])
    return rows[order]


@dataclass(frozen=True, eq=False)
class ShellBlock:
    """Consecutive shells; rows starts[i]:starts[i+1] have height heights[i]"""

    heights: np.ndarray
    starts: np.ndarray
    vectors: np.ndarray

    def row_heights(self) -> np.ndarray:
        return np.repeat(self.heights, np.diff(self.starts))


def iter_shell_blocks(
    n: int,
    spec: ConeSpec,
    h_lo: int,
    h_hi: int,
    single_tail: bool = False,
    target_rows: int = BLOCK_ROWS,
) -> Iterator[ShellBlock]:
    """Yield non-empty shells of heights h_lo..h_hi grouped into blocks"""
    h_lo = max(h_lo, 1)
    if h_hi < h_lo:
        return
    if n == 1:
        for start in range(h_lo, h_hi + 1, target_rows):
            heights = np.arange(start, min(start + target_rows, h_hi + 1), dtype=np.int64)
            starts = np.arange(len(heights) + 1, dtype=np.int64)
            yield ShellBlock(heights, starts, (-heights).reshape(-1, 1))
        return
    heights: List[int] = []
    chunks: List[np.ndarray] = []
    rows = 0
    for h in range(h_lo, h_hi + 1):
        shell = shell_vectors(h, n, spec, single_tail)
        if len(shell) == 0:
            continue
        heights.append(h)
        chunks.append(shell)
        rows += len(shell)
        if rows >= target_rows:
            yield _make_block(heights, chunks)
            heights, chunks, rows = [], [], 0
    if chunks:
        yield _make_block(heights, chunks)


def _make_block(heights: List[int], chunks: List[np.ndarray]) -> ShellBlock:
    sizes = [len(c) for c in chunks]
    starts = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    return ShellBlock(np.array(heights, dtype=np.int64), starts, np.concatenate(chunks))


# Certified comparisons


def compare_errors(
    alpha: RealVector,
    xa: Sequence[int],
    ea: PrecisionReal,
    xb: Sequence[int],
    eb: PrecisionReal,
    precision_cap: int,
) -> int:
    """
    Order of ||xa.α|| and ||xb.α||, refining precision while the enclosures
    overlap; an overlap that survives the cap counts as a tie
    """
    order = compare_certified(ea, eb)
    bits = alpha.precision_bits
    while order is None:
        if bits >= precision_cap:
            logger.warning(
                "Tie between %s and %s unresolved at %d bits", tuple(xa), tuple(xb), bits
            )
            return 0
        bits = min(2 * bits, precision_cap)
        view = fixed_point_view(alpha, bits)
        order = compare_certified(view.error(xa), view.error(xb))
    return order


def _float_upper(value: Fraction) -> float:
    return float(value) * (1.0 + 2.0**-50) + 1e-300


@dataclass
class _Best:
    x: IntVector
    err: PrecisionReal


def _block_records(
    alpha: RealVector,
    block: ShellBlock,
    running: Optional[_Best],
    precision_cap: int,
) -> Tuple[List[ConeRecord], Optional[_Best], int]:
    """Records inside one block given the running minimum before it"""
    screen = float_screen(alpha)
    vectors = block.vectors
    dist = screen.distances(vectors)
    margins = screen.margins(block.row_heights())
    unresolved = 0

    # Near-zero rows may be exact zeros, which must not pollute the screen
    for i in np.nonzero(dist <= margins)[0]:
        x = tuple(int(v) for v in vectors[i])
        try:
            err = linear_form_error(alpha, x, precision_cap)
        except PrecisionExhausted:
            logger.warning("Excluding %s: ||x.α|| unresolved at the precision cap", x)
            unresolved += 1
            dist[i] = np.inf
            continue
        if err.is_exact_zero:
            dist[i] = np.inf

    shell_min = np.minimum.reduceat(dist, block.starts[:-1])
    shell_margin = screen.margins(block.heights)
    upper_est = shell_min + shell_margin
    prefix = np.concatenate([[np.inf], np.minimum.accumulate(upper_est)[:-1]])
    bound = prefix
    if running is not None:
        bound = np.minimum(prefix, _float_upper(running.err.upper))
    candidates = np.nonzero(np.isfinite(shell_min) & (shell_min - shell_margin <= bound))[0]

    records: List[ConeRecord] = []
    for s in candidates:
        lo, hi = int(block.starts[s]), int(block.starts[s + 1])
        margin = float(shell_margin[s])
        threshold = float(shell_min[s]) + 2 * margin
        if running is not None:
            threshold = min(threshold, _float_upper(running.err.upper) + margin)
        local = np.nonzero(dist[lo:hi] <= threshold)[0]
        local = local[np.argsort(dist[lo:hi][local], kind="stable")]
        best: Optional[_Best] = None
        for offset in local:
            i = lo + int(offset)
            if best is not None and dist[i] - margin > _float_upper(best.err.upper):
                break
            x = tuple(int(v) for v in vectors[i])
            try:
                err = linear_form_error(alpha, x, precision_cap)
            except PrecisionExhausted:
                logger.warning("Excluding %s: ||x.α|| unresolved at the precision cap", x)
                unresolved += 1
                dist[i] = np.inf
                continue
            if err.is_exact_zero:
                continue
            if best is None:
                best = _Best(x, err)
                continue
            order = compare_errors(alpha, x, err, best.x, best.err, precision_cap)
            if order < 0 or (order == 0 and x < best.x):
                best = _Best(x, err)
        if best is None:
            continue
        if running is None or (
            compare_errors(alpha, best.x, best.err, running.x, running.err, precision_cap)
            < 0
        ):
            records.append(ConeRecord(best.x, int(block.heights[s]), best.err))
            running = best
    return records, running, unresolved


def _scan_range(
    alpha: RealVector,
    spec: ConeSpec,
    h_lo: int,
    h_hi: int,
    single_tail: bool,
    precision_cap: int,
) -> Tuple[List[ConeRecord], int]:
    records: List[ConeRecord] = []
    running: Optional[_Best] = None
    unresolved = 0
    for block in iter_shell_blocks(alpha.n, spec, h_lo, h_hi, single_tail):
        found, running, missed = _block_records(alpha, block, running, precision_cap)
        records.extend(found)
        unresolved += missed
    return records, unresolved


def _split_heights(n: int, n_max: int, parts: int) -> List[Tuple[int, int]]:
    """Contiguous height ranges with roughly equal shell volume h^(n-1)"""
    weights = np.arange(1, n_max + 1, dtype=np.float64) ** (n - 1)
    cumulative = np.cumsum(weights)
    targets = cumulative[-1] * np.arange(1, parts) / parts
    cuts = sorted(set(int(c) + 1 for c in np.searchsorted(cumulative, targets)))
    bounds = [1] + [c for c in cuts if 1 < c <= n_max] + [n_max + 1]
    return [(a, b - 1) for a, b in zip(bounds, bounds[1:]) if a <= b - 1]


def record_scan(
    alpha: RealVector,
    spec: ConeSpec,
    n_max: int,
    *,
    single_tail: bool = False,
    workers: int = 1,
    precision_cap: Optional[int] = None,
) -> ScanResult:
    """
    Record-setting cone vectors up to height n_max

    x is a record iff its error is smaller than that of every cone vector of
    smaller height; inside a shell the smallest error wins, then the
    lexicographically smallest vector. Exact zeros are skipped and
    comparisons undecided at the precision cap are counted, never dropped
    silently.

    Args:
        alpha: Target vector
        spec: Cone specification
        n_max: Truncation height (>= 0)
        single_tail: Restrict to vectors with at most one nonzero tail entry
        workers: Processes for disjoint height ranges (1 = in-process)
        precision_cap: Escalation cap in bits

    Returns:
        ScanResult: Records in increasing height and the unresolved count
    """
    if n_max < 0:
        raise ValidationError(f"n_max must be >= 0, got {n_max}")
    spec.check_dimension(alpha.n)
    cap = precision_cap if precision_cap is not None else get_precision_cap()
    if workers <= 1 or n_max < 2 * workers:
        records, unresolved = _scan_range(alpha, spec, 1, n_max, single_tail, cap)
    else:
        ranges = _split_heights(alpha.n, n_max, 4 * workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(
                    _scan_range,
                    itertools.repeat(alpha),
                    itertools.repeat(spec),
                    [lo for lo, _ in ranges],
                    [hi for _, hi in ranges],
                    itertools.repeat(single_tail),
                    itertools.repeat(cap),
                )
            )
        records = []
        unresolved = 0
        running: Optional[_Best] = None
        for local, missed in parts:
            unresolved += missed
            for record in local:
                if running is None or (
                    compare_errors(alpha, record.x, record.err, running.x, running.err, cap)
                    < 0
                ):
                    records.append(record)
                    running = _Best(record.x, record.err)
    if unresolved:
        logger.warning("%d candidates left unresolved up to height %d", unresolved, n_max)
    return ScanResult(tuple(records), unresolved, alpha.n, spec, n_max, single_tail)


def brute_force_oracle(
    alpha: RealVector,
    spec: ConeSpec,
    N: int,
    *,
    single_tail: bool = False,
    cap: int = ORACLE_CAP,
    precision_cap: Optional[int] = None,
) -> ScanResult:
    """
    Reference records by naive enumeration of every |x_i| <= N

    Raises:
        CapExceeded: If N exceeds the oracle cap or the dimension exceeds 3
    """
    if N < 0:
        raise ValidationError(f"N must be >= 0, got {N}")
    if N > cap or alpha.n > ORACLE_MAX_DIMENSION:
        raise CapExceeded(
            f"Oracle limited to N <= {cap} and n <= {ORACLE_MAX_DIMENSION}"
        )
    spec.check_dimension(alpha.n)
    precision = precision_cap if precision_cap is not None else get_precision_cap()
    best_by_height = {}
    unresolved = 0
    for x in itertools.product(range(-N, N + 1), repeat=alpha.n):
        h = height(x)
        if h == 0 or not in_cone(x, spec):
            continue
        if single_tail and sum(1 for v in x[spec.ell :] if v) > 1:
            continue
        try:
            err = linear_form_error(alpha, x, precision)
        except PrecisionExhausted:
            unresolved += 1
            continue
        if err.is_exact_zero:
            continue
        current = best_by_height.get(h)
        if current is None:
            best_by_height[h] = _Best(x, err)
            continue
        order = compare_errors(alpha, x, err, current.x, current.err, precision)
        if order < 0 or (order == 0 and x < current.x):
            best_by_height[h] = _Best(x, err)
    records = []
    running: Optional[_Best] = None
    for h in sorted(best_by_height):
        best = best_by_height[h]
        if running is None or (
            compare_errors(alpha, best.x, best.err, running.x, running.err, precision) < 0
        ):
            records.append(ConeRecord(best.x, h, best.err))
            running = best
    return ScanResult(tuple(records), unresolved, alpha.n, spec, N, single_tail)


def axis_scan(
    alpha: RealVector,
    n_max: int,
    coordinate: int = 0,
    *,
    precision_cap: Optional[int] = None,
) -> ScanResult:
    """Records of q -> ||q α_i|| for one coordinate, lifted back to n entries"""
    if not 0 <= coordinate < alpha.n:
        raise ValidationError(f"coordinate {coordinate} outside 0..{alpha.n - 1}")
    axis = alpha.project([coordinate])
    scan = record_scan(axis, ConeSpec(1), n_max, precision_cap=precision_cap)
    lifted = []
    for record in scan.records:
        x = [0] * alpha.n
        x[coordinate] = record.x[0]
        lifted.append(ConeRecord(tuple(x), record.h, record.err))
    return ScanResult(tuple(lifted), scan.unresolved, alpha.n, ConeSpec(1), n_max)


def _as_scan(records: Union[ScanResult, Sequence[ConeRecord]]) -> ScanResult:
    if isinstance(records, ScanResult):
        return records
    records = tuple(records)
    n = len(records[0].x) if records else 1
    n_max = max((r.h for r in records), default=0)
    return ScanResult(records, 0, n, ConeSpec(n), n_max)


def estimate_mu(
    records: Union[ScanResult, Sequence[ConeRecord]],
    burn_in: int = DEFAULT_BURN_IN,
    kind: Literal["mu", "w", "nu_tilde"] = "mu",
) -> ExponentReport:
    """
    Maximum record ratio over heights >= burn_in

    Raises:
        NoRecords: If no record reaches the burn-in height
    """
    if burn_in < 2:
        raise ValidationError(f"burn_in must be >= 2, got {burn_in}")
    scan = _as_scan(records)
    ratios = [r.ratio for r in scan.records if r.h >= burn_in and r.ratio is not None]
    if not ratios:
        raise NoRecords(f"No record with height >= {burn_in} up to {scan.n_max}")
    return ExponentReport(
        kind=kind,
        n=scan.n,
        ell=scan.spec.ell,
        estimate=max(ratios),
        burn_in_height=burn_in,
        truncation_height=scan.n_max,
        records=[record_model(r) for r in scan.records],
        unresolved_count=scan.unresolved,
    )


def estimate_w(
    alpha: RealVector,
    n_max: int,
    burn_in: int = DEFAULT_BURN_IN,
    *,
    workers: int = 1,
    precision_cap: Optional[int] = None,
) -> ExponentReport:
    """Classical exponent estimate: records of the unrestricted problem"""
    scan = record_scan(
        alpha, ConeSpec(alpha.n), n_max, workers=workers, precision_cap=precision_cap
    )
    return estimate_mu(scan, burn_in, kind="w")


def dirichlet_bound(X: int, k: int) -> Fraction:
    """Pigeonhole bound 1/((X+1)^k - 1)"""
    return Fraction(1, (X + 1) ** k - 1)


def default_grid(n_max: int) -> List[int]:
    grid = []
    X = 2
    while X <= n_max:
        grid.append(X)
        X *= 2
    return grid


def best_error_up_to(records: Sequence[ConeRecord], X: int) -> Optional[ConeRecord]:
    """Last record with height <= X, i.e. the best error over 0 < H(x) <= X"""
    best = None
    for record in records:
        if record.h > X:
            break
        best = record
    return best


def estimate_w_hat(
    alpha: RealVector,
    n_max: int,
    grid: Optional[Sequence[int]] = None,
    *,
    workers: int = 1,
    precision_cap: Optional[int] = None,
) -> ExponentReport:
    """
    Uniform exponent estimate: min over the grid of -log bestErr(X)/log X

    The pigeonhole bound bestErr(X) < 1/((X+1)^n - 1) is checked with exact
    arithmetic at every grid point; failures are listed in the report.
    """
    grid = sorted(set(grid)) if grid is not None else default_grid(n_max)
    if any(X < 2 or X > n_max for X in grid):
        raise ValidationError(f"Grid values must lie in [2, {n_max}]")
    if not grid:
        raise NoRecords(f"Empty grid for n_max={n_max}")
    scan = record_scan(
        alpha, ConeSpec(alpha.n), n_max, workers=workers, precision_cap=precision_cap
    )
    samples = []
    failures = []
    ratios = []
    for X in grid:
        bound = dirichlet_bound(X, alpha.n)
        best = best_error_up_to(scan.records, X)
        if best is None:
            samples.append(
                GridSample(X=X, dirichlet_bound=format_rational(bound), dirichlet_ok=False)
            )
            failures.append(X)
            continue
        ok = best.err.upper < bound
        if not ok:
            failures.append(X)
        ratio = log_ratio(best.err.upper, X)
        ratios.append(ratio)
        samples.append(
            GridSample(
                X=X,
                err_lo=format_rational(best.err.lower),
                err_hi=format_rational(best.err.upper),
                ratio=ratio,
                dirichlet_bound=format_rational(bound),
                dirichlet_ok=ok,
            )
        )
    if failures:
        logger.warning("Pigeonhole bound not certified at X in %s", failures)
    if not ratios:
        raise NoRecords("No positive error on the grid")
    return ExponentReport(
        kind="w_hat",
        n=alpha.n,
        ell=alpha.n,
        estimate=min(ratios),
        burn_in_height=grid[0],
        truncation_height=n_max,
        records=[record_model(r) for r in scan.records],
        unresolved_count=scan.unresolved,
        grid=samples,
        dirichlet_failures=failures,
    )


def estimate_nu_tilde(
    alpha: RealVector,
    ell: int,
    n_max: int,
    burn_in: int = DEFAULT_BURN_IN,
    *,
    workers: int = 1,
    precision_cap: Optional[int] = None,
) -> ExponentReport:
    """
    Auxiliary exponent: head coordinates plus one tail coordinate at a time

    Vectors with at most one nonzero tail entry realise the minimum over i of
    ||x_1 α_1 + ... + x_ell α_ell + x_(ell+i) α_(ell+i)||.
    """
    if not 1 <= ell < alpha.n:
        raise ValidationError(f"ell must satisfy 1 <= ell < n={alpha.n}")
    scan = record_scan(
        alpha,
        ConeSpec(ell),
        n_max,
        single_tail=True,
        workers=workers,
        precision_cap=precision_cap,
    )
    return estimate_mu(scan, burn_in, kind="nu_tilde")


def _canonical_point(x: IntVector) -> IntVector:
    first = next(v for v in x if v != 0)
    return tuple(x) if first < 0 else tuple(-v for v in x)


def _certified_below(
    alpha: RealVector, x: IntVector, err: PrecisionReal, bound: Fraction, precision_cap: int
) -> bool:
    """||x.α|| < bound, refining precision while the enclosure straddles bound"""
    bits = alpha.precision_bits
    while True:
        if err.upper < bound:
            return True
        if err.lower >= bound:
            return False
        if bits >= precision_cap:
            raise PrecisionExhausted(f"||x.α|| against {bound} undecided at {bits} bits for x={x}")
        bits = min(2 * bits, precision_cap)
        err = fixed_point_view(alpha, bits).error(x)


def _floor_witness(
    alpha: RealVector, N: int, precision_cap: Optional[int], node_budget: int
) -> Optional[ConeRecord]:
    """
    Smallest positive error among 0 < H(x) <= N with ||x.α|| <= 1/((N+1)^n - 1)

    Candidates come from lattice enumeration of that thin box, so the cost does
    not grow with N^n. None means no such vector exists.
    """
    cap = precision_cap if precision_cap is not None else get_precision_cap()
    bound = dirichlet_bound(N, alpha.n)
    found = box_points(alpha, [N] * alpha.n, bound.denominator, node_budget=node_budget)
    best: Optional[ConeRecord] = None
    for x in sorted({_canonical_point(x) for _, x in found.points if any(x)}):
        err = linear_form_error(alpha, x, cap)
        if err.is_exact_zero or err.lower > bound:
            continue
        if best is None or compare_errors(alpha, x, err, best.x, best.err, cap) < 0:
            best = ConeRecord(x, height(x), err)
    return best


def dirichlet_floor_check(
    alpha: RealVector,
    spec: ConeSpec,
    N: int,
    *,
    precision_cap: Optional[int] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> bool:
    """
    True iff some head-only vector 0 < max|x_i| <= N has
    0 < ||x.α|| < 1/((N+1)^ell - 1), certified
    """
    if N < 1:
        raise ValidationError(f"N must be >= 1, got {N}")
    spec.check_dimension(alpha.n)
    head = alpha.project(range(spec.ell))
    bound = dirichlet_bound(N, spec.ell)
    best = _floor_witness(head, N, precision_cap, node_budget)
    cap = precision_cap if precision_cap is not None else get_precision_cap()
    return best is not None and _certified_below(head, best.x, best.err, bound, cap)


def dirichlet_floor_report(
    alpha: RealVector,
    spec: ConeSpec,
    N: int,
    *,
    precision_cap: Optional[int] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> FloorReport:
    """
    Cone-axis and unrestricted best errors against their pigeonhole bounds

    A best error is reported only when it lies within its bound; it is then
    the minimum over every vector of height <= N.
    """
    if N < 1:
        raise ValidationError(f"N must be >= 1, got {N}")
    spec.check_dimension(alpha.n)
    cap = precision_cap if precision_cap is not None else get_precision_cap()
    head = alpha.project(range(spec.ell))
    axis = _floor_witness(head, N, cap, node_budget)
    full = _floor_witness(alpha, N, cap, node_budget)
    axis_bound = dirichlet_bound(N, spec.ell)
    full_bound = dirichlet_bound(N, alpha.n)
    return FloorReport(
        N=N,
        n=alpha.n,
        ell=spec.ell,
        axis_best=None if axis is None else format_rational(axis.err.upper),
        axis_bound=format_rational(axis_bound),
        axis_ok=axis is not None and _certified_below(head, axis.x, axis.err, axis_bound, cap),
        full_best=None if full is None else format_rational(full.err.upper),
        full_bound=format_rational(full_bound),
        full_ok=full is not None and _certified_below(alpha, full.x, full.err, full_bound, cap),
    )
