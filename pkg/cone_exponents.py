"""
Command-line entry point for the cone-exponents laboratory

Every subcommand builds a RunConfig, dispatches it through run() and writes a
deterministic JSON artifact (config, report or error) plus an optional CSV.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence, Tuple

import click
from dotenv import load_dotenv
from pydantic import BaseModel, Field
from pydantic import ValidationError as PydanticValidationError

from bounds import BodyPoint, BodySpec, BoundsReport, bounds_report, minkowski_body_search
from construct import (
    AuditRecord,
    ConstructionState,
    LowerBoundReport,
    audit_lower_bound,
    audit_step,
    check_dominant_coefficient,
    construction_params,
    is_prime_step,
    load_state,
    run_construction,
    save_state,
)
from core import ConeSpec, VectorFile, load_vector
from counting import PN_CSV_HEADER, CountReport, count_csv_rows, count_report
from enumeration import (
    DEFAULT_BURN_IN,
    RECORDS_CSV_HEADER,
    ExponentReport,
    FloorReport,
    axis_scan,
    dirichlet_floor_report,
    estimate_mu,
    estimate_nu_tilde,
    estimate_w_hat,
    record_scan,
    records_csv_rows,
)
from metrical import (
    SWEEP_CSV_HEADER,
    ApproxFunction,
    TrialReport,
    sample_experiment,
    sweep_experiment,
)
from utils import (
    SCHEMA_VERSION,
    CapExceeded,
    ConeExponentsError,
    DimensionMismatch,
    DomainError,
    InvariantViolation,
    ValidationError,
    dump_json,
    get_precision_cap,
    get_thread_count,
    parse_height_range,
    parse_targets,
    write_csv,
    write_json,
)

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INVARIANT = 3

USER_ERRORS = (ValidationError, DomainError, DimensionMismatch, CapExceeded, PydanticValidationError)

EstimateKind = Literal["mu", "w", "w_hat", "nu_tilde", "axis", "floor"]


class RunConfig(BaseModel):
    """Full description of one run; echoed verbatim into every artifact"""

    schema_version: str = SCHEMA_VERSION
    subcommand: Literal["estimate", "count", "metrical", "construct", "bounds"]
    alpha: Optional[str] = None
    n: Optional[int] = None
    ell: Optional[int] = None
    N_max: Optional[int] = None
    N_range: Optional[str] = None
    burn_in: int = DEFAULT_BURN_IN
    kind: EstimateKind = "mu"
    constant_C: str = "1"
    exact: bool = False
    w: Optional[str] = None
    log_exp: str = "0"
    trials: int = 100
    seed: int = 0
    sweep: List[int] = Field(default_factory=list)
    targets: List[str] = Field(default_factory=list)
    steps: int = 1
    resume: Optional[str] = None
    state_out: Optional[str] = None
    allow_small_targets: bool = False
    g_bit_budget: Optional[int] = None
    audit: bool = False
    height_cap: int = 20
    eta: Optional[str] = None
    body_N: Optional[int] = None
    json_out: Optional[str] = None
    csv_out: Optional[str] = None
    threads: int = Field(default=1, ge=1)
    precision_cap: int = Field(default=4096, ge=64)


class ErrorInfo(BaseModel):
    type: str
    message: str


class RunArtifact(BaseModel):
    """What every run writes: config, then either a report or an error"""

    schema_version: str = SCHEMA_VERSION
    config: Optional[RunConfig] = None
    exit_code: int = EXIT_OK
    report: Optional[Dict[str, Any]] = None
    error: Optional[ErrorInfo] = None


class StepCheck(BaseModel):
    j: int
    ell: int
    g_bits: int
    c: int
    height_Q_bits: int
    prime: bool
    dominant: bool


class ConstructReport(BaseModel):
    state: ConstructionState
    checks: List[StepCheck] = Field(default_factory=list)
    audits: List[AuditRecord] = Field(default_factory=list)
    lower_bound: Optional[LowerBoundReport] = None


class BoundsCommandReport(BaseModel):
    bounds: BoundsReport
    body: Optional[BodyPoint] = None


CsvTable = Optional[Tuple[Sequence[str], List[List[str]]]]

CONSTRUCT_CSV_HEADER = ["j", "ell", "g_bits", "c", "height_Q_bits", "ratio", "target"]
BOUNDS_CSV_HEADER = ["name", "ell", "value", "exact", "estimate", "gap"]

SCHEMA_MODELS: Dict[str, type] = {
    "vector_file": VectorFile,
    "run_config": RunConfig,
    "run_artifact": RunArtifact,
    "exponent_report": ExponentReport,
    "floor_report": FloorReport,
    "count_report": CountReport,
    "trial_report": TrialReport,
    "construction_state": ConstructionState,
    "construct_report": ConstructReport,
    "bounds_report": BoundsCommandReport,
}


def _require(config: RunConfig, *names: str) -> None:
    missing = [name for name in names if getattr(config, name) in (None, [])]
    if missing:
        raise ValidationError(f"{config.subcommand} needs: {', '.join(missing)}")


def _load_alpha(config: RunConfig):
    _require(config, "alpha")
    alpha = load_vector(config.alpha)
    if config.n is not None and config.n != alpha.n:
        raise DimensionMismatch(f"--n {config.n} but the vector file has n={alpha.n}")
    return alpha


def _estimate(config: RunConfig) -> Tuple[BaseModel, CsvTable]:
    _require(config, "N_max")
    alpha = _load_alpha(config)
    ell = config.ell if config.ell is not None else alpha.n
    options = dict(precision_cap=config.precision_cap)
    if config.kind == "floor":
        report = dirichlet_floor_report(alpha, ConeSpec(ell, config.constant_C), config.N_max, **options)
        return report, None
    if config.kind == "mu":
        spec = ConeSpec(ell, config.constant_C)
        spec.check_dimension(alpha.n)
        scan = record_scan(alpha, spec, config.N_max, workers=config.threads, **options)
        report = estimate_mu(scan, config.burn_in)
    elif config.kind == "w":
        scan = record_scan(alpha, ConeSpec(alpha.n), config.N_max, workers=config.threads, **options)
        report = estimate_mu(scan, config.burn_in, kind="w")
    elif config.kind == "axis":
        scan = axis_scan(alpha, config.N_max, ell - 1, **options)
        report = estimate_mu(scan, config.burn_in)
    elif config.kind == "w_hat":
        report = estimate_w_hat(alpha, config.N_max, workers=config.threads, **options)
    else:
        report = estimate_nu_tilde(
            alpha, ell, config.N_max, config.burn_in, workers=config.threads, **options
        )
    return report, (RECORDS_CSV_HEADER, records_csv_rows(report.records))


def _count(config: RunConfig) -> Tuple[BaseModel, CsvTable]:
    _require(config, "n", "ell", "N_range")
    lo, hi = parse_height_range(config.N_range)
    report = count_report(config.n, config.ell, lo, hi, exact=config.exact)
    return report, (PN_CSV_HEADER, count_csv_rows(report))


def _metrical(config: RunConfig) -> Tuple[BaseModel, CsvTable]:
    _require(config, "n", "ell", "w", "N_max")
    psi = ApproxFunction(config.w, config.log_exp)
    options = dict(
        constant_C=config.constant_C,
        workers=config.threads,
        precision_cap=config.precision_cap,
    )
    args = (config.n, config.ell, psi)
    report = sample_experiment(*args, config.N_max, config.trials, config.seed, **options)
    if not config.sweep:
        return report, None
    values = sorted(set(config.sweep) | {config.N_max})
    rows = sweep_experiment(*args, values, config.trials, config.seed, **options)
    table = [[str(r.N_max), repr(r.hit_fraction), repr(r.tail_hit_fraction)] for r in rows]
    return report, (SWEEP_CSV_HEADER, table)


def _construct(config: RunConfig) -> Tuple[BaseModel, CsvTable]:
    if config.resume:
        state = load_state(config.resume)
        params = state.params
        if config.n is not None and config.n != params.n:
            raise ValidationError(f"--n {config.n} does not match the saved n={params.n}")
    else:
        _require(config, "n", "targets")
        options: Dict[str, Any] = {"allow_small_targets": config.allow_small_targets}
        if config.g_bit_budget is not None:
            options["g_bit_budget"] = config.g_bit_budget
        params = construction_params(config.n, config.targets, **options)
        state = None
    state = run_construction(params, config.steps, state)
    if config.state_out:
        save_state(state, config.state_out)

    report = ConstructReport(state=state)
    for step in state.steps:
        report.checks.append(
            StepCheck(
                j=step.j,
                ell=step.ell,
                g_bits=step.g.bit_length(),
                c=step.c,
                height_Q_bits=step.height_Q.bit_length(),
                prime=is_prime_step(step),
                dominant=check_dominant_coefficient(step),
            )
        )
    if config.audit:
        report.audits = [audit_step(state, j) for j in range(1, state.j)]
        report.lower_bound = audit_lower_bound(state, height_cap=config.height_cap)

    audits = {a.j: a for a in report.audits}
    rows = []
    for check in report.checks:
        audit = audits.get(check.j)
        rows.append(
            [
                str(check.j),
                str(check.ell),
                str(check.g_bits),
                str(check.c),
                str(check.height_Q_bits),
                "" if audit is None else f"{audit.ratio:.12g}",
                "" if audit is None else f"{audit.target:.12g}",
            ]
        )
    return report, (CONSTRUCT_CSV_HEADER, rows)


def _bounds(config: RunConfig) -> Tuple[BaseModel, CsvTable]:
    _require(config, "ell", "N_max")
    alpha = _load_alpha(config)
    report = BoundsCommandReport(
        bounds=bounds_report(
            alpha,
            config.ell,
            config.N_max,
            config.burn_in,
            workers=config.threads,
            precision_cap=config.precision_cap,
        )
    )
    if config.eta is not None:
        spec = BodySpec(alpha, config.body_N or config.N_max, config.eta, config.ell)
        report.body = minkowski_body_search(spec, precision_cap=config.precision_cap)
    rows = [
        [
            row.name,
            "" if row.ell is None else str(row.ell),
            "" if row.value is None else repr(row.value),
            row.exact or "",
            "" if row.estimate is None else repr(row.estimate),
            "" if row.gap is None else repr(row.gap),
        ]
        for row in report.bounds.rows
    ]
    return report, (BOUNDS_CSV_HEADER, rows)


HANDLERS: Dict[str, Callable[[RunConfig], Tuple[BaseModel, CsvTable]]] = {
    "estimate": _estimate,
    "count": _count,
    "metrical": _metrical,
    "construct": _construct,
    "bounds": _bounds,
}


def _emit(artifact: RunArtifact, json_out: Optional[str]) -> None:
    payload = artifact.model_dump(mode="json")
    if json_out:
        write_json(json_out, payload)
    else:
        click.echo(dump_json(payload), nl=False)


def run(config: RunConfig) -> int:
    """
    Dispatch a run and write its artifacts

    Args:
        config: Validated run configuration

    Returns:
        int: 0 on success, 2 on invalid input, 3 on an internal invariant violation
    """
    artifact = RunArtifact(config=config)
    table: CsvTable = None
    try:
        report, table = HANDLERS[config.subcommand](config)
        artifact.report = report.model_dump(mode="json")
    except InvariantViolation as e:
        logger.error("Invariant violated: %s", e)
        artifact.exit_code = EXIT_INVARIANT
        artifact.error = ErrorInfo(type=type(e).__name__, message=str(e))
    except (ConeExponentsError, PydanticValidationError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        artifact.exit_code = EXIT_INVALID
        artifact.error = ErrorInfo(type=type(e).__name__, message=str(e))
    _emit(artifact, config.json_out)
    if table is not None and config.csv_out:
        write_csv(config.csv_out, *table)
    return artifact.exit_code


def _dispatch(ctx: click.Context, subcommand: str, **fields) -> None:
    settings = ctx.obj or {}
    fields = {k: v for k, v in fields.items() if v is not None}
    try:
        config = RunConfig(
            subcommand=subcommand,
            threads=settings.get("threads", 1),
            precision_cap=settings.get("precision_cap", 4096),
            **fields,
        )
    except USER_ERRORS as e:
        artifact = RunArtifact(
            exit_code=EXIT_INVALID, error=ErrorInfo(type=type(e).__name__, message=str(e))
        )
        _emit(artifact, fields.get("json_out"))
        ctx.exit(EXIT_INVALID)
    ctx.exit(run(config))


def _output_options(func):
    func = click.option("--csv", "csv_out", type=click.Path(dir_okay=False), help="CSV table output")(func)
    func = click.option("--json", "json_out", type=click.Path(dir_okay=False), help="JSON report (default: stdout)")(func)
    return func


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Debug logging")
@click.option("-q", "--quiet", is_flag=True, help="Only log errors")
@click.option("--threads", type=int, default=None, help="Worker processes (CONE_EXPONENTS_THREADS)")
@click.option("--precision-cap", type=int, default=None, help="Escalation cap in bits (CONE_EXPONENTS_PRECISION_CAP)")
@click.pass_context
def cli(ctx: click.Context, verbose: bool, quiet: bool, threads: Optional[int], precision_cap: Optional[int]):
    """Records, counting, metrical trials, constructions and bounds for cone exponents"""
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        ctx.obj = {
            "threads": threads if threads is not None else get_thread_count(),
            "precision_cap": precision_cap if precision_cap is not None else get_precision_cap(),
        }
    except ValidationError as e:
        raise click.UsageError(str(e))


@cli.command()
@click.option("--alpha", type=click.Path(exists=True, dir_okay=False), required=True, help="Vector input file")
@click.option("--n", type=int, help="Expected dimension")
@click.option("--ell", type=int, help="Cone size (default n)")
@click.option("--nmax", "N_max", type=int, required=True, help="Truncation height")
@click.option("--burn-in", type=int, default=DEFAULT_BURN_IN, show_default=True)
@click.option("--kind", type=click.Choice(["mu", "w", "w_hat", "nu_tilde", "axis", "floor"]), default="mu", show_default=True)
@click.option("--C", "constant_C", default="1", show_default=True, help="Cone constant")
@_output_options
@click.pass_context
def estimate(ctx, **fields):
    """Record scan and truncated exponent estimate"""
    _dispatch(ctx, "estimate", **fields)


@cli.command()
@click.option("--n", type=int, required=True)
@click.option("--ell", type=int, required=True)
@click.option("--N", "N_range", required=True, help="Height range A..B or a single N")
@click.option("--exact", is_flag=True, help="Cross-check against direct enumeration")
@_output_options
@click.pass_context
def count(ctx, **fields):
    """Exact #P_N counts, Möbius sums and totient sums"""
    _dispatch(ctx, "count", **fields)


@cli.command()
@click.option("--n", type=int, required=True)
@click.option("--ell", type=int, required=True)
@click.option("--w", required=True, help="ψ(h) = h^-w (log h)^k")
@click.option("--log-exp", default="0", show_default=True, help="Log exponent k")
@click.option("--nmax", "N_max", type=int, required=True)
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--C", "constant_C", default="1", show_default=True)
@click.option("--sweep", type=int, multiple=True, help="Extra N_max values for the CSV sweep")
@_output_options
@click.pass_context
def metrical(ctx, sweep, **fields):
    """Monte Carlo hit fractions for the zero-one law"""
    _dispatch(ctx, "metrical", sweep=list(sweep), **fields)


@cli.command()
@click.option("--n", type=int)
@click.option("--targets", help="Comma-separated μ_(n,1),...,μ_(n,n)")
@click.option("--steps", type=int, default=1, show_default=True)
@click.option("--out", "state_out", type=click.Path(dir_okay=False), help="Write the state file")
@click.option("--resume", type=click.Path(exists=True, dir_okay=False), help="Continue a saved state")
@click.option("--allow-small-targets", is_flag=True, help="Accept targets below the large-target threshold")
@click.option("--g-bit-budget", type=int, help="Largest bit length for g")
@click.option("--audit", is_flag=True, help="Audit every step and scan small polynomials")
@click.option("--height-cap", type=int, default=20, show_default=True)
@_output_options
@click.pass_context
def construct(ctx, targets, **fields):
    """Build ξ with a prescribed exponent ladder"""
    try:
        parsed = [str(t) for t in parse_targets(targets)] if targets else None
    except ValidationError as e:
        _emit(
            RunArtifact(exit_code=EXIT_INVALID, error=ErrorInfo(type=type(e).__name__, message=str(e))),
            fields.get("json_out"),
        )
        ctx.exit(EXIT_INVALID)
    _dispatch(ctx, "construct", targets=parsed, **fields)


@cli.command()
@click.option("--alpha", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--ell", type=int, required=True)
@click.option("--nmax", "N_max", type=int, required=True)
@click.option("--burn-in", type=int, default=DEFAULT_BURN_IN, show_default=True)
@click.option("--eta", help="Also search the Minkowski body with this η")
@click.option("--body-N", "body_N", type=int, help="Body parameter N (default nmax)")
@_output_options
@click.pass_context
def bounds(ctx, **fields):
    """Closed-form bounds next to truncated estimates"""
    _dispatch(ctx, "bounds", **fields)


@cli.command()
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default="schemas", show_default=True)
def schemas(out_dir: str):
    """Write the JSON schema of every input and report model"""
    target = Path(out_dir)
    for name, model in SCHEMA_MODELS.items():
        path = write_json(target / f"{name}.schema.json", model.model_json_schema())
        click.echo(str(path))


if __name__ == "__main__":
    cli()
