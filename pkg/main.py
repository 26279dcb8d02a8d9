import json
import logging
from pathlib import Path
from typing import Callable, Literal, Optional

import typer
from pydantic import BaseModel, Field
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from helpers import settings
from helpers.errors import InvalidSpec, TateError, UsageError
from helpers.serialization import (
    CheckReport,
    DegreeData,
    MEntry,
    ResolutionReport,
    RingTable,
    to_json,
)
from helpers.specs import parse_window
from modules.gamma import GroupContext, gamma_verdict, load_context
from modules.massey import GradedMatrix, matric_massey, triple_massey
from modules.module_map import format_map
from modules.named_ring import multiplication_table
from modules.resolution import verify_exact, verify_minimal
from modules.secondary import Q8_CORE_KEYS, full_m_table, hochschild_cocycle_check
from modules.verification import Q8_KEYS, Q8_M_TABLE, run_suite

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

app = typer.Typer(help="Tate cohomology rings and the canonical class γ of finite groups.", no_args_is_help=True)
console = Console()

DEFAULT_WINDOW = f"-{settings.WINDOW}..{settings.WINDOW}"


class RunConfig(BaseModel):
    group: str = "Q8"
    field: str = "2"
    window: tuple[int, int] = (-settings.WINDOW, settings.WINDOW)
    output: Literal["text", "json"] = "text"
    suite: str = "paper"
    seed: int = Field(default_factory=lambda: settings.SEED)

    @classmethod
    def build(cls, window: Optional[str] = None, as_json: bool = False, **kwargs) -> "RunConfig":
        parsed = parse_window(window) if window else (-settings.WINDOW, settings.WINDOW)
        return cls(window=parsed, output="json" if as_json else "text", **kwargs)

    def context(self) -> GroupContext:
        return load_context(self.group, self.field)


def run(action: Callable[[], bool]) -> None:
    """Run a command body and map its outcome to the exit code."""
    try:
        passed = action()
    except UsageError as e:
        typer.echo(f"error: {type(e).__name__}: {str(e)}", err=True)
        raise typer.Exit(code=2)
    except TateError as e:
        logger.error(f"{type(e).__name__}: {str(e)}")
        typer.echo(f"error: {type(e).__name__}: {str(e)}", err=True)
        raise typer.Exit(code=1)
    if not passed:
        raise typer.Exit(code=1)


def emit(cfg: RunConfig, report: BaseModel, render: Callable[[], None]) -> None:
    if cfg.output == "json":
        typer.echo(to_json(report))
    else:
        render()


def listing_order(ctx: GroupContext, entries: list[MEntry]) -> list[MEntry]:
    """Q8 entries in the listing order of Q8_M_TABLE, anything unlisted after it."""
    if ctx.family != "q8":
        return entries
    ring = ctx.ring
    order = {tuple(ring.key_name(Q8_KEYS[n]) for n in t): i for i, t in enumerate(Q8_M_TABLE)}
    return sorted(entries, key=lambda e: order.get(tuple(e.triple), len(order)))


def three_columns(lines: list[str], columns: int = 3) -> list[str]:
    """Lay lines out column by column, ``columns`` wide, separated by ``|``."""
    height = -(-len(lines) // columns)
    chunks = [c for c in (lines[i * height : (i + 1) * height] for i in range(columns)) if c]
    widths = [max(len(line) for line in c) for c in chunks]
    rows = []
    for r in range(height):
        cells = [c[r].ljust(w) for c, w in zip(chunks, widths) if r < len(c)]
        rows.append(" | ".join(cells).rstrip())
    return rows


def render_checks(checks: list[CheckReport]) -> None:
    for c in checks:
        status = "[green]pass[/green]" if c.passed else f"[red]fail[/red] {c.failures[:10]}"
        console.print(f"{c.name}: {status} {c.detail}")


def split_top_level(text: str) -> list[str]:
    """Split at commas outside parentheses, so phi(0,1) stays whole."""
    parts, depth, current = [], 0, ""
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "," and depth == 0:
            parts.append(current)
            current = ""
        else:
            current += ch
    parts.append(current)
    return [p.strip() for p in parts]


@app.command()
def resolve(
    group: str = typer.Option(..., "--group", "-g", help="Q8 or a product of cyclic p-groups, e.g. C2xC4xC4"),
    field: str = typer.Option("2", "--field", "-f", help="p, q, p^n or GF(q)"),
    window: str = typer.Option(DEFAULT_WINDOW, "--window", "-w", help="Degrees lo..hi"),
    check_exact: bool = typer.Option(False, "--check-exact", help="Verify ∂∂ = 0 and exactness"),
    check_minimal: bool = typer.Option(False, "--check-minimal", help="Verify im ∂ ⊆ I·P"),
    dump_generators: bool = typer.Option(False, "--dump-generators", help="Include the generator catalog"),
    as_json: bool = typer.Option(False, "--json", help="Emit JSON"),
):
    """Print ranks, labels and differentials of the complete resolution."""

    def body() -> bool:
        cfg = RunConfig.build(window, as_json, group=group, field=field)
        ctx = cfg.context()
        res = ctx.res
        lo, hi = cfg.window
        degrees = [
            DegreeData(
                degree=n,
                rank=res.rank(n),
                labels=[res.format_label(l) for l in res.labels(n)],
                differential=format_map(ctx.algebra, res.differential(n)),
            )
            for n in range(lo, hi + 1)
        ]
        checks = []
        if check_exact:
            checks.append(verify_exact(res, cfg.window))
        if check_minimal:
            checks.append(verify_minimal(res, cfg.window))
        generators = ctx.ring.catalog.dump(cfg.window) if dump_generators else {}
        report = ResolutionReport(
            group=ctx.group.text,
            field=str(ctx.field_spec),
            window=cfg.window,
            degrees=degrees,
            checks=checks,
            generators=generators,
        )

        def render() -> None:
            table = Table(title=f"Complete resolution of {ctx.group.text} over F{ctx.field_spec.order}")
            table.add_column("n", justify="right")
            table.add_column("rank", justify="right")
            table.add_column("labels")
            for d in degrees:
                table.add_row(str(d.degree), str(d.rank), " ".join(d.labels))
            console.print(table)
            render_checks(checks)
            for name in generators:
                console.print(f"generator {name}")

        emit(cfg, report, render)
        return all(c.passed for c in checks)

    run(body)


@app.command()
def ring(
    group: str = typer.Option(..., "--group", "-g"),
    field: str = typer.Option("2", "--field", "-f"),
    max_degree: int = typer.Option(2, "--max-degree", "-n", help="Named basis in degrees -n..n"),
    as_json: bool = typer.Option(False, "--json"),
):
    """Named basis and multiplication table of the Tate cohomology ring."""

    def body() -> bool:
        cfg = RunConfig.build(None, as_json, group=group, field=field)
        ctx = cfg.context()
        degrees = range(-max_degree, max_degree + 1)
        named = ctx.ring
        report = RingTable(
            group=ctx.group.text,
            field=str(ctx.field_spec),
            max_degree=max_degree,
            basis=named.named_basis(degrees),
            products=multiplication_table(named, degrees),
        )

        def render() -> None:
            for n, names in report.basis.items():
                console.print(f"Ext^{n}: {', '.join(names) or '0'}")
            table = Table(title="Nonzero products")
            for column in ("a", "b", "ab"):
                table.add_column(column)
            for row in report.products:
                table.add_row(*row)
            console.print(table)

        emit(cfg, report, render)
        return True

    run(body)


@app.command("m-table")
def m_table(
    group: str = typer.Option(..., "--group", "-g"),
    field: str = typer.Option("2", "--field", "-f"),
    window: str = typer.Option(DEFAULT_WINDOW, "--window", "-w"),
    check_cocycle: bool = typer.Option(False, "--check-cocycle", help="Verify the Hochschild cocycle condition"),
    as_json: bool = typer.Option(False, "--json"),
):
    """The secondary multiplication m on named triples (Q8: the fundamental domain)."""

    def body() -> bool:
        cfg = RunConfig.build(window, as_json, group=group, field=field)
        ctx = cfg.context()
        table = full_m_table(ctx.f2(cfg.window), window=cfg.window)
        checks = []
        if check_cocycle:
            named = ctx.ring
            keys = Q8_CORE_KEYS if ctx.family == "q8" else [k for n in (0, 1) for k in named.basis(n)]
            checks.append(hochschild_cocycle_check(table, keys))
        report = table.report(ctx.group.text, str(ctx.field_spec), checks)
        report = report.model_copy(update={"entries": listing_order(ctx, report.entries)})

        def render() -> None:
            console.print(f"m on {ctx.group.text} over F{ctx.field_spec.order} ({report.zero_count} zero triples)")
            lines = [f"m({', '.join(e.triple)}) = {e.value}" for e in report.entries]
            for row in three_columns(lines):
                console.print(row, markup=False, highlight=False, soft_wrap=True)
            render_checks(checks)

        emit(cfg, report, render)
        return all(c.passed for c in checks)

    run(body)


@app.command()
def gamma(
    group: str = typer.Option(..., "--group", "-g"),
    field: str = typer.Option("2", "--field", "-f"),
    window: str = typer.Option(DEFAULT_WINDOW, "--window", "-w"),
    as_json: bool = typer.Option(False, "--json"),
):
    """Decide whether the canonical class γ vanishes, with a witness."""

    def body() -> bool:
        cfg = RunConfig.build(window, as_json, group=group, field=field)
        verdict = gamma_verdict(cfg.context(), cfg.window)

        def render() -> None:
            color = "red" if verdict.verdict == "nontrivial" else "green"
            console.print(
                Panel(
                    f"{verdict.witness.summary}\nseed {verdict.seed}",
                    title=f"γ of {verdict.group} over F{cfg.context().field_spec.order}: [{color}]{verdict.verdict}[/{color}]",
                )
            )

        emit(cfg, verdict, render)
        return True

    run(body)


def load_matrices(ctx: GroupContext, path: Path) -> tuple[GradedMatrix, GradedMatrix, GradedMatrix]:
    """
    Read W, X, Y from a JSON file of the form
    {"W": {"rows": [...], "cols": [...], "entries": [["x", "y"], ...]}, "X": ..., "Y": ...}.
    """
    try:
        data = json.loads(path.read_text())
        return tuple(
            GradedMatrix.from_strings(ctx.ring, data[k]["entries"], data[k]["rows"], data[k]["cols"])
            for k in ("W", "X", "Y")
        )
    except (OSError, KeyError, TypeError, json.JSONDecodeError) as e:
        raise InvalidSpec(f"Cannot read matrices from {path}: {str(e)}") from e


@app.command()
def massey(
    group: str = typer.Option(..., "--group", "-g"),
    field: str = typer.Option("2", "--field", "-f"),
    triple: Optional[str] = typer.Option(None, "--triple", "-t", help="a,b,c in the named grammar"),
    matric: Optional[Path] = typer.Option(None, "--matric", help="JSON file with W, X, Y"),
    as_json: bool = typer.Option(False, "--json"),
):
    """Triple or matric Massey product with its indeterminacy."""

    def body() -> bool:
        cfg = RunConfig.build(None, as_json, group=group, field=field)
        ctx = cfg.context()
        named = ctx.ring
        if matric is not None:
            W, X, Y = load_matrices(ctx, matric)
            result = matric_massey(named, W, X, Y)
        elif triple:
            texts = split_top_level(triple)
            if len(texts) != 3:
                raise InvalidSpec(f"Expected three elements, got {triple!r}")
            a, b, c = (named.parse(t) for t in texts)
            f2 = ctx.f2() if ctx.family != "abelian" else None
            result = triple_massey(named, a, b, c, f2)
        else:
            raise InvalidSpec("Give --triple a,b,c or --matric file.json")
        report = result.report(named)

        def render() -> None:
            console.print(f"⟨{', '.join(report.inputs)}⟩ in degree {report.degree}")
            console.print(f"representative: {report.representative}")
            console.print(f"indeterminacy dimension: {report.indeterminacy_dimension}")
            console.print(f"contains 0: {report.contains_zero}")

        emit(cfg, report, render)
        return True

    run(body)


@app.command()
def verify(
    suite: str = typer.Option("paper", "--suite", "-s", help="paper or quick"),
    seed: int = typer.Option(settings.SEED, "--seed", help="Replay seed (default TATE_SEED)"),
    as_json: bool = typer.Option(False, "--json"),
):
    """Run the reproduction suite."""

    def body() -> bool:
        cfg = RunConfig.build(None, as_json, suite=suite, seed=seed)
        report = run_suite(cfg.suite, cfg.seed, progress=cfg.output == "text")

        def render() -> None:
            table = Table(title=f"verify --suite {report.suite} (seed {report.seed})")
            table.add_column("check")
            table.add_column("result")
            table.add_column("detail")
            for c in report.checks:
                result = "[green]pass[/green]" if c.passed else "[red]fail[/red]"
                table.add_row(c.name, result, c.detail if c.passed else "; ".join(map(str, c.failures[:5])))
            console.print(table)

        emit(cfg, report, render)
        return report.passed

    run(body)


if __name__ == "__main__":
    app()
