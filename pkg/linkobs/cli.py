"""Command-line front end.

Diagrams travel between subcommands as PD text on the standard streams, so
``linkobs generate ... | linkobs obstruct --target p0`` works. Exit codes:
0 success, 2 input error, 3 obstruction found, 4 internal self-check failure.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from . import __version__
from .config import Settings
from .diagram import (
    CORPUS,
    BandCrossing,
    BandFoot,
    BandSpec,
    LinkDiagram,
    attach_fusion_band,
    corpus,
    generate_hopf,
    generate_nghl,
    generate_twist_family,
    generate_unlink,
    generate_whitehead_doubled_hopf,
    insert_generalized_positive_crossing,
    linking_matrix,
    parse_pd,
    to_pd,
)
from .diagram.surgery import StrandRef
from .errors import ConfigError, ConventionError, InputError, InternalAssertionError, PreconditionError
from .logs import configure_logging, stderr_console
from .milnor import BetaValue, MilnorInvariants, MilnorValue, beta_first_nonvanishing
from .obstruct import ObstructionReport, Target, run_battery
from .polyring import ConwayForm, conway_from_seifert
from .schemas import write_schemas
from .seifert import SeifertMatrix, seifert_matrix
from .signature import HermitianPencil, SignatureFunction, as_theta, fraction_str, signature_function
from .skein import skein_conway_oracle

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_OBSTRUCTED = 3
EXIT_INTERNAL = 4

TARGETS: dict[str, Target] = {"p0": "P0", "p0-mirror": "P0_of_mirror", "cp2": "CP2_single", "split": "split_geq0"}

A0Relation = Literal["a0 = lk", "a0 = -lk", "a0 = lk = 0", "unrelated"]


class ThetaValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    theta: str = Field(description="Rational angle p/q, ω = exp(2πiθ)")
    signature: int
    nullity: int


class InvariantsReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_components: int
    linking_matrix: tuple[tuple[int, ...], ...]
    seifert: SeifertMatrix
    conway: ConwayForm
    conway_polynomial: str = Field(description="∇ written out in z")
    conway_skein_checked: bool = Field(default=False, description="Whether the skein oracle confirmed ∇")
    a0_vs_lk: A0Relation | None = Field(
        default=None, description="Leading Conway coefficient against lk, 2-component links only"
    )
    signature: SignatureFunction
    theta_values: tuple[ThetaValue, ...] = ()
    mu: tuple[MilnorValue, ...] = ()
    beta: BetaValue | None = Field(default=None, description="First nonvanishing βⁿ, if requested and found")
    beta_levels: int | None = Field(default=None, description="Levels scanned for βⁿ, if requested")


class CliConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: str
    input: str | None = None
    format: Literal["json", "text"] = "text"
    settings: Settings = Field(default_factory=Settings)


def _read_diagram(source: str | None) -> LinkDiagram:
    text = sys.stdin.read() if source in (None, "-") else Path(source).read_text()
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            return LinkDiagram.model_validate_json(stripped)
        except ValidationError as e:
            raise InputError(f"invalid diagram JSON: {e}") from e
    return parse_pd(text)


def _emit_diagram(d: LinkDiagram, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(d.model_dump_json() + "\n")
    else:
        sys.stdout.write(to_pd(d) + "\n")


def _parse_index(raw: str) -> tuple[int, ...]:
    parts = raw.split(",") if "," in raw else list(raw)
    try:
        return tuple(int(p) for p in parts)
    except ValueError as e:
        raise PreconditionError(f"Milnor index must list component numbers, got {raw!r}") from e


def _strand_ref(raw: str) -> StrandRef:
    return int(raw) if raw.lstrip("-").isdigit() else raw


def _split_pair(raw: str, what: str) -> tuple[str, str]:
    ref, sep, value = raw.rpartition(":")
    if not sep or not ref:
        raise PreconditionError(f"{what} must look like A:B, got {raw!r}")
    return ref, value


def _integer(raw: str, what: str) -> int:
    try:
        return int(raw)
    except ValueError as e:
        raise PreconditionError(f"{what} must be an integer, got {raw!r}") from e


def _signed(raw: str, what: str) -> int:
    value = _integer(raw, what)
    if value not in (1, -1):
        raise PreconditionError(f"{what} must be +1 or -1, got {raw!r}")
    return value


def _foot(raw: str) -> BandFoot:
    ref, side = _split_pair(raw, "band foot")
    if side not in ("left", "right"):
        raise PreconditionError(f"band side must be left or right, got {side!r}")
    return BandFoot(edge=_strand_ref(ref), side=side)  # type: ignore[arg-type]


def _band_crossing(raw: str) -> BandCrossing:
    edge, how = _split_pair(raw, "band crossing")
    if how not in ("over", "under") or not edge.isdigit():
        raise PreconditionError(f"band crossing must be EDGE:over or EDGE:under, got {raw!r}")
    return BandCrossing(edge=int(edge), over=how == "over")


def _generate(args: argparse.Namespace) -> LinkDiagram:
    kind = args.kind
    if kind == "unlink":
        return generate_unlink(args.components)
    if kind == "hopf":
        return generate_hopf(args.sign)
    if kind == "nghl":
        pairs = [_split_pair(s, "strand") for s in args.strand]
        return generate_nghl([(_signed(e, "orientation"), _integer(c, "color")) for e, c in pairs])
    if kind == "twist-family":
        return generate_twist_family(args.n, args.m)
    if kind == "whitehead-double-hopf":
        return generate_whitehead_doubled_hopf(args.sign)
    if kind == "corpus":
        return corpus(args.name)
    d = _read_diagram(args.input)
    if kind == "gpc":
        pairs = [_split_pair(s, "strand") for s in args.strand]
        strands = [(_strand_ref(ref), _signed(v, "direction")) for ref, v in pairs]
        return insert_generalized_positive_crossing(d, strands)
    try:
        band = BandSpec(
            start=_foot(args.start),
            end=_foot(args.end),
            path=tuple(_band_crossing(p) for p in args.path),
            twists=args.twists,
        )
    except ValidationError as e:
        raise PreconditionError(f"invalid band: {e}") from e
    return attach_fusion_band(d, band)


def _a0_vs_lk(conway: ConwayForm, lk_matrix: tuple[tuple[int, ...], ...]) -> A0Relation | None:
    if conway.m != 2:
        return None
    a0, lk = conway.a(0), lk_matrix[0][1]
    if a0 == lk == 0:
        return "a0 = lk = 0"
    if a0 == lk:
        return "a0 = lk"
    return "a0 = -lk" if a0 == -lk else "unrelated"


def _invariants(args: argparse.Namespace, settings: Settings) -> InvariantsReport:
    d = _read_diagram(args.input)
    s = seifert_matrix(d)
    conway = conway_from_seifert(s)
    pencil = HermitianPencil(s)
    checked = d.n_crossings <= settings.skein_bound
    if checked and skein_conway_oracle(d, settings.skein_bound) != conway:
        raise ConventionError(f"Seifert and skein routes disagree on ∇, Seifert gives {conway}")
    thetas = []
    for raw in args.theta:
        try:
            theta = as_theta(Fraction(raw))
        except (ValueError, ZeroDivisionError) as e:
            raise PreconditionError(f"θ must be a rational p/q, got {raw!r}") from e
        sig, nul = pencil.inertia(theta)
        thetas.append(ThetaValue(theta=fraction_str(theta), signature=sig, nullity=nul))
    lk = linking_matrix(d)
    milnor = MilnorInvariants(d, settings.q_max)
    beta = beta_first_nonvanishing(d, args.beta, settings.q_max, milnor) if args.beta else None
    return InvariantsReport(
        n_components=d.n_components,
        linking_matrix=lk,
        seifert=s,
        conway=conway,
        conway_polynomial=str(conway),
        conway_skein_checked=checked,
        a0_vs_lk=_a0_vs_lk(conway, lk),
        signature=signature_function(s, d.n_components, settings.grid_depth),
        theta_values=tuple(thetas),
        mu=tuple(milnor.mu(_parse_index(raw)) for raw in args.mu),
        beta=beta,
        beta_levels=args.beta or None,
    )


def _print_invariants(report: InvariantsReport, console: Console) -> None:
    table = Table(title="Invariants", show_header=False)
    table.add_row("components", str(report.n_components))
    table.add_row("linking matrix", str([list(r) for r in report.linking_matrix]))
    table.add_row("Seifert genus", str(report.seifert.genus))
    table.add_row("∇(z)", report.conway_polynomial)
    if report.a0_vs_lk:
        table.add_row("a0 vs lk", report.a0_vs_lk)
    sf = report.signature
    table.add_row("σ arcs on (0,1)", str(list(sf.full_arc_values())))
    table.add_row("σ breakpoints in (0,1/2]", ", ".join(f"{bp.theta:.6f}" for bp in sf.breakpoints) or "none")
    table.add_row("σ at breakpoints", str(list(sf.point_values)))
    table.add_row("max nullity", str(sf.max_nullity))
    table.add_row("certification", sf.certification)
    for tv in report.theta_values:
        table.add_row(f"σ({tv.theta})", f"{tv.signature} (nullity {tv.nullity})")
    for mv in report.mu:
        suffix = f" mod {mv.indeterminacy}" if mv.indeterminacy else ""
        table.add_row(f"μ̄({''.join(map(str, mv.index))})", f"{mv.value}{suffix}")
    if report.beta_levels:
        b = report.beta
        value = f"β^{b.n} = {b.value} via μ̄({''.join(map(str, b.pattern))})" if b else "all zero"
        table.add_row(f"βⁿ, n ≤ {report.beta_levels}", value)
    console.print(table)


def _print_report(report: ObstructionReport, console: Console) -> None:
    table = Table(title=f"Obstructions for target {report.target}")
    table.add_column("test")
    table.add_column("checks")
    table.add_column("verdict")
    table.add_column("evidence")
    style = {"OBSTRUCTED": "bold red", "PASS": "green", "INAPPLICABLE": "dim", "UNKNOWN": "yellow"}
    for t in report.tests:
        notes = [f"{k}={v}" for k, v in t.evidence.items()]
        notes += [n for n in (t.caveat, t.diagnostic) if n]
        table.add_row(t.id, t.name, f"[{style[t.verdict]}]{t.verdict}[/]", escape("\n".join(notes)))
    console.print(table)
    console.print(f"aggregate: [bold]{report.aggregate}[/]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linkobs", description="Link diagram invariants and sliceness obstructions")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")
    parser.add_argument("--format", choices=["json", "text"], default="text")
    parser.add_argument("--q-max", type=int, help="Magnus truncation cap (default 8, or LINKOBS_Q_MAX)")
    parser.add_argument("--skein-bound", type=int, help="crossing bound of the skein oracle (default 12)")
    parser.add_argument("--grid-depth", type=int, help="log2 initial cells of the signature grid fallback (default 10)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="validate and canonicalize a PD code")
    p.add_argument("input", nargs="?", default="-")

    p = sub.add_parser("invariants", help="linking numbers, ∇, signatures, Milnor invariants")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--mu", action="append", default=[], metavar="I", help="Milnor index such as 1122 or 1,1,2,2")
    p.add_argument("--beta", type=int, default=0, metavar="N", help="scan βⁿ for n = 1..N")
    p.add_argument("--theta", action="append", default=[], metavar="p/q", help="signature at exp(2πiθ)")

    p = sub.add_parser("obstruct", help="run the obstruction battery")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--target", choices=sorted(TARGETS), default="p0")

    p = sub.add_parser("generate", help="emit a diagram")
    gen = p.add_subparsers(dest="kind", required=True)
    g = gen.add_parser("unlink")
    g.add_argument("--components", type=int, default=1)
    for name in ("hopf", "whitehead-double-hopf"):
        g = gen.add_parser(name)
        g.add_argument("--sign", type=int, choices=[1, -1], default=1)
    g = gen.add_parser("nghl")
    g.add_argument("--strand", action="append", required=True, metavar="ε:color")
    g = gen.add_parser("twist-family")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g = gen.add_parser("corpus")
    g.add_argument("--name", choices=sorted(CORPUS), required=True)
    g = gen.add_parser("gpc")
    g.add_argument("input", nargs="?", default="-")
    g.add_argument("--strand", action="append", required=True, metavar="edge:±1")
    g = gen.add_parser("fuse")
    g.add_argument("input", nargs="?", default="-")
    g.add_argument("--start", required=True, metavar="e:side")
    g.add_argument("--end", required=True, metavar="e:side")
    g.add_argument("--path", action="append", default=[], metavar="e:over|under")
    g.add_argument("--twists", type=int, default=0)

    p = sub.add_parser("schema", help="write JSON schemas of the output models")
    p.add_argument("--out", type=Path, required=True)
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    base = Settings.from_env()
    overrides = {
        k: v
        for k, v in (("q_max", args.q_max), ("skein_bound", args.skein_bound), ("grid_depth", args.grid_depth))
        if v is not None
    }
    try:
        return Settings(**{**base.model_dump(), **overrides})
    except ValidationError as e:
        raise ConfigError(f"invalid option: {e}") from e


def _dispatch(args: argparse.Namespace, config: CliConfig) -> int:
    console = Console()
    settings = config.settings
    if config.command == "parse":
        _emit_diagram(_read_diagram(config.input), config.format)
    elif config.command == "generate":
        _emit_diagram(_generate(args), config.format)
    elif config.command == "invariants":
        report = _invariants(args, settings)
        if config.format == "json":
            sys.stdout.write(report.model_dump_json() + "\n")
        else:
            _print_invariants(report, console)
    elif config.command == "obstruct":
        battery = run_battery(_read_diagram(config.input), TARGETS[args.target], settings)
        if config.format == "json":
            sys.stdout.write(battery.model_dump_json() + "\n")
        else:
            _print_report(battery, console)
        return EXIT_OBSTRUCTED if battery.aggregate == "NOT_MEMBER" else EXIT_OK
    else:
        for path in write_schemas(args.out):
            logger.info("wrote %s", path)
    return EXIT_OK


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.verbose)
    try:
        config = CliConfig(
            command=args.command, input=getattr(args, "input", None), format=args.format, settings=_settings(args)
        )
        logger.debug("configuration: %s", config)
        return _dispatch(args, config)
    except (InputError, OSError) as e:
        stderr_console.print(f"[bold red]error:[/] {escape(str(e))}")
        return EXIT_INPUT
    except InternalAssertionError as e:
        logger.exception("internal check failed")
        stderr_console.print(f"[bold red]internal error:[/] {escape(str(e))}")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run_cli())
