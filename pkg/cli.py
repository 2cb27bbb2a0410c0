# cli.py
"""
Command line entry point.

    python cli.py verify s1_r2 --format text
    python cli.py analyze-point s1_r2_shifted --point "1,0"
    python cli.py list-examples
"""
import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from dgmanifold import PointError, sign_table
from exactpoly import PolynomialError, as_rational
from gradedcore import SHIFT_CONVENTION
from liealg import LieAlgebraError
from reduction import (
    HamiltonianSpace,
    LabeledPoint,
    analyze_point,
    check_anchor,
    check_closure,
    check_duality,
    check_equivariance_finite,
    check_exactness,
    check_multiplicativity,
    check_nerve,
    check_points,
    check_reduced_pullback,
    check_total_complexes,
    select_coadjoint_convention,
    validate_hamiltonian,
    verify_theorem,
)
from report import ReportDocument, ReportError, RunMetadata, VerificationReport, emit_report
from settings import settings
from spaceconfig import ConfigError, builtin_names, load_space

logger = logging.getLogger(__name__)

# Quiet noisy third-party loggers
logging.getLogger("sympy").setLevel(logging.WARNING)


@dataclass
class SuiteOptions:
    samples: int = settings.DEFAULT_SAMPLES
    seed: int = settings.DEFAULT_SEED
    tol: float = settings.DEFAULT_TOL
    checks: list[str] = field(default_factory=list)
    points: list[LabeledPoint] | None = None


Runner = Callable[[HamiltonianSpace, SuiteOptions, str], VerificationReport]

CHECK_GROUPS: dict[str, Runner] = {
    "hamiltonian": lambda H, o, conv: validate_hamiltonian(H, conv),
    "exactness": lambda H, o, conv: check_exactness(H, o.seed),
    "anchor": lambda H, o, conv: check_anchor(H, conv),
    "total_complexes": lambda H, o, conv: check_total_complexes(H, conv),
    "duality": lambda H, o, conv: check_duality(H, conv),
    "theorem": lambda H, o, conv: verify_theorem(H, conv),
    "closure": lambda H, o, conv: check_closure(H, o.samples, o.seed, o.tol),
    "multiplicativity": lambda H, o, conv: check_multiplicativity(H, o.samples, o.seed, o.tol),
    "reduced_pullback": lambda H, o, conv: check_reduced_pullback(H),
    "equivariance": lambda H, o, conv: check_equivariance_finite(H, o.samples, o.seed, o.tol, conv),
    "nerve": lambda H, o, conv: check_nerve(H, o.samples, o.seed, o.tol),
    "points": lambda H, o, conv: check_points(H, o.seed, o.points),
}


def run_suite(space: HamiltonianSpace, options: SuiteOptions, config_hash: str = "") -> ReportDocument:
    groups = options.checks or list(CHECK_GROUPS)
    unknown = [g for g in groups if g not in CHECK_GROUPS]
    if unknown:
        raise ConfigError(f"unknown check groups {unknown}; expected some of {list(CHECK_GROUPS)}")

    start = time.perf_counter()
    convention = select_coadjoint_convention(space)
    report = VerificationReport()
    for group in CHECK_GROUPS:
        if group not in groups:
            continue
        logger.info(f"Running {group} checks on {space.name}")
        report.extend(CHECK_GROUPS[group](space, options, convention))

    metadata = RunMetadata(
        example=space.name,
        config_hash=config_hash,
        seed=options.seed,
        samples=options.samples,
        tolerance=options.tol,
        checks=[g for g in CHECK_GROUPS if g in groups],
        conventions={
            "shift": SHIFT_CONVENTION,
            "coadjoint": convention,
            "sign_table": sign_table(),
        },
    )
    return ReportDocument.build(metadata, report, wall_time=time.perf_counter() - start)


def parse_point(text: str) -> tuple:
    try:
        return tuple(as_rational(part.strip()) for part in text.split(","))
    except (PolynomialError, ValueError) as exc:
        raise ConfigError(f"cannot parse point {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=settings.APP_NAME, description="Verify derived symplectic reduction identities.")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("example", help="built-in example name or path to a TOML config")
        p.add_argument("--samples", type=int, default=settings.DEFAULT_SAMPLES)
        p.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
        p.add_argument("--tol", type=float, default=settings.DEFAULT_TOL)
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--output", default=None, help="write the report here instead of stdout")
        p.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)

    verify = sub.add_parser("verify", help="run the check suite")
    common(verify)
    verify.add_argument("--checks", default="", help=f"comma list of {','.join(CHECK_GROUPS)}")
    verify.add_argument("--point", action="append", default=[], help="extra point a/b,c/d,... to analyse")

    point = sub.add_parser("analyze-point", help="classify points of the zero set")
    common(point)
    point.add_argument("--point", action="append", default=[], help="point a/b,c/d,... (repeatable)")

    sub.add_parser("list-examples", help="list the built-in examples")
    return parser


def _options(args: argparse.Namespace, space: HamiltonianSpace, checks: Sequence[str]) -> SuiteOptions:
    extra = [LabeledPoint(f"cli_{k + 1}", parse_point(text)) for k, text in enumerate(args.point)]
    return SuiteOptions(
        samples=args.samples,
        seed=args.seed,
        tol=args.tol,
        checks=list(checks),
        points=list(space.points) + extra if extra else None,
    )


def cmd_list_examples() -> int:
    for name in builtin_names():
        try:
            space, _ = load_space(name)
        except ConfigError as exc:
            print(f"{name:<20} (invalid: {exc})")
            continue
        print(f"{name:<20} n={space.n} d={space.d} group_tag={space.lie.group_tag}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    space, digest = load_space(args.example)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    doc = run_suite(space, _options(args, space, checks), digest)
    emit_report(doc, args.format, args.output)
    return 0 if doc.ok else 1


def cmd_analyze_point(args: argparse.Namespace) -> int:
    space, digest = load_space(args.example)
    if args.point:
        points = [LabeledPoint(f"cli_{k + 1}", parse_point(text)) for k, text in enumerate(args.point)]
    else:
        points = list(space.points)
    if not points:
        raise ConfigError(f"{space.name} has no configured points; pass --point")
    if args.format == "text":
        for p in points:
            try:
                print(f"{p.label}: {analyze_point(space, p.coords).describe()}")
            except PointError as exc:
                print(f"{p.label}: {exc}")
    options = SuiteOptions(args.samples, args.seed, args.tol, ["points"], points)
    doc = run_suite(space, options, digest)
    emit_report(doc, args.format, args.output)
    return 0 if doc.ok else 1


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "list-examples":
            return cmd_list_examples()
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_analyze_point(args)
    except (ConfigError, ReportError, LieAlgebraError) as exc:
        logger.error(f"{exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
