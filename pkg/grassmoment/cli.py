"""
Command-line front end

Every command prints one JSON document on stdout; logs go to stderr.
Exit codes: 0 all checks pass, 1 certificate failure, 2 usage error.
"""
import argparse
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from grassmoment import __version__
from grassmoment.core.config import settings
from grassmoment.core.exceptions import (
    DomainError,
    GrassmomentError,
    UnsupportedError,
)
from grassmoment.core.logging import setup_logging
from grassmoment.models.geometry import FiberPoint, GrassmannPoint, TorusElement, complex_vector_json
from grassmoment.services.exactgeom import parse_rational_vector
from grassmoment.services.fibers4.bundle import (
    TRANSITION_01,
    TRANSITION_10,
    bundle_transition,
    cocycle_residual,
)
from grassmoment.services.fibers4.chart import (
    FD_AGREEMENT,
    chart_split,
    complete_intersection_f,
    jacobian,
    jacobian_deviation,
    jacobian_rank,
)
from grassmoment.services.fibers4.mq5 import mq5_fiber_circles, sample_mq5
from grassmoment.services.fibers4.orbit import ORBIT_NAMES, fiber_orbit
from grassmoment.services.fibers4.triangle import (
    CURVE_POINTS,
    curve_Pprime_residual,
    modulus_relation_residual,
    p_prime_feasible,
    solve_triangle_P,
    vertex_images,
)
from grassmoment.services.moment import A_map_exact, mu, mu_hat, mu_tilde
from grassmoment.services.regularity import (
    MAX_ORACLE_N,
    MAX_TILDE_N,
    brute_force_regular_mu_tilde,
    chamber_of_point,
    describe_arrangement,
    enumerate_chambers,
    regularity_sweep,
    s4_chamber_orbits,
)
from grassmoment.services.verification import FIBER_KINDS, AcceptanceSuite, certify_fiber

logger = logging.getLogger(__name__)

TOLERANCE_NAMES = ("identity", "constructive", "pipeline", "rank", "rank_certify", "zero")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(GrassmomentError):
    """命令行参数错误"""


class RunConfig(BaseModel):
    """一次命令行运行的配置"""

    command: str
    n: int = 4
    seed: int = Field(default_factory=lambda: settings.seed, ge=0, lt=2**64)
    samples: int = Field(default_factory=lambda: settings.samples, ge=0)
    orbit: str = "first"
    tolerances: Dict[str, float] = Field(default_factory=dict)
    json_out: Optional[str] = None


def parse_tolerances(values: Sequence[str]) -> Dict[str, float]:
    """NAME=VALUE pairs; a bare VALUE sets identity, constructive and pipeline at once."""
    overrides: Dict[str, float] = {}
    for item in values:
        name, sep, raw = item.partition("=")
        if not sep:
            name, raw = "", item
        try:
            value = float(raw)
        except ValueError:
            raise UsageError(f"tolerance {item!r} is not a number") from None
        if value <= 0:
            raise UsageError(f"tolerance {item!r} must be positive")
        if not name:
            for key in ("identity", "constructive", "pipeline"):
                overrides[key] = value
        elif name in TOLERANCE_NAMES:
            overrides[name] = value
        else:
            raise UsageError(f"unknown tolerance {name!r}; use one of {', '.join(TOLERANCE_NAMES)}")
    return overrides


@contextmanager
def tolerance_overrides(overrides: Dict[str, float]) -> Iterator[None]:
    saved = {name: getattr(settings, f"tol_{name}") for name in overrides}
    try:
        for name, value in overrides.items():
            setattr(settings, f"tol_{name}", value)
        yield
    finally:
        for name, value in saved.items():
            setattr(settings, f"tol_{name}", value)


def parse_complex_vector(text: str) -> np.ndarray:
    """"re,im;re,im;..." → complex vector"""
    values = []
    for part in text.split(";"):
        pieces = [p.strip() for p in part.split(",")]
        if len(pieces) not in (1, 2):
            raise UsageError(f"cannot parse complex entry {part!r}")
        try:
            re = float(pieces[0])
            im = float(pieces[1]) if len(pieces) == 2 else 0.0
        except ValueError:
            raise UsageError(f"cannot parse complex entry {part!r}") from None
        values.append(complex(re, im))
    return np.array(values, dtype=complex)


# 各子命令

def cmd_chambers(config: RunConfig, args: argparse.Namespace) -> Tuple[Dict[str, Any], bool]:
    if args.classify:
        point = parse_rational_vector(args.classify)
        return chamber_of_point(point, config.n).to_json(), True
    chambers = enumerate_chambers(config.n)
    orbits = s4_chamber_orbits()
    return {
        "n": config.n,
        "arrangement": describe_arrangement(config.n),
        "chambers": [c.to_json() for c in chambers],
        "orbits": [o.to_json() for o in orbits],
    }, len(chambers) == 8


def cmd_regular(config: RunConfig, args: argparse.Namespace) -> Tuple[Dict[str, Any], bool]:
    if args.classify:
        point = parse_rational_vector(args.classify)
        report = chamber_of_point(point, config.n).to_json()
        if config.n <= MAX_ORACLE_N:
            report["brute_force_regular_mu_tilde"] = brute_force_regular_mu_tilde(point, config.n)
        return report, True
    if config.n > MAX_TILDE_N:
        raise UnsupportedError(f"grid sweeps are limited to n ≤ {MAX_TILDE_N}")
    denominator = args.denominator or (
        settings.regularity_grid_denominator_n4 if config.n == 4 else settings.regularity_grid_denominator_n5
    )
    sweep = regularity_sweep(config.n, denominator)
    return sweep.to_json(), sweep.implication_violations == 0 and (config.n != 4 or sweep.disagreements == 0)


def cmd_moment(config: RunConfig, args: argparse.Namespace) -> Tuple[Dict[str, Any], bool]:
    n = config.n
    if args.map == "A":
        if not args.x:
            raise UsageError("--map A needs --x")
        x = parse_rational_vector(args.x)
        return {"map": "A", "n": n, "input": x.to_json(), "output": A_map_exact(x, n).to_json()}, True
    if not args.z:
        raise UsageError(f"--map {args.map} needs --z")
    if args.map == "mu":
        rows = [parse_complex_vector(row) for row in args.z.split("|")]
        if len(rows) != 2:
            raise UsageError("--map mu takes two rows separated by '|'")
        echoed: Any = [complex_vector_json(row) for row in rows]
        value = mu(GrassmannPoint(np.array(rows)), n)
    else:
        z = parse_complex_vector(args.z)
        echoed = complex_vector_json(z)
        value = mu_tilde(z, n) if args.map == "mu_tilde" else mu_hat(z)
    return {"map": args.map, "n": n, "input": echoed, "output": [float(v) for v in value]}, True


def cmd_fiber(config: RunConfig, args: argparse.Namespace) -> Tuple[Dict[str, Any], bool]:
    summary = certify_fiber(args.kind, config.samples, config.seed, config.orbit)
    return summary.model_dump(mode="json"), summary.passed


def _jacobian_record(name: str, point: FiberPoint) -> Dict[str, Any]:
    u, v = chart_split(point)
    rank = jacobian_rank(u, v)
    return {
        "name": name,
        "u": [float(a) for a in u],
        "v": [float(a) for a in v],
        "f_values": [float(f) for f in complete_intersection_f(u, v)],
        "jacobian": [[float(a) for a in row] for row in jacobian(u, v)],
        "jacobian_rank": rank,
        "fd_deviation": jacobian_deviation(u, v),
    }


def cmd_jacobian(config: RunConfig, args: argparse.Namespace) -> Tuple[Dict[str, Any], bool]:
    orbit = fiber_orbit(config.orbit)
    records = [_jacobian_record(c.name, c.base_point(orbit)) for c in mq5_fiber_circles()]
    rng = np.random.default_rng(config.seed)
    for index in range(config.samples):
        records.append(_jacobian_record(f"sample-{index}", sample_mq5(rng, index, orbit)))
    passed = all(
        r["jacobian_rank"] == 3 and r["fd_deviation"] <= FD_AGREEMENT for r in records
    )
    return {"orbit": orbit.name, "points": records}, passed


def cmd_transition(config: RunConfig, args: argparse.Namespace) -> Tuple[Dict[str, Any], bool]:
    rng = np.random.default_rng(config.seed)
    residual = max(
        (cocycle_residual(TorusElement.random(3, rng)) for _ in range(config.samples)), default=0.0
    )
    example = bundle_transition(TorusElement(np.array([1j, 1, 1])), "0->1")
    determinant = TRANSITION_01.determinant()
    return {
        "matrix": [list(r) for r in TRANSITION_01.rows],
        "inverse": [list(r) for r in TRANSITION_10.rows],
        "determinant": determinant,
        "example": {"t": complex_vector_json([1j, 1, 1]), "image": complex_vector_json(example.phases)},
        "cocycle_residual": residual,
    }, abs(determinant) == 1 and residual <= settings.tol_identity


def cmd_triangle(config: RunConfig, args: argparse.Namespace) -> Tuple[Dict[str, Any], bool]:
    description = solve_triangle_P()
    report = description.to_json()
    images = vertex_images()
    report["vertex_images"] = [image.to_json() for image in images]
    return report, all(image == fiber_orbit("first").q for image in images)


def _curve_record(x0: float, x1: float) -> Dict[str, Any]:
    return {
        "x0": x0,
        "x1": x1,
        "printed_residual": curve_Pprime_residual(x0, x1),
        "modulus_relation_residual": modulus_relation_residual(x0, x1),
        "feasible": p_prime_feasible(x0, x1, settings.tol_identity),
    }


def cmd_curve(config: RunConfig, args: argparse.Namespace) -> Tuple[Dict[str, Any], bool]:
    if (args.x0 is None) != (args.x1 is None):
        raise UsageError("--x0 and --x1 go together")
    if args.x0 is not None:
        return {"points": [_curve_record(args.x0, args.x1)]}, True
    records = [_curve_record(float(x[0]), float(x[1])) for x in CURVE_POINTS]
    passed = all(r["modulus_relation_residual"] <= settings.tol_identity for r in records)
    return {"points": records}, passed


def cmd_report(config: RunConfig, args: argparse.Namespace) -> Tuple[Dict[str, Any], bool]:
    only: List[str] = []
    for item in args.only or []:
        only.extend(name.strip() for name in item.split(",") if name.strip())
    report = AcceptanceSuite(config.seed, config.samples).run(only or None)
    return report.model_dump(mode="json"), report.passed


HANDLERS = {
    "chambers": cmd_chambers,
    "regular": cmd_regular,
    "moment": cmd_moment,
    "fiber": cmd_fiber,
    "jacobian": cmd_jacobian,
    "transition": cmd_transition,
    "triangle": cmd_triangle,
    "curve": cmd_curve,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=4, help="ambient n of G(n,2)")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=None, help="64-bit seed")
    common.add_argument("--samples", type=int, default=None, help="number of samples")
    common.add_argument("--orbit", choices=ORBIT_NAMES, default="first", help="chamber fiber")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
    common.add_argument("--json-out", default=None, metavar="PATH")
    common.add_argument("--log-level", default=None)

    parser = argparse.ArgumentParser(prog="grassmoment", description="Torus actions and moment maps on G(n,2)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    chambers = sub.add_parser("chambers", parents=[common], help="chambers of Δ(n,2)")
    chambers.add_argument("--classify", default=None, metavar="p/q,...")

    regular = sub.add_parser("regular", parents=[common], help="regular values of μ and μ̃")
    regular.add_argument("--classify", default=None, metavar="p/q,...")
    regular.add_argument("--denominator", type=int, default=None)

    moment = sub.add_parser("moment", parents=[common], help="evaluate a moment map")
    moment.add_argument("--map", choices=("mu_hat", "mu_tilde", "mu", "A"), default="mu_tilde")
    moment.add_argument("--z", default=None, metavar="re,im;re,im;...")
    moment.add_argument("--x", default=None, metavar="p/q,...")

    fiber = sub.add_parser("fiber", parents=[common], help="fiber certificates")
    fiber.add_argument("kind", choices=FIBER_KINDS)

    sub.add_parser("jacobian", parents=[common], help="complete-intersection Jacobians")
    sub.add_parser("transition", parents=[common], help="bundle transition cocycle")
    sub.add_parser("triangle", parents=[common], help="exact triangle P")

    curve = sub.add_parser("curve", parents=[common], help="curve P′ residuals")
    curve.add_argument("--x0", type=float, default=None)
    curve.add_argument("--x1", type=float, default=None)

    report = sub.add_parser("report", parents=[common], help="acceptance suite")
    report.add_argument("--only", action="append", default=None, metavar="NAME[,NAME]")
    return parser


def emit(payload: Dict[str, Any], json_out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    sys.stdout.write(text)
    if json_out:
        Path(json_out).write_text(text, encoding="utf-8")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(level=args.log_level)
    try:
        config = RunConfig(
            command=args.command,
            n=args.n,
            seed=settings.seed if args.seed is None else args.seed,
            samples=settings.samples if args.samples is None else args.samples,
            orbit=args.orbit,
            tolerances=parse_tolerances(args.tol),
            json_out=args.json_out,
        )
    except (ValueError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        emit({"command": args.command, "error": str(e)}, None)
        return EXIT_USAGE

    logger.debug(f"Run config: {config.model_dump()}")
    try:
        with tolerance_overrides(config.tolerances):
            payload, passed = HANDLERS[config.command](config, args)
    except (UsageError, UnsupportedError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        emit({"command": config.command, "error": str(e)}, config.json_out)
        return EXIT_USAGE
    except GrassmomentError as e:
        print(f"error: {e}", file=sys.stderr)
        emit({"command": config.command, "error": str(e)}, config.json_out)
        return EXIT_FAILURE

    emit(payload, config.json_out)
    return EXIT_OK if passed else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
