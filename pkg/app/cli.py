"""
Kommandozeile des Toolkits (python -m app).

Kommandos: entropy, divergence, check, random, twirl, measure.
Exit-Codes: 0 ok, 1 intern, 2 Usage, 3 I/O, 4 Parse, 5 Validierung, 6 Check fehlgeschlagen.
"""
from typing import Dict, List, Optional
import argparse
import logging
import platform
import sys
import time

import numpy as np
from pydantic import ValidationError

from app import __version__
from app.config import settings
from app.services.channels import measure, measurement_trace_identity, twirl_subsystem_B
from app.services.entropy import (
    divergence_terms,
    logical_divergence,
    logical_entropy,
    purity,
    tsallis_entropy,
    von_neumann_entropy,
)
from app.services.errors import CheckConfigError, CheckFailure, LogicalEntropyError, SplitError, UsageError
from app.services.linalg import Subsystem, hermitian_eigen, partial_trace
from app.services.matrix_io import (
    ReportDocument,
    file_digest,
    parse_matrix_file,
    parse_projector_file,
    write_matrix_file,
)
from app.services.qstate import DensityMatrix, make_density, random_density
from app.services.theorems import CheckConfig, Dims, TheoremId, run_all, run_check

logger = logging.getLogger(__name__)


def configure_logging() -> None:
    """Diagnose nach stderr (optional zusätzlich in settings.log_file); Ergebnisse nach stdout"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file, encoding="utf-8"))
    logging.basicConfig(
        level=settings.log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def parse_dims(spec: str) -> List[Dims]:
    """'2x2,2x3' → [(2, 2), (2, 3)]; '2,3' → [2, 3]"""
    dims: List[Dims] = []
    for part in (p.strip() for p in spec.split(",")):
        if not part:
            continue
        try:
            if "x" in part:
                a, b = part.split("x")
                dims.append((int(a), int(b)))
            else:
                dims.append(int(part))
        except ValueError as e:
            raise UsageError(f"invalid dimension '{part}' in --dims (expected e.g. 2x2,2x3 or 2,4)") from e
    if not dims:
        raise UsageError("--dims is empty")
    return dims


def _versions() -> Dict[str, str]:
    return {"toolkit": __version__, "numpy": np.__version__, "python": platform.python_version()}


def _document(args: argparse.Namespace, inputs: List[str], results: dict,
              seed: Optional[int] = None) -> ReportDocument:
    return ReportDocument(
        command=list(args.argv),
        inputs={path: file_digest(path) for path in inputs},
        results=results,
        versions=_versions(),
        seed=seed,
    )


def _marginal_entropies(rho: DensityMatrix) -> Dict[str, float]:
    if rho.split is None:
        raise SplitError("--marginals needs a state file with a split")
    return {
        "A": logical_entropy(make_density(partial_trace(rho.matrix, rho.split, Subsystem.B))),
        "B": logical_entropy(make_density(partial_trace(rho.matrix, rho.split, Subsystem.A))),
    }


# ===========================================================================
# KOMMANDOS
# ===========================================================================

def cmd_entropy(args: argparse.Namespace) -> ReportDocument:
    rho = parse_matrix_file(args.state, max_dim=args.max_dim)
    results: dict = {"dim": rho.dim, "logical_entropy": logical_entropy(rho)}
    if args.purity or args.all:
        results["purity"] = purity(rho)
    if args.von_neumann or args.all:
        results["von_neumann"] = von_neumann_entropy(rho)
    if args.tsallis:
        results["tsallis"] = {format(q, "g"): tsallis_entropy(rho, q) for q in args.tsallis}
    if args.spectrum or args.all:
        results["spectrum"] = [float(x) for x in hermitian_eigen(rho.matrix).eigenvalues]
    if args.marginals or (args.all and rho.split is not None):
        results["marginals"] = _marginal_entropies(rho)
    return _document(args, [args.state], results)


def cmd_divergence(args: argparse.Namespace) -> ReportDocument:
    rho = parse_matrix_file(args.rho, max_dim=args.max_dim)
    sigma = parse_matrix_file(args.sigma, max_dim=args.max_dim)
    value = logical_divergence(rho, sigma)
    terms = divergence_terms(rho, sigma)
    return _document(args, [args.rho, args.sigma], {
        "divergence": value,
        "terms": {
            "cross": terms.cross,
            "half_entropy_rho": terms.half_entropy_rho,
            "half_entropy_sigma": terms.half_entropy_sigma,
        },
    })


def _check_config(args: argparse.Namespace) -> CheckConfig:
    values = {"dims": parse_dims(args.dims) if args.dims else []}
    for key, attr in (("trials", "trials"), ("seed", "seed"), ("tolerance", "tol"), ("workers", "workers")):
        if getattr(args, attr) is not None:
            values[key] = getattr(args, attr)
    try:
        return CheckConfig(**values)
    except ValidationError as e:
        first = e.errors()[0]
        raise CheckConfigError(f"invalid check configuration: {'.'.join(map(str, first['loc']))}: {first['msg']}") from e


def cmd_check(args: argparse.Namespace) -> ReportDocument:
    selector = args.theorem.lower()
    names = [t.value for t in TheoremId]
    if selector != "all" and selector not in names:
        raise UsageError(f"unknown theorem '{args.theorem}'; valid names: all, {', '.join(names)}")
    config = _check_config(args)
    reports = run_all(config) if selector == "all" else [run_check(selector, config)]
    return _document(args, [], {
        "passed": all(r.passed for r in reports),
        "reports": [r.model_dump(mode="json") for r in reports],
    }, seed=config.seed)


def cmd_random(args: argparse.Namespace) -> ReportDocument:
    seed = settings.check_seed if args.seed is None else args.seed
    rank = args.dim if args.rank is None else args.rank
    rho = random_density(args.dim, rank, seed)
    write_matrix_file(args.out, rho.matrix, label=f"random dim={args.dim} rank={rank} seed={seed}")
    return _document(args, [], {
        "dim": args.dim,
        "rank": rank,
        "output": args.out,
        "logical_entropy": logical_entropy(rho),
    }, seed=seed)


def cmd_twirl(args: argparse.Namespace) -> ReportDocument:
    rho = parse_matrix_file(args.state, max_dim=args.max_dim)
    twirled = twirl_subsystem_B(rho)
    if args.out:
        write_matrix_file(args.out, twirled.matrix, split=twirled.split, label="twirl over subsystem B")
    return _document(args, [args.state], {
        "before": logical_entropy(rho),
        "after": logical_entropy(twirled),
        "divergence_to_input": logical_divergence(rho, twirled),
    })


def cmd_measure(args: argparse.Namespace) -> ReportDocument:
    rho = parse_matrix_file(args.state, max_dim=args.max_dim)
    m = parse_projector_file(args.projectors)
    post = measure(rho, m)
    cross, own = measurement_trace_identity(rho, m)
    if args.out:
        write_matrix_file(args.out, post.matrix, split=post.split, label="post-measurement state")
    return _document(args, [args.state, args.projectors], {
        "before": logical_entropy(rho),
        "after": logical_entropy(post),
        "outcomes": len(m.projectors),
        "trace_identity": {"cross": cross, "post": own},
    })


# ===========================================================================
# AUSGABE
# ===========================================================================

def _render_value(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    if isinstance(value, list):
        return "[" + ", ".join(_render_value(v) for v in value) + "]"
    return str(value)


def _render_check(results: dict) -> List[str]:
    lines = []
    for report in results["reports"]:
        mark = "✓" if report["passed"] else "✗"
        lines.append(
            f"{mark} {report['theorem']:<22} trials={report['trials_run']:<5} "
            f"failures={report['failures']:<4} worst_margin={_render_value(report['worst_margin'])}"
        )
        for failure in report["failing_seeds"]:
            lines.append(
                f"    replay: theorem={report['theorem']} seed={failure['seed']} dims={failure['dims']} "
                f"side={failure['side']} slack={_render_value(failure['slack'])}"
            )
    lines.append("PASSED" if results["passed"] else "FAILED")
    return lines


def render_text(doc: ReportDocument) -> str:
    if "reports" in doc.results:
        return "\n".join(_render_check(doc.results))
    lines = []
    for key, value in doc.results.items():
        if isinstance(value, dict):
            for sub, inner in value.items():
                lines.append(f"{key}.{sub:<18} {_render_value(inner)}")
        else:
            lines.append(f"{key:<22} {_render_value(value)}")
    return "\n".join(lines)


# ===========================================================================
# PARSER
# ===========================================================================

def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="ReportDocument als JSON ausgeben")
    common.add_argument("--max-dim", type=_positive_int, default=None,
                        help=f"Obergrenze der Eingabedimension (Default {settings.cli_max_dim})")

    parser = argparse.ArgumentParser(prog="python -m app", description="Quantum logical entropy toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", parents=[common], help="logische Entropie eines Zustands")
    p.add_argument("state")
    p.add_argument("--purity", action="store_true")
    p.add_argument("--von-neumann", action="store_true")
    p.add_argument("--tsallis", type=float, action="append", metavar="Q")
    p.add_argument("--spectrum", action="store_true")
    p.add_argument("--marginals", action="store_true")
    p.add_argument("--all", action="store_true")
    p.set_defaults(handler=cmd_entropy)

    p = sub.add_parser("divergence", parents=[common], help="logische Divergenz d(ρ‖σ)")
    p.add_argument("rho")
    p.add_argument("sigma")
    p.set_defaults(handler=cmd_divergence)

    p = sub.add_parser("check", parents=[common], help="randomisierte Theorem-Checks")
    p.add_argument("theorem", help="Theorem-Name oder 'all'")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--dims", help="z.B. 2,4 oder 2x2,2x3")
    p.add_argument("--workers", type=int)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("random", parents=[common], help="zufällige Dichtematrix schreiben")
    p.add_argument("dim", type=_positive_int)
    p.add_argument("--rank", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_random)

    p = sub.add_parser("twirl", parents=[common], help="Weyl-Twirl über Subsystem B")
    p.add_argument("state")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_twirl)

    p = sub.add_parser("measure", parents=[common], help="projektive Messung anwenden")
    p.add_argument("state")
    p.add_argument("projectors")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_measure)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    args.argv = argv
    configure_logging()

    started = time.perf_counter()
    try:
        doc = args.handler(args)
    except LogicalEntropyError as e:
        logger.debug("Kommando fehlgeschlagen", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(f"✗ Interner Fehler: {e}", exc_info=True)
        print(f"internal error: {e}", file=sys.stderr)
        return 1
    doc.timing["wall_time_s"] = time.perf_counter() - started

    print(doc.to_json() if args.json else render_text(doc))
    if doc.results.get("passed") is False:
        return CheckFailure.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
