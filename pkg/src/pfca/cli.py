"""Command-line interface: ``pfca gen|lattice|run|verify|bench|scale``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O or
parse error. All indices printed or written are 1-based.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Callable, Sequence

from .context import FormalContext, enumerate_tem, enumerate_tia, generate_context, stats, validate_context
from .engine import PrivacyConcept
from .enums import Direction
from .errors import (
    IntegrityError,
    InvalidParameter,
    ParamsInfeasible,
    ParseError,
    PFCAError,
    ReportIOError,
    TooLarge,
    TranscriptViolation,
    VerificationFailure,
)
from .formats import format_plain, one_hot_scale, parse_plain, read_context, write_context
from .pipeline import run_pipeline, verify_theorem1
from .report import RunReport, StageTimings, write_report

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SECURITY_NOTE = (
    "note: the 'she' backend uses toy parameters and makes no cryptographic security claim; "
    "'oracle' does not encrypt at all. Both only demonstrate the homomorphic data flow."
)


class UsageError(PFCAError):
    pass


def _fmt_set(indices) -> str:
    return "{" + ",".join(str(i + 1) for i in sorted(indices)) + "}"


def format_privacy(pc: PrivacyConcept) -> str:
    if pc.kind is Direction.OBJECT:
        return f"({_fmt_set(pc.extent)}, {pc.intent_cardinality})"
    return f"({pc.extent_cardinality}, {_fmt_set(pc.intent)})"


def _csv_list(cast: Callable[[str], object]) -> Callable[[str], list]:
    def parse(text: str) -> list:
        try:
            return [cast(tok) for tok in text.split(",") if tok.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid list {text!r}") from None

    return parse


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _report_format(path: str, explicit: str | None) -> str:
    return explicit or ("csv" if path.lower().endswith(".csv") else "json")


# execution ------------------------------------------------------------------


def execute(
    load: Callable[[], FormalContext],
    algo: str,
    *,
    dataset: str,
    backend: str = "oracle",
    workers: int = 1,
    prune: bool = False,
    seed: int = 0,
) -> RunReport:
    """Read, run and time one algorithm; ``algo`` is tem, tia, pfca-f, pfca-g or pfca (auto)."""
    start = time.perf_counter()
    ctx = load()
    read = time.perf_counter()
    m, n = ctx.shape
    density = float(stats(ctx).density)
    if algo in ("tem", "tia"):
        concepts = enumerate_tem(ctx) if algo == "tem" else enumerate_tia(ctx)
        end = time.perf_counter()
        # Plaintext baselines have no encryption or extraction stage.
        timings = StageTimings.from_marks(start, read, read, end, end)
        return RunReport(dataset, m, n, density, algo, "plain", 1, len(concepts), timings, concepts=concepts)

    direction = {"pfca": "auto", "pfca-f": "f", "pfca-g": "g"}.get(algo)
    if direction is None:
        raise UsageError(f"unknown algorithm {algo!r}")
    result = run_pipeline(ctx, backend, direction, workers=workers, prune=prune, seed=seed)
    end = time.perf_counter()
    encrypt = result.started + result.timings["encrypt_s"]
    process = encrypt + result.timings["process_s"]
    timings = StageTimings.from_marks(start, result.started, encrypt, process, end)
    return RunReport(
        dataset, m, n, density, f"pfca-{result.direction.value}", backend, workers,
        len(result.privacy_concepts), timings, concepts=result.concepts, privacy_concepts=result.privacy_concepts,
    )


def _print_timings(t: StageTimings) -> None:
    print(
        f"timings: read={t.read_s:.6f}s encrypt={t.encrypt_s:.6f}s process={t.process_s:.6f}s "
        f"extract={t.extract_s:.6f}s total={t.total_s:.6f}s"
    )


# subcommands ---------------------------------------------------------------


def cmd_gen(args) -> int:
    ctx = generate_context(args.objects, args.attrs, args.density, args.seed)
    if args.out:
        write_context(ctx, args.out, args.format)
        s = stats(ctx)
        print(f"wrote {args.out}: {args.objects}x{args.attrs}, density={float(s.density):.4f}")
    else:
        sys.stdout.write(format_plain(ctx))
    return EXIT_OK


def _reader(args) -> tuple[Callable[[], FormalContext], list[FormalContext]]:
    loaded: list[FormalContext] = []

    def load() -> FormalContext:
        loaded.append(read_context(args.path, args.format))
        return loaded[-1]

    return load, loaded


def cmd_lattice(args) -> int:
    load, loaded = _reader(args)
    report = execute(load, args.algo, dataset=Path(args.path).stem)
    for warning in validate_context(loaded[0]):
        print(f"warning: {warning}", file=sys.stderr)
    for c in report.concepts:
        print(f"({_fmt_set(c.extent)}, {_fmt_set(c.intent)})")
    print(f"concepts={report.concept_count}")
    _print_timings(report.timings)
    if args.out:
        write_report(report, args.out, _report_format(args.out, args.report_format))
    return EXIT_OK


def cmd_run(args) -> int:
    algo = {"auto": "pfca", "f": "pfca-f", "g": "pfca-g"}[args.direction]
    print(SECURITY_NOTE, file=sys.stderr)
    report = execute(
        lambda: read_context(args.path, args.format), algo, dataset=Path(args.path).stem,
        backend=args.backend, workers=args.workers, prune=args.prune, seed=args.seed,
    )
    print(
        f"direction={report.algo[-1]} backend={report.backend} workers={report.workers} "
        f"prune={'on' if args.prune else 'off'}"
    )
    for pc in report.privacy_concepts:
        print(format_privacy(pc))
    print(f"concepts={report.concept_count}")
    _print_timings(report.timings)
    if args.out:
        write_report(report, args.out, _report_format(args.out, args.report_format))
    return EXIT_OK


def cmd_verify(args) -> int:
    print(SECURITY_NOTE, file=sys.stderr)
    ctx = read_context(args.path, args.format)
    directions = ("f", "g") if args.direction == "both" else (args.direction,)
    try:
        report = verify_theorem1(ctx, args.backend, directions=directions, seed=args.seed, workers=args.workers)
    except VerificationFailure as exc:
        print(f"FAIL: {exc}")
        for c in exc.missing:
            print(f"  missing ({_fmt_set(c.extent)}, {_fmt_set(c.intent)})")
        for c in exc.extra:
            print(f"  unexpected ({_fmt_set(c.extent)}, {_fmt_set(c.intent)})")
        return EXIT_VERIFY
    for direction, count in report.pfca_counts.items():
        print(f"direction={direction} backend={report.backend} concepts={count}")
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_bench(args) -> int:
    print(SECURITY_NOTE, file=sys.stderr)
    grid = [
        (m, n, p, algo)
        for algo in args.algos
        for m in args.objects
        for n in args.attrs
        for p in args.density
    ]
    if not grid:
        raise UsageError("bench needs at least one value in every list")

    def one(m: int, n: int, p: float, algo: str) -> RunReport:
        text = format_plain(generate_context(m, n, p, args.seed))
        return execute(
            lambda: parse_plain(text), algo, dataset=f"synthetic-m{m}-n{n}-p{p}-s{args.seed}",
            backend=args.backend, workers=args.workers, prune=args.prune, seed=args.seed,
        )

    one(*grid[0])  # warm-up, discarded
    reports = []
    for m, n, p, algo in grid:
        for _ in range(args.repeats):
            r = one(m, n, p, algo)
            reports.append(r)
            print(",".join(r.csv_row()), flush=True)
    write_report(reports, args.out, "csv")
    return EXIT_OK


def cmd_scale(args) -> int:
    ctx = one_hot_scale(args.path)
    write_context(ctx, args.out, args.format)
    print(f"wrote {args.out}: {ctx.object_count} objects, {ctx.attribute_count} attributes")
    return EXIT_OK


# parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pfca", description="Privacy-preserving formal concept analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    def context_format(p):
        p.add_argument("--format", choices=("plain", "cxt"), help="context format (default: by file extension)")

    def report_out(p):
        p.add_argument("--out", help="write a report (.json or .csv)")
        p.add_argument("--report-format", choices=("json", "csv"), help="report format (default: by extension)")

    p = sub.add_parser("gen", help="generate a random context")
    p.add_argument("--objects", type=int, required=True)
    p.add_argument("--attrs", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default: stdout, plain format)")
    context_format(p)
    p.set_defaults(func=cmd_gen, subparser=p)

    p = sub.add_parser("lattice", help="plaintext concepts")
    p.add_argument("path")
    p.add_argument("--algo", choices=("tem", "tia"), default="tem")
    context_format(p)
    report_out(p)
    p.set_defaults(func=cmd_lattice, subparser=p)

    p = sub.add_parser("run", help="full encrypted pipeline")
    p.add_argument("path")
    p.add_argument("--direction", choices=("f", "g", "auto"), default="auto")
    p.add_argument("--backend", choices=("oracle", "she"), default="oracle")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--prune", type=_on_off, default=False, metavar="on|off")
    p.add_argument("--seed", type=int, default=0)
    context_format(p)
    report_out(p)
    p.set_defaults(func=cmd_run, subparser=p)

    p = sub.add_parser("verify", help="check the encrypted pipeline against plaintext enumeration")
    p.add_argument("path")
    p.add_argument("--backend", choices=("oracle", "she"), default="oracle")
    p.add_argument("--direction", choices=("f", "g", "both"), default="both")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--seed", type=int, default=0)
    context_format(p)
    p.set_defaults(func=cmd_verify, subparser=p)

    p = sub.add_parser("bench", help="timing sweep over synthetic contexts")
    p.add_argument("--objects", type=_csv_list(int), required=True, metavar="LIST")
    p.add_argument("--attrs", type=_csv_list(int), required=True, metavar="LIST")
    p.add_argument("--density", type=_csv_list(float), required=True, metavar="LIST")
    p.add_argument("--algos", type=_csv_list(str), default=["pfca"], metavar="LIST",
                   help="comma list of tem, tia, pfca-f, pfca-g, pfca (auto direction)")
    p.add_argument("--backend", choices=("oracle", "she"), default="oracle")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--prune", type=_on_off, default=False, metavar="on|off")
    p.add_argument("--repeats", type=_positive, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_bench, subparser=p)

    p = sub.add_parser("scale", help="one-hot binarize a categorical CSV")
    p.add_argument("path")
    p.add_argument("--out", required=True)
    context_format(p)
    p.set_defaults(func=cmd_scale, subparser=p)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (VerificationFailure, IntegrityError, TranscriptViolation) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ParseError, ReportIOError, OSError) as exc:
        print(f"pfca: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, InvalidParameter, TooLarge, ParamsInfeasible) as exc:
        print(f"pfca {args.command}: error: {exc}", file=sys.stderr)
        print(args.subparser.format_usage(), end="", file=sys.stderr)
        return EXIT_USAGE
