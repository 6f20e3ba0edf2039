"""
Command-line entry point for the checker.

    python cli.py check FILE...            check files against an accumulating environment
    python cli.py eval EXPR [FILE...]      normalize a term and print its type
    python cli.py corpus [--tier NAME]     run the corpus against its manifest

Exit status: 0 success, 1 a file or expectation failed, 2 usage, parse,
scope or I/O error.
"""
import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from config import Config
from corpus import FileOutcome, ManifestError, check_file, list_targets, load_manifest, run_corpus
from diagnostics import CheckError, CohesiveKernelError, DiagnosticCode, InternalError, ParseError
from equality import normalize
from kernel import Environment, infer
from logger import log_error, logger
from parser import parse_term, pretty, resolve_term
from syntax import Telescope

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


@dataclass
class CliConfig:
    """Resolved command-line settings; flags override the environment"""
    command: str
    files: List[str] = field(default_factory=list)
    json: bool = False
    fuel: int = 1_000_000
    tier: Optional[str] = None
    expr: Optional[str] = None
    manifest: Optional[Path] = None
    jobs: int = 1
    list_targets: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        return cls(
            command=args.command,
            files=list(getattr(args, "files", []) or []),
            json=args.json,
            fuel=args.fuel if args.fuel is not None else Config.FUEL,
            tier=getattr(args, "tier", None),
            expr=getattr(args, "expr", None),
            manifest=Path(args.manifest) if getattr(args, "manifest", None) else Config.MANIFEST,
            jobs=args.jobs if getattr(args, "jobs", None) is not None else Config.JOBS,
            list_targets=getattr(args, "list", False),
        )


def _emit_json(payload: object) -> None:
    sys.stdout.write(json.dumps(payload, ensure_ascii=False) + "\n")


def _status_for(error: Optional[Exception]) -> int:
    if error is None:
        return EXIT_OK
    if isinstance(error, ParseError):
        return EXIT_USAGE
    if isinstance(error, CheckError) and error.code is DiagnosticCode.SCOPE_ERROR:
        return EXIT_USAGE
    return EXIT_FAILURE


def _render(error: CohesiveKernelError) -> str:
    if isinstance(error, CheckError):
        return error.diagnostic.render()
    return str(error)


def _io_diagnostic(file: str, error: OSError) -> Dict[str, object]:
    return {
        "code": "IOError",
        "message": f"cannot read file: {error.strerror or error}",
        "file": file,
        "line": None,
        "col": None,
        "context": [],
    }


def _load_files(files: List[str], fuel: int, cfg: CliConfig,
                reports: List[dict]) -> Tuple[Environment, int]:
    """Check files in order; prints progress unless JSON output was requested."""
    env = Environment()
    status = EXIT_OK
    for file in files:
        try:
            outcome: FileOutcome = check_file(env, Path(file), fuel, display=file)
        except OSError as e:
            log_error("Cannot read file", e, file=file)
            if not cfg.json:
                print(f"{file}: error: cannot read file ({e.strerror or e})", file=sys.stderr)
            reports.append({"file": file, "status": "error", "declarations": [],
                            "diagnostic": _io_diagnostic(file, e)})
            status = max(status, EXIT_USAGE)
            continue
        env = outcome.env
        checked = [d.name for d in outcome.declarations if d.ok]
        if not cfg.json and cfg.command == "check":
            for name in checked:
                print(f"OK {name}")
        if outcome.error is not None and not cfg.json:
            print(_render(outcome.error))
        reports.append({
            "file": file,
            "status": "ok" if outcome.ok else "error",
            "declarations": checked,
            "diagnostic": outcome.diagnostic_dict(),
        })
        status = max(status, _status_for(outcome.error))
    return env, status


# ============================================================================
# Commands
# ============================================================================

def cmd_check(cfg: CliConfig) -> int:
    """Check files in order against an accumulating environment."""
    reports: List[dict] = []
    _, status = _load_files(cfg.files, cfg.fuel, cfg, reports)
    if cfg.json:
        _emit_json(reports)
    return status


def cmd_eval(cfg: CliConfig) -> int:
    """Print the normal form of an expression and its inferred type."""
    reports: List[dict] = []
    env, status = _load_files(cfg.files, cfg.fuel, cfg, reports)
    if status != EXIT_OK:
        if cfg.json:
            _emit_json(reports)
        return status

    try:
        term = resolve_term(parse_term(cfg.expr or ""), env)
        ty = infer(env, Telescope(), term, cfg.fuel)
        nf = normalize(env, Telescope(), term, cfg.fuel)
    except (ParseError, CheckError) as e:
        if cfg.json:
            _emit_json([e.diagnostic.to_dict() if isinstance(e, CheckError) else e.to_dict()])
        else:
            print(_render(e))
        return _status_for(e)

    reserved = env.names()
    shown, shown_ty = pretty(nf, reserved=reserved), pretty(ty, reserved=reserved)
    if cfg.json:
        _emit_json([{"expr": cfg.expr, "normal_form": shown, "type": shown_ty}])
    else:
        print(f"{shown} : {shown_ty}")
    return EXIT_OK


def cmd_corpus(cfg: CliConfig) -> int:
    """Run the corpus and report every expectation."""
    try:
        manifest = load_manifest(cfg.manifest)
    except ManifestError as e:
        log_error("Manifest error", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if cfg.list_targets:
        targets = [t for t in list_targets(manifest) if cfg.tier in (None, t.file.split("/")[0])]
        if cfg.json:
            _emit_json([asdict(t) for t in targets])
        else:
            for t in targets:
                print(f"{t.file:<40} {t.status:<28} {t.label}" + (f": {t.anchor}" if t.anchor else ""))
        return EXIT_OK

    try:
        report = run_corpus(manifest, cfg.tier, cfg.fuel, cfg.jobs)
    except ManifestError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if cfg.json:
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.render_table())
    return EXIT_OK if report.ok else EXIT_FAILURE


COMMANDS = {
    "check": cmd_check,
    "eval": cmd_eval,
    "corpus": cmd_corpus,
}


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit machine-readable JSON on stdout")
    common.add_argument("--fuel", type=_positive, default=None,
                        help="reduction budget per declaration (default: COHC_FUEL or 1000000)")

    parser = argparse.ArgumentParser(prog="cohc", description="Proof checker for spatial type theory")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", parents=[common], help="check .coh files in order")
    p_check.add_argument("files", nargs="+", help="files, checked in order against one environment")

    p_eval = sub.add_parser("eval", parents=[common], help="normalize an expression")
    p_eval.add_argument("expr", help="term to normalize")
    p_eval.add_argument("files", nargs="*", help="files providing the constants the term uses")

    p_corpus = sub.add_parser("corpus", parents=[common], help="run the corpus")
    p_corpus.add_argument("--tier", default=None, help="run one tier only (the prelude is always loaded)")
    p_corpus.add_argument("--manifest", default=None, help="manifest path (default: COHC_MANIFEST)")
    p_corpus.add_argument("--jobs", type=_positive, default=None, help="worker threads (default: COHC_JOBS)")
    p_corpus.add_argument("--list", action="store_true", help="list the targets instead of running them")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = CliConfig.from_args(args)
    logger.debug("Command started", extra={"command": cfg.command, "fuel": cfg.fuel, "files": cfg.files})
    try:
        return COMMANDS[cfg.command](cfg)
    except InternalError as e:
        log_error("Internal error", e, command=cfg.command)
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
