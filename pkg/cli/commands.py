"""Command-line front end: generate, reconstruct, check, history and export."""

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Tuple

from sqlalchemy.exc import SQLAlchemyError

from config.oracle_kinds import DEFAULT_DEPOLARIZING_P, DEFAULT_ORACLE_KIND, ORACLE_KINDS
from config.settings import APP_SETTINGS, EXIT_CODES, METHODS, RUN_DEFAULTS, RunConfig
from core.canonical import reconstruct_canonical
from core.codec import dumps
from core.database import DatabaseManager
from core.errors import (InputOutputError, InvalidOracleSpec, UsageError, VerificationFailed,
                         WignerLiftError)
from core.inductive import reconstruct_inductive
from core.report import (OUTCOMES, agreement_block, build_check_report, build_error_report,
                         build_reconstruct_report, export_to_docx)
from core.sampling import haar_unitary, make_rng
from core.symmetry import (check_symmetry_condition, depolarizing_map, hide, oracle_from_spec,
                           oracle_spec)

logger = logging.getLogger(__name__)

RECONSTRUCTORS = {
    "canonical": reconstruct_canonical,
    "inductive": reconstruct_inductive,
}


class JsonArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors are reported as JSON on stdout."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stdout.write(dumps(UsageError(message).to_dict()))
        self.exit(EXIT_CODES["usage"])


def read_json(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputOutputError(f"cannot read {path}: {e.strerror or e}", witness={"path": str(path)})
    except UnicodeDecodeError as e:
        raise InvalidOracleSpec(f"{path} is not UTF-8 text: {e.reason}",
                                witness={"path": str(path), "offset": e.start})
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidOracleSpec(f"{path} is not valid JSON: {e.msg}",
                                witness={"path": str(path), "line": e.lineno})


def write_text(path: Optional[str], text: str):
    """Write to ``path``, or to stdout when no path (or ``-``) is given."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise InputOutputError(f"cannot write {path}: {e.strerror or e}", witness={"path": str(path)})


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        method=args.method,
        tol=args.tol,
        n_verify=args.samples,
        n_pairs=args.pairs,
        seed=args.seed,
        max_dim=args.max_dim,
        workers=args.workers,
        timing=not args.no_timing,
    ).validate()


def _load_oracle(args: argparse.Namespace, config: RunConfig):
    spec = read_json(args.input)
    oracle = oracle_from_spec(spec, config.tolerances, config.max_dim)
    entry = ORACLE_KINDS[spec["kind"]]
    return oracle, {"dim": oracle.dim, "kind": spec["kind"], "name": entry["name"],
                    "coset": entry["coset"]}


def _elapsed_ms(start: float, config: RunConfig) -> Optional[float]:
    return (time.perf_counter() - start) * 1000.0 if config.timing else None


def cmd_generate(args: argparse.Namespace) -> Tuple[dict, int]:
    """Write an oracle-spec file for a seeded test oracle."""
    if args.dim < 2:
        raise UsageError("dim must be at least 2", witness={"dim": args.dim})
    if args.dim > args.max_dim:
        raise UsageError(f"dim exceeds max_dim={args.max_dim}", witness={"dim": args.dim})
    if args.seed < 0:
        raise UsageError("seed must be a non-negative integer", witness={"seed": args.seed})

    if args.kind in ("unitary", "antiunitary"):
        matrix = haar_unitary(args.dim, make_rng(args.seed))
        spec = oracle_spec(args.kind, args.dim, matrix=matrix)
    elif args.kind == "depolarizing":
        p = DEFAULT_DEPOLARIZING_P if args.p is None else args.p
        depolarizing_map(p, args.dim)
        spec = oracle_spec(args.kind, args.dim, p=p)
    else:
        spec = oracle_spec(args.kind, args.dim)
    logger.info("generated %s oracle of dim %d", args.kind, args.dim)
    return spec, EXIT_CODES["ok"]


def cmd_reconstruct(args: argparse.Namespace) -> Tuple[dict, int]:
    """Reconstruct the lift of a black-box oracle with one or both methods."""
    config = config_from_args(args)
    args.config = config
    oracle, info = _load_oracle(args, config)
    args.oracle_info = info

    methods = list(RECONSTRUCTORS) if config.method == "both" else [config.method]
    start = time.perf_counter()
    results = [RECONSTRUCTORS[method](hide(oracle), config) for method in methods]
    for result in results:
        if info["coset"] is not None and result.kind.value != info["coset"]:
            logger.warning("%s lift is %s, but %s oracles are %s", result.method,
                           result.kind.value, info["kind"], info["coset"])

    agreement = None
    if len(results) == 2:
        agreement = agreement_block(results)
        if not agreement["same_kind"] or not agreement["max_deviation"] <= config.tolerances.agreement:
            raise VerificationFailed("canonical and inductive lifts disagree", witness=agreement)
    report = build_reconstruct_report(results, config, info, agreement, _elapsed_ms(start, config))
    return report, EXIT_CODES["ok"]


def cmd_check(args: argparse.Namespace) -> Tuple[dict, int]:
    """Sample the symmetry condition on a black-box oracle."""
    config = config_from_args(args)
    args.config = config
    oracle, info = _load_oracle(args, config)
    args.oracle_info = info

    start = time.perf_counter()
    check = check_symmetry_condition(hide(oracle), n_pairs=config.n_pairs, seed=config.seed,
                                     tol=config.tol, tolerances=config.tolerances,
                                     workers=config.workers)
    if check.passed != ORACLE_KINDS[info["kind"]]["wigner"]:
        logger.warning("check verdict %s on a %s oracle", check.verdict, info["kind"])
    report = build_check_report(check, config, info, _elapsed_ms(start, config))
    return report, EXIT_CODES["ok"] if check.passed else EXIT_CODES["rejected"]


def cmd_history(args: argparse.Namespace) -> Tuple[dict, int]:
    """List recorded runs, or print one stored report."""
    db = DatabaseManager(args.db)
    if args.id is not None:
        record = db.get_run_by_id(args.id)
        if record is None:
            raise UsageError(f"no recorded run with id {args.id}", witness={"id": args.id})
        return record.report, EXIT_CODES["ok"]
    return {"runs": [record.to_dict() for record in db.get_runs(args.limit)]}, EXIT_CODES["ok"]


def cmd_export(args: argparse.Namespace) -> Tuple[dict, int]:
    """Render a report file as a Word document."""
    report = read_json(args.input)
    if not isinstance(report, dict) or "format_version" not in report:
        raise UsageError(f"{args.input} is not a report file", witness={"path": args.input})
    export_to_docx(report, args.output)
    return {"exported": str(args.output)}, EXIT_CODES["ok"]


def _record_run(args: argparse.Namespace, report: dict, text: str, code: int):
    results = report.get("results") or []
    residual = max((r["residual"] for r in results), default=None)
    if "check" in report:
        residual = report["check"]["max_sc_violation"]
    info = getattr(args, "oracle_info", None) or {}
    config = getattr(args, "config", None)
    DatabaseManager(args.db).add_run(
        command=args.command,
        outcome=OUTCOMES.get(code, "usage"),
        report_text=text,
        exit_code=code,
        method=config.method if config is not None else None,
        dim=info.get("dim"),
        oracle_kind=info.get("kind"),
        residual=residual,
    )


def dispatch(args: argparse.Namespace) -> int:
    """Run the selected command; every failure becomes a JSON error and an exit code."""
    try:
        payload, code = args.func(args)
    except WignerLiftError as e:
        logger.info("%s failed: %s", args.command, e.name)
        payload, code = build_error_report(args.command, e, getattr(args, "config", None)), e.exit_code

    text = dumps(payload)
    destination = getattr(args, "output", None) if args.writes_output else None
    try:
        write_text(destination, text)
    except InputOutputError as e:
        sys.stdout.write(dumps(build_error_report(args.command, e, getattr(args, "config", None))))
        return e.exit_code

    if getattr(args, "db", None) and args.command in ("reconstruct", "check"):
        try:
            _record_run(args, payload, text, code)
        except SQLAlchemyError as e:
            logger.error("cannot record run in %s: %s", args.db, e)
            sys.stderr.write(dumps(InputOutputError(f"cannot record run: {e}",
                                                    witness={"db": args.db}).to_dict()))
            return EXIT_CODES["io"]
    return code


def _add_run_options(parser: argparse.ArgumentParser):
    parser.add_argument("--input", "-i", required=True, help="Oracle-spec JSON file")
    parser.add_argument("--output", "-o", default=None, help="Report file (default: stdout)")
    parser.add_argument("--method", "-m", choices=METHODS, default=RUN_DEFAULTS["method"],
                        help="Reconstruction method")
    parser.add_argument("--tol", "-t", type=float, default=RUN_DEFAULTS["tol"],
                        help="Verification / symmetry-condition tolerance")
    parser.add_argument("--samples", type=int, default=RUN_DEFAULTS["n_verify"],
                        help="Random rays used to verify a lift")
    parser.add_argument("--pairs", type=int, default=RUN_DEFAULTS["n_pairs"],
                        help="Random ray pairs for the symmetry check")
    parser.add_argument("--seed", type=int, default=RUN_DEFAULTS["seed"], help="PRNG seed")
    parser.add_argument("--max-dim", type=int, default=RUN_DEFAULTS["max_dim"],
                        help="Largest accepted oracle dimension")
    parser.add_argument("--workers", type=int, default=RUN_DEFAULTS["workers"],
                        help="Threads for independent oracle queries")
    parser.add_argument("--no-timing", action="store_true",
                        help="Omit wall_time_ms so reports are byte-for-byte reproducible")
    parser.add_argument("--db", default=None, help="Record the run in this SQLite ledger")


def build_parser() -> argparse.ArgumentParser:
    p = JsonArgumentParser(prog="wigner-lift",
                           description=f"{APP_SETTINGS['app_name']}: lift ray-space symmetries "
                                       "to unitary or antiunitary operators")
    p.add_argument("--verbose", "-v", action="store_true", help="Log progress at DEBUG level")
    p.add_argument("--version", action="version", version=APP_SETTINGS["version"])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("generate", help="Write a seeded test oracle")
    s.add_argument("--dim", type=int, required=True, help="Hilbert-space dimension")
    s.add_argument("--kind", choices=list(ORACLE_KINDS), default=DEFAULT_ORACLE_KIND)
    s.add_argument("--seed", type=int, default=RUN_DEFAULTS["seed"], help="PRNG seed")
    s.add_argument("--p", type=float, default=None, help="Depolarizing strength in (0, 1]")
    s.add_argument("--max-dim", type=int, default=RUN_DEFAULTS["max_dim"])
    s.add_argument("--output", "-o", default=None, help="Oracle-spec file (default: stdout)")
    s.set_defaults(func=cmd_generate, writes_output=True)

    s = sub.add_parser("reconstruct", help="Reconstruct the lift of an oracle")
    _add_run_options(s)
    s.set_defaults(func=cmd_reconstruct, writes_output=True)

    s = sub.add_parser("check", help="Sample the symmetry condition of an oracle")
    _add_run_options(s)
    s.set_defaults(func=cmd_check, writes_output=True)

    s = sub.add_parser("history", help="List runs recorded with --db")
    s.add_argument("--db", default=None, help="SQLite ledger (default: per-user data directory)")
    s.add_argument("--limit", type=int, default=20, help="Number of runs to list")
    s.add_argument("--id", type=int, default=None, help="Print the stored report of one run")
    s.set_defaults(func=cmd_history, writes_output=False)

    s = sub.add_parser("export", help="Render a report as a Word document")
    s.add_argument("--input", "-i", required=True, help="Report JSON file")
    s.add_argument("--output", "-o", required=True, help="Destination .docx file")
    s.set_defaults(func=cmd_export, writes_output=False)

    return p
