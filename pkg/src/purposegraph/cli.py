"""
Command-line interface

Every command prints machine-readable JSON (or DOT) to standard output and human
readable messages to standard error. The exit code is the only other contract:

* ``0``: success, the policy is valid or every service is covered
* ``1``: violations or uncovered services were found
* ``2``: usage error, unreadable input or a document which cannot be parsed
"""
from __future__ import annotations

import argparse
import enum
import logging
import sys
from logging import getLogger
from pathlib import Path
from typing import Optional, Sequence

from purposegraph import __version__
from purposegraph._typing import FilePath
from purposegraph.config import load_defaults
from purposegraph.dot import policy_to_dot, services_to_dot
from purposegraph.errors import PurposeGraphError
from purposegraph.extraction import extract, format_warnings, result_to_json
from purposegraph.extraction.stats import Stats, format_table, transparency
from purposegraph.lpl import merge_fragment
from purposegraph.serialisation import (
    dump_json,
    parse_extraction,
    parse_policy,
    parse_policy_fragment,
    parse_service_model,
    serialize_extraction,
)
from purposegraph.servicenet import check_coverage
from purposegraph.testing import synthetic_corpus, write_corpus
from purposegraph.validation import layers, roots, validate

_logger = getLogger(__name__)

WARNINGS_SUFFIX = ".warnings.txt"


class ExitStatus(enum.IntEnum):
    """
    Process exit codes
    """

    OK = 0
    FAILED = 1
    ERROR = 2


def _read(path: FilePath) -> bytes:
    _logger.info("Reading %s", path)
    return Path(path).read_bytes()


def _write(path: FilePath, text: str) -> None:
    _logger.info("Writing %s", path)
    Path(path).write_text(text, encoding="utf-8")


def _emit(text: str) -> None:
    sys.stdout.write(text)


def warnings_path(out: FilePath) -> Path:
    """
    Sidecar file receiving the analysis warnings of ``extract``
    """
    out = Path(out)
    return out.with_name(out.stem + WARNINGS_SUFFIX)


def cmd_extract(args: argparse.Namespace) -> ExitStatus:
    """
    Extract composed purposes from a source directory
    """
    result = extract(
        args.src_dir,
        corpus_name=args.name,
        defaults=load_defaults(args.defaults),
        n_jobs=args.jobs,
        progress=args.progress,
    )
    _write(args.out, result_to_json(result))
    _write(warnings_path(args.out), format_warnings(result.warnings))
    if args.dot:
        _write(args.dot, policy_to_dot(result.policy))

    if result.warnings:
        _logger.warning(
            "%d analysis warning(s), see %s",
            len(result.warnings),
            warnings_path(args.out),
        )
    return ExitStatus.OK


def cmd_validate(args: argparse.Namespace) -> ExitStatus:
    """
    Check a policy against the composition constraints
    """
    policy = parse_policy(_read(args.policy), lenient=args.lenient)
    report = validate(
        policy,
        strict_inheritance=args.strict_inheritance,
        registry=load_defaults(args.defaults).registry,
    )
    _emit(dump_json(report.to_dict()))
    for violation in report.violations:
        _logger.debug("%s: %s", violation.rule.value, violation.detail)
    return ExitStatus.OK if report.is_valid else ExitStatus.FAILED


def cmd_coverage(args: argparse.Namespace) -> ExitStatus:
    """
    Check that every service is governed and covered by a purpose
    """
    policy = parse_policy(_read(args.policy), lenient=args.lenient)
    model = parse_service_model(_read(args.services), lenient=args.lenient)
    report = check_coverage(policy, model.services, model.gov)
    _emit(dump_json(report.to_dict()))
    return ExitStatus.OK if report.is_complete else ExitStatus.FAILED


def cmd_stats(args: argparse.Namespace) -> ExitStatus:
    """
    Summarise an extraction result

    Exits with 0 even if the transparency ratio is flagged.
    """
    policy, model, raw = parse_extraction(_read(args.result), lenient=args.lenient)
    stats = Stats.from_dict(raw)
    metrics = transparency(policy, model.services)
    if args.json:
        _emit(dump_json({"stats": stats.to_dict(), "transparency": metrics.to_dict()}))
    else:
        _emit(format_table(stats, metrics))
    return ExitStatus.OK


def cmd_layers(args: argparse.Namespace) -> ExitStatus:
    """
    Print the layers of every root purpose, or of ``--root``
    """
    policy = parse_policy(_read(args.policy), lenient=args.lenient)
    selected = [args.root] if args.root else sorted(roots(policy))
    _emit(dump_json({root: layers(policy, root) for root in selected}))
    return ExitStatus.OK


def cmd_graph(args: argparse.Namespace) -> ExitStatus:
    """
    Render the purpose graph, or the service tree with its gov relation, as DOT
    """
    policy = parse_policy(_read(args.policy), lenient=args.lenient)
    if args.services:
        model = parse_service_model(_read(args.services), lenient=args.lenient)
        source = services_to_dot(model, policy)
    else:
        source = policy_to_dot(policy)

    if args.out:
        _write(args.out, source)
    else:
        _emit(source)
    return ExitStatus.OK


def cmd_merge(args: argparse.Namespace) -> ExitStatus:
    """
    Add hand-written purposes to an extraction result and validate the outcome

    The merged result is written to ``--out`` even if it is invalid.
    """
    policy, model, raw = parse_extraction(_read(args.result), lenient=args.lenient)
    fragment = parse_policy_fragment(_read(args.extra), lenient=args.lenient)
    merged = merge_fragment(policy, fragment)
    _write(args.out, serialize_extraction(merged, model.services, model.gov, raw))

    report = validate(merged, registry=load_defaults(args.defaults).registry)
    _emit(dump_json(report.to_dict()))
    return ExitStatus.OK if report.is_valid else ExitStatus.FAILED


def cmd_synth(args: argparse.Namespace) -> ExitStatus:
    """
    Write a seeded synthetic corpus
    """
    try:
        files = synthetic_corpus(
            n_controllers=args.controllers,
            n_endpoints=args.endpoints,
            n_entities=args.entities,
            n_without_data=args.without_data,
            seed=args.seed,
        )
    except ValueError as exc:
        _logger.error("%s", exc)
        return ExitStatus.ERROR

    written = write_corpus(files, args.out_dir)
    _logger.info("Wrote %d source file(s) below %s", len(written), args.out_dir)
    return ExitStatus.OK


def _add_lenient(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--lenient", action="store_true", help="Ignore unknown keys in documents"
    )


def _add_defaults(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--defaults",
        help="Defaults file (YAML), overrides the PURPOSEGRAPH_DEFAULTS environment "
        "variable",
    )


def build_parser() -> argparse.ArgumentParser:
    """
    Argument parser of the ``purposegraph`` command
    """
    parser = argparse.ArgumentParser(
        prog="purposegraph",
        description="Composed privacy purposes for annotated web services",
    )
    parser.add_argument("--version", action="version", version=__version__)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument(
        "-v", "--verbose", action="store_true", help="Log debug messages"
    )
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Log errors only")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    sub = commands.add_parser("extract", help="Extract purposes from MiniSvc sources")
    sub.add_argument("src_dir", help="Directory searched for .msvc files")
    sub.add_argument("--out", required=True, help="Extraction result (JSON)")
    sub.add_argument("--dot", help="Also write the purpose graph as DOT")
    sub.add_argument("--name", help="Corpus name, defaults to the directory name")
    sub.add_argument("--jobs", type=int, help="Parse files with this many workers")
    sub.add_argument("--progress", action="store_true", help="Show progress bars")
    _add_defaults(sub)
    sub.set_defaults(func=cmd_extract)

    sub = commands.add_parser("validate", help="Validate a policy")
    sub.add_argument("policy", help="Policy or extraction result (JSON)")
    sub.add_argument(
        "--strict-inheritance",
        action="store_true",
        help="Also check inheritance edges against the composition constraints",
    )
    _add_lenient(sub)
    _add_defaults(sub)
    sub.set_defaults(func=cmd_validate)

    sub = commands.add_parser("coverage", help="Check services against a policy")
    sub.add_argument("policy", help="Policy (JSON)")
    sub.add_argument("services", help="Service model or extraction result (JSON)")
    _add_lenient(sub)
    sub.set_defaults(func=cmd_coverage)

    sub = commands.add_parser("stats", help="Summarise an extraction result")
    sub.add_argument("result", help="Extraction result (JSON)")
    sub.add_argument("--json", action="store_true", help="Print JSON, not a table")
    _add_lenient(sub)
    sub.set_defaults(func=cmd_stats)

    sub = commands.add_parser("layers", help="Print the layers of the root purposes")
    sub.add_argument("policy", help="Policy (JSON)")
    sub.add_argument("--root", help="Only print the layers below this purpose")
    _add_lenient(sub)
    sub.set_defaults(func=cmd_layers)

    sub = commands.add_parser("graph", help="Render a policy as DOT")
    sub.add_argument("policy", help="Policy (JSON)")
    sub.add_argument(
        "--services", help="Render this service model with its gov relation instead"
    )
    sub.add_argument("--out", help="Write to this file instead of standard output")
    _add_lenient(sub)
    sub.set_defaults(func=cmd_graph)

    sub = commands.add_parser("merge", help="Add hand-written purposes to a result")
    sub.add_argument("result", help="Extraction result (JSON)")
    sub.add_argument("extra", help="Policy fragment (JSON)")
    sub.add_argument("--out", required=True, help="Merged extraction result (JSON)")
    _add_lenient(sub)
    _add_defaults(sub)
    sub.set_defaults(func=cmd_merge)

    sub = commands.add_parser("synth", help="Write a synthetic corpus")
    sub.add_argument("out_dir", help="Directory receiving the .msvc files")
    sub.add_argument("--controllers", type=int, default=30)
    sub.add_argument("--endpoints", type=int, default=245)
    sub.add_argument("--entities", type=int, default=19)
    sub.add_argument("--without-data", type=int, default=8)
    sub.add_argument("--seed", type=int, default=0)
    sub.set_defaults(func=cmd_synth)

    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    """
    Send the package's log messages to standard error
    """
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.WARNING
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))

    package_logger = logging.getLogger("purposegraph")
    package_logger.handlers[:] = [handler]
    package_logger.setLevel(level)
    package_logger.propagate = False


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the ``purposegraph`` command

    Parameters
    ----------
    argv
        Arguments without the program name, defaults to ``sys.argv[1:]``

    Returns
    -------
    int
        Exit code, see :class:`ExitStatus`
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help and --version exit with 0, usage errors with 2
        return int(exc.code or 0)

    configure_logging(args.verbose, args.quiet)
    try:
        return int(args.func(args))
    except (PurposeGraphError, OSError, UnicodeDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return int(ExitStatus.ERROR)
