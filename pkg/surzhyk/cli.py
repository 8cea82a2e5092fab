"""Command-line interface: match, evaluate, rules, tokenize

Data is written to standard output; diagnostics go to standard error.
"""

import argparse
import dataclasses
import logging
import sys
from enum import IntEnum
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .config import OUTPUT_FORMATS, RunConfig
from .engine import run
from .evaluation import parse_gold, render_report, score
from .exceptions import (
    ConfigurationError,
    CorpusError,
    GoldError,
    InputFileError,
    MatchFileError,
    RuleError,
    RuleSchemaError,
    SurzhykError,
)
from .output import parse_matches, render_matches, render_rules, render_tokens
from .rules import resolve_rules
from .text import index_corpus

logger = logging.getLogger(__name__)


class ExitStatus(IntEnum):
    """Process exit codes; scripts depend on these values"""
    OK = 0
    USAGE = 2
    IO = 3
    RULES = 4
    GOLD = 5


_EXIT_FOR_ERROR = (
    (ConfigurationError, ExitStatus.USAGE),
    (CorpusError, ExitStatus.IO),
    (InputFileError, ExitStatus.IO),
    (MatchFileError, ExitStatus.IO),
    (RuleError, ExitStatus.RULES),
    (GoldError, ExitStatus.GOLD),
)


def _emit(payload: bytes) -> None:
    """Write UTF-8 bytes to stdout regardless of the locale encoding."""
    sys.stdout.flush()
    buffer = getattr(sys.stdout, "buffer", None)
    if buffer is None:
        sys.stdout.write(payload.decode("utf-8"))
    else:
        buffer.write(payload)
        buffer.flush()


def _diagnose(message: str) -> None:
    print(message, file=sys.stderr)


def cmd_match(config: RunConfig) -> ExitStatus:
    """Run a rule set over corpus files and print the matches."""
    config.validate()
    rs = resolve_rules(config.rules_spec, strict_paper=config.strict_paper)
    idx = index_corpus(config.paths, workers=config.workers)
    matches = run(rs, idx, workers=config.workers)

    if config.context > 0:
        matches = [
            dataclasses.replace(m, context=idx.context(m.file_id, m.line, config.context))
            for m in matches
        ]
    logger.info("%d matches from %d rules", len(matches), len(rs))
    _emit(render_matches(matches, config.output_format))
    return ExitStatus.OK


def _read_text(path: str, what: str) -> str:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise InputFileError(f"{path}: cannot read {what}: {e.strerror or e}", path=path)
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise InputFileError(f"{path}: invalid UTF-8 at byte offset {e.start}", path=path)


def cmd_evaluate(
    matches_path: str,
    gold_path: str,
    output_format: str = "tsv",
    rules_spec: Optional[str] = None,
) -> ExitStatus:
    """
    Score a match file against gold labels and print per-rule reports.

    Gold keys that match nothing are listed on stderr but do not fail the run.
    """
    if output_format not in OUTPUT_FORMATS:
        raise ConfigurationError(f"output format must be one of {', '.join(OUTPUT_FORMATS)}")
    matches = parse_matches(_read_text(matches_path, "match file"), source=matches_path)
    gold = parse_gold(_read_text(gold_path, "gold file"))
    rule_ids = resolve_rules(rules_spec).rule_ids if rules_spec else None

    reports, orphans = score(matches, gold, rule_ids=rule_ids)
    for rule_id, file_id, line, first_pos, second_pos in orphans:
        _diagnose(f"orphan gold key: {rule_id}\t{file_id}\t{line}\t{first_pos}\t{second_pos}")
    _emit(render_report(reports, output_format))
    return ExitStatus.OK


def cmd_rules(rules_spec: str, output_format: str = "tsv", strict_paper: bool = False) -> ExitStatus:
    """List the rules of a set; with a file path this validates the file."""
    rs = resolve_rules(rules_spec, strict_paper=strict_paper)
    _emit(render_rules(rs, output_format))
    return ExitStatus.OK


def cmd_tokenize(paths: Sequence[str], workers: int = 1) -> ExitStatus:
    """Print the token stream of the corpus in index order."""
    idx = index_corpus(paths, workers=workers)
    _emit(render_tokens(idx))
    return ExitStatus.OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="surzhyk",
        description="Detect Surzhyk verb patterns in plain-text corpora and evaluate them.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level", default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="diagnostic verbosity on stderr (default: WARNING)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rules_help = "builtin:general|specific|prefix|all or a JSON rule file"

    match = sub.add_parser("match", help="apply rules to corpus files")
    match.add_argument("paths", nargs="+", help="corpus files or directories of *.txt")
    match.add_argument("--rules", help=f"{rules_help} (default: builtin:all)")
    match.add_argument("--format", choices=OUTPUT_FORMATS)
    match.add_argument("--strict-paper", action="store_true",
                       help="read the 'ми'/'самі' anchors as word-final patterns")
    match.add_argument("--context", type=int, metavar="N",
                       help="include N neighbouring lines on each side in the context column")
    match.add_argument("--workers", type=int, metavar="N", help="parallel ingestion/matching threads")

    evaluate = sub.add_parser("evaluate", help="score a match file against gold labels")
    evaluate.add_argument("matches", help="output of 'surzhyk match' (TSV or JSON)")
    evaluate.add_argument("gold", help="gold label TSV")
    evaluate.add_argument("--format", choices=OUTPUT_FORMATS, default="tsv")
    evaluate.add_argument("--rules", help=f"{rules_help}; also report its rules with no matches")

    rules = sub.add_parser("rules", help="list or lint a rule set")
    rules.add_argument("--rules", help=f"{rules_help} (default: builtin:all)")
    rules.add_argument("--format", choices=OUTPUT_FORMATS, default="tsv",
                       help="tsv listing, or json rule file")
    rules.add_argument("--strict-paper", action="store_true")

    tokenize = sub.add_parser("tokenize", help="print the token stream")
    tokenize.add_argument("paths", nargs="+")
    tokenize.add_argument("--workers", type=int, metavar="N")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    """Environment defaults overridden by command-line flags."""
    config = RunConfig.from_env()
    config.paths = list(getattr(args, "paths", None) or [])
    if getattr(args, "rules", None):
        config.rules_spec = args.rules
    if getattr(args, "format", None):
        config.output_format = args.format
    if getattr(args, "context", None) is not None:
        config.context = args.context
    if getattr(args, "workers", None) is not None:
        config.workers = args.workers
    config.strict_paper = bool(getattr(args, "strict_paper", False))
    return config


def _dispatch(args: argparse.Namespace) -> ExitStatus:
    if args.command == "evaluate":
        return cmd_evaluate(args.matches, args.gold, args.format, args.rules)

    config = _run_config(args)
    config.validate()
    if args.command == "match":
        return cmd_match(config)
    if args.command == "rules":
        return cmd_rules(config.rules_spec, args.format, config.strict_paper)
    return cmd_tokenize(config.paths, workers=config.workers)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the ``surzhyk`` command.

    Example:
        $ surzhyk match corpus/ --rules builtin:specific > matches.tsv
        $ surzhyk evaluate matches.tsv gold.tsv --rules builtin:specific
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        return int(_dispatch(args))
    except RuleSchemaError as e:
        for violation in e.violations:
            _diagnose(f"error: {violation}")
        return int(ExitStatus.RULES)
    except SurzhykError as e:
        _diagnose(f"error: {e}")
        for error_cls, status in _EXIT_FOR_ERROR:
            if isinstance(e, error_cls):
                return int(status)
        return int(ExitStatus.USAGE)


if __name__ == "__main__":
    sys.exit(main())
