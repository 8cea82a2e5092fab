"""Scoring matches against gold TP/FP labels"""

import csv
import io
import json
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import regex

from .engine import Match, MatchKey
from .exceptions import GoldError

logger = logging.getLogger(__name__)

GOLD_COLUMNS = ("rule_id", "file", "line", "first_pos", "second_pos", "label")
REPORT_COLUMNS = ("rule_id", "results", "tp", "fp", "unlabeled", "precision")
AGGREGATE_ID = "ALL"

_DIGITS_RE = regex.compile(r"(\d+)")


class Label(str, Enum):
    """Gold judgement of a match"""
    TP = "TP"
    FP = "FP"


@dataclass(frozen=True)
class GoldLabel:
    rule_id: str
    file_id: str
    line: int
    first_pos: int
    second_pos: int
    label: Label

    @property
    def key(self) -> MatchKey:
        return (self.rule_id, self.file_id, self.line, self.first_pos, self.second_pos)


@dataclass(frozen=True)
class RuleReport:
    """Per-rule tallies; results = tp + fp + unlabeled"""

    rule_id: str
    results: int = 0
    tp: int = 0
    fp: int = 0
    unlabeled: int = 0

    @property
    def precision(self) -> Optional[float]:
        """tp / (tp + fp), or None when no match is labeled"""
        judged = self.tp + self.fp
        if judged == 0:
            return None
        return self.tp / judged

    def to_dict(self) -> Dict[str, object]:
        return {
            "rule_id": self.rule_id,
            "results": self.results,
            "tp": self.tp,
            "fp": self.fp,
            "unlabeled": self.unlabeled,
            "precision": self.precision,
        }


def natural_key(rule_id: str) -> Tuple:
    """Sort key placing S2 before S10."""
    return tuple(int(part) if part.isdigit() else part for part in _DIGITS_RE.split(rule_id))


def _gold_int(value: str, name: str, row: int, minimum: int) -> int:
    try:
        number = int(value)
    except ValueError:
        raise GoldError(f"{name} must be an integer, got {value!r}", row=row)
    if number < minimum:
        raise GoldError(f"{name} must be ≥ {minimum}, got {number}", row=row)
    return number


def _read_rows(reader) -> Iterator[Tuple[int, List[str]]]:
    """Yield (row number, fields), reporting csv errors as GoldError."""
    while True:
        try:
            fields = next(reader)
        except StopIteration:
            return
        except csv.Error as e:
            raise GoldError(str(e), row=reader.line_num)
        yield reader.line_num, fields


def parse_gold(serialized: str) -> List[GoldLabel]:
    """
    Parse a gold label TSV file.

    The header ``rule_id file line first_pos second_pos label`` is required
    unless the file is empty; second_pos is 0 for prefix matches. A leading
    BOM is ignored.

    Raises:
        GoldError: On a malformed row, a label other than TP/FP or a repeated key
            (the message names the row number)
    """
    if serialized.startswith("\ufeff"):
        serialized = serialized[1:]
    if not serialized.strip():
        return []

    reader = csv.reader(io.StringIO(serialized), delimiter="\t", quoting=csv.QUOTE_NONE)
    rows = _read_rows(reader)
    _, header = next(rows)
    if tuple(header) != GOLD_COLUMNS:
        raise GoldError(f"expected tab-separated header: {' '.join(GOLD_COLUMNS)}", row=1)

    labels: List[GoldLabel] = []
    seen: Dict[MatchKey, int] = {}
    for row, fields in rows:
        if not fields:
            continue
        if len(fields) != len(GOLD_COLUMNS):
            raise GoldError(f"expected {len(GOLD_COLUMNS)} fields, got {len(fields)}", row=row)
        rule_id, file_id, line, first_pos, second_pos, label = fields
        if not rule_id or not file_id:
            raise GoldError("rule_id and file must not be empty", row=row)
        try:
            gold_label = Label(label)
        except ValueError:
            raise GoldError(f"label must be TP or FP, got {label!r}", row=row)

        item = GoldLabel(
            rule_id=rule_id,
            file_id=file_id,
            line=_gold_int(line, "line", row, 1),
            first_pos=_gold_int(first_pos, "first_pos", row, 1),
            second_pos=_gold_int(second_pos, "second_pos", row, 0),
            label=gold_label,
        )
        if item.key in seen:
            raise GoldError(f"duplicate key, first seen on row {seen[item.key]}", row=row)
        seen[item.key] = row
        labels.append(item)
    return labels


def score(
    matches: Sequence[Match],
    gold: Sequence[GoldLabel],
    rule_ids: Optional[Iterable[str]] = None,
) -> Tuple[List[RuleReport], List[MatchKey]]:
    """
    Join matches with gold labels and tally every rule.

    Args:
        matches: Engine output
        gold: Parsed gold labels
        rule_ids: Rules to report even when they have no match

    Returns:
        (reports sorted by rule id, gold keys that matched nothing, sorted)

    Example:
        >>> reports, orphans = score([], [], rule_ids=["S5"])
        >>> reports[0].results, reports[0].precision
        (0, None)
    """
    by_key = {label.key: label.label for label in gold}
    tallies: Dict[str, Dict[str, int]] = {}

    def _tally(rule_id: str) -> Dict[str, int]:
        return tallies.setdefault(rule_id, {"results": 0, "tp": 0, "fp": 0, "unlabeled": 0})

    for rule_id in rule_ids or ():
        _tally(rule_id)

    seen = set()
    for match in matches:
        tally = _tally(match.rule_id)
        tally["results"] += 1
        label = by_key.get(match.key)
        seen.add(match.key)
        if label == Label.TP:
            tally["tp"] += 1
        elif label == Label.FP:
            tally["fp"] += 1
        else:
            tally["unlabeled"] += 1

    orphans = sorted(key for key in by_key if key not in seen)
    if orphans:
        logger.info("%d gold labels match no emitted match", len(orphans))
    reports = [RuleReport(rule_id, **tallies[rule_id]) for rule_id in sorted(tallies, key=natural_key)]
    return reports, orphans


def aggregate(reports: Iterable[RuleReport], rule_id: str = AGGREGATE_ID) -> RuleReport:
    """Sum the counts of several reports into one row."""
    results = tp = fp = unlabeled = 0
    for report in reports:
        results += report.results
        tp += report.tp
        fp += report.fp
        unlabeled += report.unlabeled
    return RuleReport(rule_id, results, tp, fp, unlabeled)


def render_report(reports: Sequence[RuleReport], fmt: str = "tsv") -> bytes:
    """
    Serialize reports sorted by rule id, followed by an "ALL" aggregate.

    TSV prints precision with 4 decimals ("null" when undefined); JSON keeps
    full precision.
    """
    ordered = sorted(reports, key=lambda r: natural_key(r.rule_id))
    total = aggregate(ordered)
    if fmt == "json":
        data = {"rules": [r.to_dict() for r in ordered], "aggregate": total.to_dict()}
        return (json.dumps(data, ensure_ascii=False, indent=2) + "\n").encode("utf-8")

    lines = ["\t".join(REPORT_COLUMNS)]
    for report in [*ordered, total]:
        precision = "null" if report.precision is None else f"{report.precision:.4f}"
        lines.append("\t".join([
            report.rule_id, str(report.results), str(report.tp),
            str(report.fp), str(report.unlabeled), precision,
        ]))
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_report(data: Union[str, bytes]) -> List[RuleReport]:
    """Read back the per-rule rows of a JSON report."""
    payload = json.loads(data)
    return [
        RuleReport(
            rule_id=item["rule_id"],
            results=item["results"],
            tp=item["tp"],
            fp=item["fp"],
            unlabeled=item["unlabeled"],
        )
        for item in payload["rules"]
    ]
