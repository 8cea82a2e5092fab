"""TSV and JSON codecs for match, token and rule listings"""

import csv
import io
import json
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .engine import Match
from .exceptions import MatchFileError
from .rules import PairRule, RuleSet, render_ruleset
from .text import CorpusIndex

MATCH_COLUMNS = (
    "rule_id", "file", "line", "first_pos", "first_word",
    "second_pos", "second_word", "distance", "context",
)
TOKEN_COLUMNS = ("file", "line", "position", "word")
RULE_COLUMNS = ("rule_id", "group", "first", "second", "max_distance", "constraints")


def _tsv_field(value: Any) -> str:
    if value is None:
        return ""
    return str(value).replace("\t", " ").replace("\r", " ").replace("\n", " ")


def _tsv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> bytes:
    lines = ["\t".join(header)]
    lines.extend("\t".join(_tsv_field(v) for v in row) for row in rows)
    return ("\n".join(lines) + "\n").encode("utf-8")


def _json(data: Any) -> bytes:
    return (json.dumps(data, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def match_to_dict(match: Match) -> Dict[str, Any]:
    return {
        "rule_id": match.rule_id,
        "file": match.file_id,
        "line": match.line,
        "first_pos": match.first_pos,
        "first_word": match.first_word,
        "second_pos": match.second_pos,
        "second_word": match.second_word,
        "distance": match.distance,
        "context": match.context,
    }


def render_matches(matches: Sequence[Match], fmt: str = "tsv") -> bytes:
    """Serialize matches as TSV (with header) or as a JSON array."""
    if fmt == "json":
        return _json([match_to_dict(m) for m in matches])
    return _tsv(MATCH_COLUMNS, (
        (m.rule_id, m.file_id, m.line, m.first_pos, m.first_word,
         m.second_pos, m.second_word, m.distance, m.context)
        for m in matches
    ))


def _int_field(value: Any, name: str, where: str, optional: bool = False) -> Optional[int]:
    if optional and value in (None, ""):
        return None
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise MatchFileError(f"{where}: {name} must be an integer, got {value!r}")
    if number < 1:
        raise MatchFileError(f"{where}: {name} must be positive, got {number}")
    return number


def _match_from_fields(fields: Dict[str, Any], where: str) -> Match:
    second_pos = _int_field(fields.get("second_pos"), "second_pos", where, optional=True)
    second_word = fields.get("second_word") or None
    if (second_pos is None) != (second_word is None):
        raise MatchFileError(f"{where}: second_pos and second_word must be both set or both empty")
    rule_id = fields.get("rule_id")
    file_id = fields.get("file")
    first_word = fields.get("first_word")
    if not rule_id or not file_id or not first_word:
        raise MatchFileError(f"{where}: rule_id, file and first_word are required")
    return Match(
        rule_id=str(rule_id),
        file_id=str(file_id),
        line=_int_field(fields.get("line"), "line", where),
        first_pos=_int_field(fields.get("first_pos"), "first_pos", where),
        first_word=str(first_word),
        second_pos=second_pos,
        second_word=second_word,
        context=str(fields.get("context") or ""),
    )


def _read_rows(reader, source: str) -> Iterator[Tuple[int, List[str]]]:
    """Yield (row number, fields), reporting csv errors as MatchFileError."""
    while True:
        try:
            fields = next(reader)
        except StopIteration:
            return
        except csv.Error as e:
            raise MatchFileError(f"{source} row {reader.line_num}: {e}")
        yield reader.line_num, fields


def parse_matches(data: Union[str, bytes], source: str = "<matches>") -> List[Match]:
    """
    Read matches written by :func:`render_matches` in either format.

    Raises:
        MatchFileError: If the data is not a match listing
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise MatchFileError(f"{source}: invalid UTF-8 at byte offset {e.start}")
    if not data.strip():
        return []

    if data.lstrip().startswith("["):
        try:
            items = json.loads(data)
        except json.JSONDecodeError as e:
            raise MatchFileError(f"{source}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
        if not isinstance(items, list) or not all(isinstance(item, dict) for item in items):
            raise MatchFileError(f"{source}: expected a JSON array of match objects")
        return [_match_from_fields(item, f"{source} item {i}") for i, item in enumerate(items, start=1)]

    reader = csv.reader(io.StringIO(data), delimiter="\t", quoting=csv.QUOTE_NONE)
    rows = _read_rows(reader, source)
    _, header = next(rows)
    if tuple(header) != MATCH_COLUMNS:
        raise MatchFileError(f"{source}: unexpected header {header!r}")
    matches = []
    for number, row in rows:
        if not row:
            continue
        where = f"{source} row {number}"
        if len(row) != len(MATCH_COLUMNS):
            raise MatchFileError(f"{where}: expected {len(MATCH_COLUMNS)} fields, got {len(row)}")
        matches.append(_match_from_fields(dict(zip(MATCH_COLUMNS, row)), where))
    return matches


def render_tokens(idx: CorpusIndex) -> bytes:
    """TSV ``file, line, position, word`` in index order."""
    return _tsv(TOKEN_COLUMNS, (
        (t.file_id, t.line, t.position, t.surface) for t in idx.tokens()
    ))


def render_rules(rs: RuleSet, fmt: str = "tsv") -> bytes:
    """Human-readable rule listing (TSV) or the rule file itself (JSON)."""
    if fmt == "json":
        return render_ruleset(rs).encode("utf-8")
    rows = []
    for rule in rs.rules:
        if isinstance(rule, PairRule):
            rows.append((
                rule.id, rule.group.value, rule.first.describe(), rule.second.describe(),
                rule.max_distance, "; ".join(c.describe() for c in rule.constraints),
            ))
        else:
            rows.append((
                rule.id, "prefix", f"{rule.prefix}-", "", "",
                f"len(word) > {rule.min_char_len_exclusive}",
            ))
    return _tsv(RULE_COLUMNS, rows)
