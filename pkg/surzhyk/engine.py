"""Pair and prefix rule matching over a corpus index"""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .rules import (
    AnchorMode,
    Constraint,
    ConstraintKind,
    ConstraintTarget,
    PairRule,
    PatternAnchor,
    PrefixRule,
    RuleSet,
)
from .text import CorpusIndex, Token

logger = logging.getLogger(__name__)

MatchKey = Tuple[str, str, int, int, int]


@dataclass(frozen=True)
class Match:
    """
    One rule firing.

    Prefix matches record their single token in ``first_*`` and leave
    ``second_pos``/``second_word`` as None.
    """

    rule_id: str
    file_id: str
    line: int
    first_pos: int
    first_word: str
    second_pos: Optional[int] = None
    second_word: Optional[str] = None
    context: str = ""

    @property
    def distance(self) -> Optional[int]:
        if self.second_pos is None:
            return None
        return self.second_pos - self.first_pos

    @property
    def key(self) -> MatchKey:
        """Join key shared with gold labels; second_pos is 0 for prefix matches."""
        return (self.rule_id, self.file_id, self.line, self.first_pos, self.second_pos or 0)

    def sort_key(self) -> Tuple[str, int, int, int, str]:
        return (self.file_id, self.line, self.first_pos, self.second_pos or 0, self.rule_id)


def anchor_matches(anchor: PatternAnchor, token: Token) -> bool:
    """
    Test a token surface against an anchor.

    Example:
        >>> anchor_matches(PatternAnchor(AnchorMode.ENDS_WITH, "єм"), Token("f", 1, 3, "працюєм"))
        True
    """
    if anchor.mode == AnchorMode.EXACT_WORD:
        return token.surface == anchor.text
    if anchor.mode == AnchorMode.ENDS_WITH:
        return token.surface.endswith(anchor.text)
    return token.surface.startswith(anchor.text)


def constraint_holds(constraint: Constraint, first: Token, second: Token) -> bool:
    token = first if constraint.target == ConstraintTarget.FIRST else second
    if constraint.kind == ConstraintKind.EXACT_EQUALS:
        return token.surface == constraint.value
    return token.char_len > constraint.value


def _line_context(line_tokens: Sequence[Token]) -> str:
    return " ".join(token.surface for token in line_tokens)


def match_pair_rule(
    rule: PairRule,
    line_tokens: Sequence[Token],
    context: Optional[str] = None,
) -> List[Match]:
    """
    Apply a pair rule to the tokens of one (file, line).

    Every qualifying ordered pair is returned; a token may pair with several
    partners and play either role in different matches.

    Args:
        rule: Pair rule to apply
        line_tokens: Tokens of a single line, positions ascending
        context: Line text for the match records (defaults to the joined tokens)

    Returns:
        Matches ordered by (first_pos, second_pos)
    """
    if not line_tokens:
        return []
    if context is None:
        context = _line_context(line_tokens)
    by_position: Dict[int, Token] = {token.position: token for token in line_tokens}

    matches: List[Match] = []
    for first in line_tokens:
        if not anchor_matches(rule.first, first):
            continue
        for distance in range(1, rule.max_distance + 1):
            second = by_position.get(first.position + distance)
            if second is None or not anchor_matches(rule.second, second):
                continue
            if not all(constraint_holds(c, first, second) for c in rule.constraints):
                continue
            matches.append(Match(
                rule_id=rule.id,
                file_id=first.file_id,
                line=first.line,
                first_pos=first.position,
                first_word=first.surface,
                second_pos=second.position,
                second_word=second.surface,
                context=context,
            ))
    return matches


def match_prefix_rule(
    rule: PrefixRule,
    line_tokens: Sequence[Token],
    context: Optional[str] = None,
) -> List[Match]:
    """Return one Match per token starting with the prefix and longer than the minimum."""
    if context is None:
        context = _line_context(line_tokens)
    return [
        Match(
            rule_id=rule.id,
            file_id=token.file_id,
            line=token.line,
            first_pos=token.position,
            first_word=token.surface,
            context=context,
        )
        for token in line_tokens
        if token.surface.startswith(rule.prefix) and token.char_len > rule.min_char_len_exclusive
    ]


def match_line(rs: RuleSet, line_tokens: Sequence[Token], context: Optional[str] = None) -> List[Match]:
    """Apply every rule of a set to one line."""
    matches: List[Match] = []
    for rule in rs.pair_rules:
        matches.extend(match_pair_rule(rule, line_tokens, context))
    for prefix_rule in rs.prefix_rules:
        matches.extend(match_prefix_rule(prefix_rule, line_tokens, context))
    return matches


def run(rs: RuleSet, idx: CorpusIndex, workers: int = 1) -> List[Match]:
    """
    Apply a rule set to a whole corpus.

    Lines are matched independently, concurrently when `workers` > 1, and the
    result is sorted by (file_id, line, first_pos, second_pos, rule_id), so the
    output does not depend on `workers`. The same token pair matched by two
    rules yields two records.

    Args:
        rs: Rules to apply
        idx: Indexed corpus
        workers: Number of matching threads

    Returns:
        Sorted list of matches
    """
    groups = list(idx.groups())

    def _match_group(group) -> List[Match]:
        file_id, line, tokens = group
        return match_line(rs, tokens, idx.line_text(file_id, line))

    if workers > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_group = list(pool.map(_match_group, groups))
    else:
        per_group = [_match_group(group) for group in groups]

    matches = sorted((m for found in per_group for m in found), key=Match.sort_key)

    counts = Counter(m.rule_id for m in matches)
    for rule_id in rs.rule_ids:
        logger.info("rule %s: %d matches", rule_id, counts.get(rule_id, 0))
    return matches
