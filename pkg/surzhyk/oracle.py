"""Exhaustive reference matcher used to check the engine in tests"""

from typing import List

from .engine import Match
from .rules import AnchorMode, ConstraintKind, ConstraintTarget, PairRule, PatternAnchor, RuleSet
from .text import CorpusIndex, Token


def _anchor_ok(anchor: PatternAnchor, surface: str) -> bool:
    size = len(anchor.text)
    if anchor.mode == AnchorMode.EXACT_WORD:
        return surface == anchor.text
    if len(surface) < size:
        return False
    if anchor.mode == AnchorMode.ENDS_WITH:
        return surface[len(surface) - size:] == anchor.text
    return surface[:size] == anchor.text


def _pair_ok(rule: PairRule, first: Token, second: Token) -> bool:
    if not _anchor_ok(rule.first, first.surface) or not _anchor_ok(rule.second, second.surface):
        return False
    for c in rule.constraints:
        token = first if c.target == ConstraintTarget.FIRST else second
        if c.kind == ConstraintKind.EXACT_EQUALS:
            if token.surface != c.value:
                return False
        elif len(token.surface) <= c.value:
            return False
    return True


def brute_force_oracle(rs: RuleSet, idx: CorpusIndex) -> List[Match]:
    """
    Same contract as :func:`surzhyk.engine.run`, computed by testing every
    ordered token pair of every line against every pair rule, and every token
    against every prefix rule. Single-threaded.
    """
    prefixes = [
        (rule, PatternAnchor(AnchorMode.STARTS_WITH, rule.prefix)) for rule in rs.prefix_rules
    ]

    found: List[Match] = []
    for file_id, line, tokens in idx.groups():
        context = idx.line_text(file_id, line)
        for first in tokens:
            for second in tokens:
                distance = second.position - first.position
                for rule in rs.pair_rules:
                    if 0 < distance <= rule.max_distance and _pair_ok(rule, first, second):
                        found.append(Match(
                            rule.id, file_id, line, first.position, first.surface,
                            second.position, second.surface, context,
                        ))

            for rule, anchor in prefixes:
                if _anchor_ok(anchor, first.surface) and len(first.surface) > rule.min_char_len_exclusive:
                    found.append(Match(rule.id, file_id, line, first.position, first.surface, context=context))

    found.sort(key=lambda m: (m.file_id, m.line, m.first_pos, m.second_pos or 0, m.rule_id))
    return found
