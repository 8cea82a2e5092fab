"""Rule model, built-in Surzhyk rule sets and rule-file loading"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

from .exceptions import (
    ConfigurationError,
    DuplicateRuleError,
    RuleError,
    RuleSchemaError,
    RuleSyntaxError,
)
from .text import normalize

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"
BUILTIN_NAMES = ("general", "specific", "prefix", "all")

# Word distance used by every published rule
PAPER_DISTANCE = 3

# Surzhyk first person plural present endings
SURZHYK_ENDINGS = ("ем", "єм", "им", "їм")


class AnchorMode(str, Enum):
    """How an anchor text is compared against a token surface"""
    EXACT_WORD = "exact_word"
    ENDS_WITH = "ends_with"
    STARTS_WITH = "starts_with"


class RuleGroup(str, Enum):
    """Origin of a pair rule"""
    GENERAL = "general"
    SPECIFIC = "specific"
    USER = "user"


class ConstraintTarget(str, Enum):
    """Which token of a pair a constraint inspects"""
    FIRST = "first"
    SECOND = "second"


class ConstraintKind(str, Enum):
    """Post-filter applied to a matched token"""
    EXACT_EQUALS = "exact_equals"
    CHAR_LEN_GREATER_THAN = "char_len_greater_than"


@dataclass(frozen=True)
class PatternAnchor:
    mode: AnchorMode
    text: str

    def describe(self) -> str:
        """Render in the rule-listing notation: "ми", "-ем", "под-"."""
        if self.mode == AnchorMode.ENDS_WITH:
            return f"-{self.text}"
        if self.mode == AnchorMode.STARTS_WITH:
            return f"{self.text}-"
        return self.text


@dataclass(frozen=True)
class Constraint:
    target: ConstraintTarget
    kind: ConstraintKind
    value: Union[str, int]

    def describe(self) -> str:
        if self.kind == ConstraintKind.EXACT_EQUALS:
            return f"{self.target.value} = {self.value}"
        return f"len({self.target.value}) > {self.value}"


@dataclass(frozen=True)
class PairRule:
    """
    Anchor token followed, within `max_distance` positions, by a token with a
    word-final pattern; `constraints` filter the pair afterwards.
    """

    id: str
    group: RuleGroup
    first: PatternAnchor
    second: PatternAnchor
    max_distance: int
    constraints: Tuple[Constraint, ...] = ()


@dataclass(frozen=True)
class PrefixRule:
    """Single token starting with `prefix` and longer than `min_char_len_exclusive`"""

    id: str
    prefix: str
    min_char_len_exclusive: int


Rule = Union[PairRule, PrefixRule]


@dataclass(frozen=True)
class RuleSet:
    """Immutable collection of rules; ids are unique across both lists"""

    name: str
    pair_rules: Tuple[PairRule, ...] = field(default_factory=tuple)
    prefix_rules: Tuple[PrefixRule, ...] = field(default_factory=tuple)

    def __post_init__(self):
        seen = set()
        for rule in self.rules:
            if rule.id in seen:
                raise DuplicateRuleError(rule.id)
            seen.add(rule.id)

    @property
    def rules(self) -> List[Rule]:
        return [*self.pair_rules, *self.prefix_rules]

    @property
    def rule_ids(self) -> List[str]:
        return [rule.id for rule in self.rules]

    def __len__(self) -> int:
        return len(self.pair_rules) + len(self.prefix_rules)


def _check_text(text: Any, where: str) -> List[str]:
    if not isinstance(text, str) or not text:
        return [f"{where} must be a non-empty string"]
    violations = []
    if normalize(text) != text:
        violations.append(f"{where} must be lowercase NFC")
    if any(ch.isspace() for ch in text):
        violations.append(f"{where} must not contain whitespace")
    return violations


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def validate_rule(rule: Rule) -> List[str]:
    """
    Check a rule against the invariants of its type.

    Args:
        rule: PairRule or PrefixRule

    Returns:
        Every violated invariant, prefixed with the rule id; empty when valid

    Example:
        >>> validate_rule(PrefixRule("P9", "под", 2))
        ['P9: min_char_len_exclusive ≥ length(prefix) (2 < 3)']
    """
    violations: List[str] = []
    label = rule.id or "<no id>"
    if not isinstance(rule.id, str) or not rule.id:
        violations.append(f"{label}: id must be a non-empty string")

    if isinstance(rule, PrefixRule):
        violations.extend(f"{label}: {v}" for v in _check_text(rule.prefix, "prefix"))
        if not _is_int(rule.min_char_len_exclusive) or rule.min_char_len_exclusive < 1:
            violations.append(f"{label}: min_char_len_exclusive ≥ 1")
        elif isinstance(rule.prefix, str) and rule.min_char_len_exclusive < len(rule.prefix):
            violations.append(
                f"{label}: min_char_len_exclusive ≥ length(prefix) "
                f"({rule.min_char_len_exclusive} < {len(rule.prefix)})"
            )
        return violations

    for name, anchor in (("first", rule.first), ("second", rule.second)):
        violations.extend(f"{label}: {v}" for v in _check_text(anchor.text, f"{name}.text"))
    if rule.second.mode != AnchorMode.ENDS_WITH:
        violations.append(f"{label}: second pattern must be ends_with")
    if not _is_int(rule.max_distance) or rule.max_distance < 1:
        violations.append(f"{label}: max_distance ≥ 1 (got {rule.max_distance!r})")

    for i, constraint in enumerate(rule.constraints, start=1):
        where = f"{label}: constraint {i}"
        if constraint.kind == ConstraintKind.EXACT_EQUALS:
            violations.extend(f"{where}: {v}" for v in _check_text(constraint.value, "value"))
        elif not _is_int(constraint.value) or constraint.value < 1:
            violations.append(f"{where}: char_len_greater_than needs an integer n ≥ 1")
    return violations


def _ends(text: str) -> PatternAnchor:
    return PatternAnchor(AnchorMode.ENDS_WITH, text)


def _word(text: str, strict_paper: bool) -> PatternAnchor:
    # strict: "руками" counts as an occurrence of "ми"
    return PatternAnchor(AnchorMode.ENDS_WITH if strict_paper else AnchorMode.EXACT_WORD, text)


def _longer(target: ConstraintTarget, n: int) -> Constraint:
    return Constraint(target, ConstraintKind.CHAR_LEN_GREATER_THAN, n)


def _general_rules(strict_paper: bool) -> Tuple[PairRule, ...]:
    g1_constraints: Tuple[Constraint, ...] = ()
    if strict_paper:
        g1_constraints = (Constraint(ConstraintTarget.FIRST, ConstraintKind.EXACT_EQUALS, "ми"),)
    group = RuleGroup.GENERAL
    return (
        PairRule("G1", group, _word("ми", strict_paper), _ends("м"), PAPER_DISTANCE, g1_constraints),
        PairRule("G2", group, _word("самі", strict_paper), _ends("м"), PAPER_DISTANCE),
        PairRule(
            "G3", group, _ends("м"), _ends("ти"), PAPER_DISTANCE,
            (_longer(ConstraintTarget.SECOND, 2),),
        ),
        PairRule("G4", group, _ends("м"), _ends("ть"), PAPER_DISTANCE),
    )


def _specific_rules(strict_paper: bool) -> Tuple[PairRule, ...]:
    rules: List[PairRule] = []

    # S1-S8: pronoun anchor + Surzhyk ending; "їм" alone is the dative pronoun
    for word in ("ми", "самі"):
        for ending in SURZHYK_ENDINGS:
            constraints = (_longer(ConstraintTarget.SECOND, 2),) if ending == "їм" else ()
            rules.append(PairRule(
                f"S{len(rules) + 1}", RuleGroup.SPECIFIC,
                _word(word, strict_paper), _ends(ending), PAPER_DISTANCE, constraints,
            ))

    # S9-S16: Surzhyk ending + infinitive; bare "ти" is the pronoun
    for final in ("ти", "ть"):
        for ending in SURZHYK_ENDINGS:
            filters: List[Constraint] = []
            if final == "ти":
                filters.append(_longer(ConstraintTarget.SECOND, 2))
            if ending == "їм":
                filters.append(_longer(ConstraintTarget.FIRST, 2))
            rules.append(PairRule(
                f"S{len(rules) + 1}", RuleGroup.SPECIFIC,
                _ends(ending), _ends(final), PAPER_DISTANCE, tuple(filters),
            ))
    return tuple(rules)


def _prefix_rules() -> Tuple[PrefixRule, ...]:
    # "под" on its own is the preposition
    return (PrefixRule("P1", "под", 3),)


def builtin_ruleset(name: str, strict_paper: bool = False) -> RuleSet:
    """
    Return one of the shipped rule sets.

    Args:
        name: "general" (G1-G4), "specific" (S1-S16), "prefix" (P1) or "all"
        strict_paper: Read the "ми"/"самі" anchors as word-final patterns, keeping
            the exact-word requirement only on G1

    Returns:
        A new, structurally equal RuleSet on every call

    Raises:
        ConfigurationError: If the name is unknown

    Example:
        >>> [r.id for r in builtin_ruleset("general").pair_rules]
        ['G1', 'G2', 'G3', 'G4']
    """
    if name == "general":
        return RuleSet(name, _general_rules(strict_paper))
    if name == "specific":
        return RuleSet(name, _specific_rules(strict_paper))
    if name == "prefix":
        return RuleSet(name, (), _prefix_rules())
    if name == "all":
        return RuleSet(
            name,
            _general_rules(strict_paper) + _specific_rules(strict_paper),
            _prefix_rules(),
        )
    raise ConfigurationError(
        f"unknown built-in rule set {name!r} (expected one of {', '.join(BUILTIN_NAMES)})"
    )


_RULESET_KEYS = {"name", "pair_rules", "prefix_rules"}
_PAIR_KEYS = {"id", "group", "first", "second", "max_distance", "constraints"}
_PAIR_REQUIRED = {"id", "first", "second", "max_distance"}
_ANCHOR_KEYS = {"mode", "text"}
_CONSTRAINT_KEYS = {"target", "kind", "value"}
_PREFIX_KEYS = {"id", "prefix", "min_char_len_exclusive"}


def _check_keys(data: Any, allowed: set, required: set, where: str, violations: List[str]) -> bool:
    if not isinstance(data, dict):
        violations.append(f"{where}: expected an object")
        return False
    for key in sorted(set(data) - allowed):
        violations.append(f"{where}: unknown key {key!r}")
    for key in sorted(required - set(data)):
        violations.append(f"{where}: missing key {key!r}")
    return not (required - set(data))


def _enum_value(enum_cls, value: Any, where: str, violations: List[str]):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(member.value for member in enum_cls)
        violations.append(f"{where}: {value!r} is not one of {allowed}")
        return None


def _parse_anchor(data: Any, where: str, violations: List[str]):
    if not _check_keys(data, _ANCHOR_KEYS, _ANCHOR_KEYS, where, violations):
        return None
    mode = _enum_value(AnchorMode, data["mode"], f"{where}.mode", violations)
    if mode is None:
        return None
    return PatternAnchor(mode, data["text"])


def _parse_constraint(data: Any, where: str, violations: List[str]):
    if not _check_keys(data, _CONSTRAINT_KEYS, _CONSTRAINT_KEYS, where, violations):
        return None
    target = _enum_value(ConstraintTarget, data["target"], f"{where}.target", violations)
    kind = _enum_value(ConstraintKind, data["kind"], f"{where}.kind", violations)
    if target is None or kind is None:
        return None
    return Constraint(target, kind, data["value"])


def _parse_pair_rule(data: Any, index: int, violations: List[str]):
    where = f"pair_rules[{index}]"
    if isinstance(data, dict) and isinstance(data.get("id"), str):
        where = f"pair rule {data['id']!r}"
    if not _check_keys(data, _PAIR_KEYS, _PAIR_REQUIRED, where, violations):
        return None

    before = len(violations)
    group = _enum_value(RuleGroup, data.get("group", "user"), f"{where}.group", violations)
    first = _parse_anchor(data["first"], f"{where}.first", violations)
    second = _parse_anchor(data["second"], f"{where}.second", violations)
    raw_constraints = data.get("constraints", [])
    constraints = []
    if not isinstance(raw_constraints, list):
        violations.append(f"{where}.constraints: expected a list")
    else:
        for i, item in enumerate(raw_constraints, start=1):
            constraints.append(_parse_constraint(item, f"{where}.constraints[{i}]", violations))
    if len(violations) > before:
        return None

    rule = PairRule(data["id"], group, first, second, data["max_distance"], tuple(constraints))
    violations.extend(validate_rule(rule))
    return rule


def _parse_prefix_rule(data: Any, index: int, violations: List[str]):
    where = f"prefix_rules[{index}]"
    if isinstance(data, dict) and isinstance(data.get("id"), str):
        where = f"prefix rule {data['id']!r}"
    if not _check_keys(data, _PREFIX_KEYS, _PREFIX_KEYS, where, violations):
        return None
    rule = PrefixRule(data["id"], data["prefix"], data["min_char_len_exclusive"])
    violations.extend(validate_rule(rule))
    return rule


def parse_ruleset(serialized: str) -> RuleSet:
    """
    Parse and validate a JSON rule file.

    Args:
        serialized: Rule file contents

    Returns:
        Validated RuleSet

    Raises:
        RuleSyntaxError: If the text is not JSON (line and column reported)
        RuleSchemaError: If keys are unknown/missing or a rule is invalid
        DuplicateRuleError: If an id is declared twice
    """
    try:
        data = json.loads(serialized)
    except json.JSONDecodeError as e:
        raise RuleSyntaxError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")

    violations: List[str] = []
    if not _check_keys(data, _RULESET_KEYS, {"name"}, "rule file", violations):
        raise RuleSchemaError(violations)
    if not isinstance(data["name"], str) or not data["name"]:
        violations.append("rule file: name must be a non-empty string")

    pair_rules: List[PairRule] = []
    prefix_rules: List[PrefixRule] = []
    for key, parser, out in (
        ("pair_rules", _parse_pair_rule, pair_rules),
        ("prefix_rules", _parse_prefix_rule, prefix_rules),
    ):
        items = data.get(key, [])
        if not isinstance(items, list):
            violations.append(f"rule file: {key} must be a list")
            continue
        for index, item in enumerate(items):
            rule = parser(item, index, violations)
            if rule is not None:
                out.append(rule)

    if violations:
        raise RuleSchemaError(violations)

    rs = RuleSet(data["name"], tuple(pair_rules), tuple(prefix_rules))
    logger.debug("parsed rule set %s: %d rules", rs.name, len(rs))
    return rs


def _anchor_to_dict(anchor: PatternAnchor) -> Dict[str, Any]:
    return {"mode": anchor.mode.value, "text": anchor.text}


def ruleset_to_dict(rs: RuleSet) -> Dict[str, Any]:
    return {
        "name": rs.name,
        "pair_rules": [
            {
                "id": rule.id,
                "group": rule.group.value,
                "first": _anchor_to_dict(rule.first),
                "second": _anchor_to_dict(rule.second),
                "max_distance": rule.max_distance,
                "constraints": [
                    {"target": c.target.value, "kind": c.kind.value, "value": c.value}
                    for c in rule.constraints
                ],
            }
            for rule in rs.pair_rules
        ],
        "prefix_rules": [
            {
                "id": rule.id,
                "prefix": rule.prefix,
                "min_char_len_exclusive": rule.min_char_len_exclusive,
            }
            for rule in rs.prefix_rules
        ],
    }


def render_ruleset(rs: RuleSet) -> str:
    """Serialize a RuleSet in the rule-file format accepted by parse_ruleset."""
    return json.dumps(ruleset_to_dict(rs), ensure_ascii=False, indent=2) + "\n"


def load_ruleset(path: Union[str, Path]) -> RuleSet:
    """Read and parse a rule file from disk."""
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise RuleError(f"{path}: {e.strerror or e}")
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise RuleSyntaxError(f"{path}: invalid UTF-8 at byte offset {e.start}")
    return parse_ruleset(text)


def resolve_rules(rules_spec: str, strict_paper: bool = False) -> RuleSet:
    """
    Turn a ``builtin:NAME`` reference or a file path into a RuleSet.

    Raises:
        ConfigurationError: If a built-in name is unknown
        RuleError: If the rule file cannot be read or is invalid
    """
    if rules_spec.startswith(BUILTIN_PREFIX):
        return builtin_ruleset(rules_spec[len(BUILTIN_PREFIX):], strict_paper=strict_paper)
    if strict_paper:
        logger.warning("--strict-paper only affects built-in rule sets; ignored for %s", rules_spec)
    return load_ruleset(rules_spec)
