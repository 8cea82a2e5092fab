"""Engine against the exhaustive oracle, plus randomized window/constraint checks"""

import random

import pytest

from surzhyk.engine import constraint_holds, match_pair_rule, run
from surzhyk.oracle import brute_force_oracle
from surzhyk.rules import (
    AnchorMode,
    Constraint,
    ConstraintKind,
    ConstraintTarget,
    PairRule,
    PatternAnchor,
    PrefixRule,
    RuleGroup,
    RuleSet,
    builtin_ruleset,
)
from surzhyk.text import Document, index_corpus, normalize, tokenize

from .conftest import CORPUS_DIR, make_index, make_multi_index

ALPHABET = "аеєиїмтьпод"
WORDS = ["ми", "самі", "ти", "їм", "под", "будем", "ходить", "працюєм", "устроїм"]
PATTERNS = ["м", "ем", "єм", "им", "їм", "ти", "ть", "ми", "самі", "под", "и"]

RULESETS = [
    builtin_ruleset("all"),
    builtin_ruleset("all", strict_paper=True),
    builtin_ruleset("specific"),
]


def _word(rng):
    if rng.random() < 0.3:
        return rng.choice(WORDS)
    return "".join(rng.choice(ALPHABET) for _ in range(rng.randint(1, 6)))


def _line(rng, max_tokens=50):
    return " ".join(_word(rng) for _ in range(rng.randint(0, max_tokens)))


def _corpus(rng):
    files = rng.randint(1, 3)
    total_lines = rng.randint(0, 20)
    docs = [[] for _ in range(files)]
    for _ in range(total_lines):
        rng.choice(docs).append(_line(rng))
    return make_multi_index(docs)


def _random_rule(rng, rule_id="R1"):
    constraints = []
    for _ in range(rng.randint(0, 2)):
        target = rng.choice(list(ConstraintTarget))
        if rng.random() < 0.5:
            constraints.append(Constraint(target, ConstraintKind.CHAR_LEN_GREATER_THAN, rng.randint(1, 5)))
        else:
            constraints.append(Constraint(target, ConstraintKind.EXACT_EQUALS, rng.choice(WORDS)))
    return PairRule(
        rule_id, RuleGroup.USER,
        PatternAnchor(rng.choice(list(AnchorMode)), rng.choice(PATTERNS)),
        PatternAnchor(AnchorMode.ENDS_WITH, rng.choice(PATTERNS)),
        rng.randint(1, 5),
        tuple(constraints),
    )


def test_oracle_agrees_on_fixture_corpus():
    idx = index_corpus([CORPUS_DIR])
    rs = builtin_ruleset("all")
    assert run(rs, idx) == brute_force_oracle(rs, idx)


def test_oracle_on_empty_ruleset():
    assert brute_force_oracle(RuleSet("empty"), make_index(["ми тут працюєм"])) == []


def test_oracle_counts_each_rule():
    matches = brute_force_oracle(builtin_ruleset("all"), make_index(["ми тут працюєм"]))
    assert [m.rule_id for m in matches] == ["G1", "S2"]


def test_engine_matches_oracle_on_random_corpora():
    rng = random.Random(20201)
    for i in range(1000):
        idx = _corpus(rng)
        rs = RULESETS[i % len(RULESETS)]
        assert run(rs, idx) == brute_force_oracle(rs, idx), f"corpus {i}"


@pytest.mark.parametrize("seed", range(5))
def test_engine_matches_oracle_on_random_rulesets(seed):
    rng = random.Random(seed)
    for i in range(100):
        pair_rules = tuple(_random_rule(rng, f"R{j}") for j in range(rng.randint(0, 4)))
        prefix_rules = (PrefixRule("P1", rng.choice(["под", "по", "п"]), rng.randint(3, 5)),)
        rs = RuleSet("random", pair_rules, prefix_rules)
        idx = _corpus(rng)
        assert run(rs, idx) == brute_force_oracle(rs, idx), f"seed {seed} case {i}"


def test_window_and_constraints_hold_for_random_rules():
    rng = random.Random(7)
    for _ in range(10_000):
        rule = _random_rule(rng)
        tokens = tokenize(Document("f.txt", (normalize(_line(rng, 12)),)))
        by_position = {t.position: t for t in tokens}
        for match in match_pair_rule(rule, tokens):
            assert 0 < match.distance <= rule.max_distance
            first, second = by_position[match.first_pos], by_position[match.second_pos]
            assert (first.surface, second.surface) == (match.first_word, match.second_word)
            assert all(constraint_holds(c, first, second) for c in rule.constraints)


@pytest.mark.parametrize("filler,expected", [
    (["а", "б"], 1),
    (["а", "б", "в"], 0),
])
def test_window_boundary(filler, expected):
    rule = builtin_ruleset("specific").pair_rules[1]
    tokens = tokenize(Document("f.txt", (" ".join(["ми", *filler, "працюєм"]),)))
    matches = match_pair_rule(rule, tokens)
    assert len(matches) == expected
    if matches:
        assert matches[0].distance == 3


def test_oracle_applies_each_rule_window_separately():
    near = PairRule("N1", RuleGroup.USER, PatternAnchor(AnchorMode.EXACT_WORD, "ми"),
                    PatternAnchor(AnchorMode.ENDS_WITH, "м"), 1)
    far = PairRule("F1", RuleGroup.USER, PatternAnchor(AnchorMode.EXACT_WORD, "ми"),
                   PatternAnchor(AnchorMode.ENDS_WITH, "м"), 5)
    rs = RuleSet("windows", (near, far))
    idx = make_index(["ми знаєм а б в працюєм"])
    matches = brute_force_oracle(rs, idx)
    assert [(m.rule_id, m.second_pos) for m in matches] == [("F1", 2), ("N1", 2), ("F1", 6)]
    assert matches == run(rs, idx)
