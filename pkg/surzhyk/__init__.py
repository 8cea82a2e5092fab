"""
Surzhyk pattern detector

Rule-based detection of Ukrainian-Russian Surzhyk verb forms in tokenized
corpora, with per-rule precision evaluation against gold labels.
"""

__version__ = "0.1.0"

from .config import RunConfig
from .engine import Match, anchor_matches, match_pair_rule, match_prefix_rule, run
from .evaluation import GoldLabel, Label, RuleReport, parse_gold, render_report, score
from .exceptions import SurzhykError
from .rules import (
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
    parse_ruleset,
    render_ruleset,
    validate_rule,
)
from .text import CorpusIndex, Document, Token, index_corpus, normalize, tokenize

__all__ = [
    "RunConfig",
    "Match",
    "anchor_matches",
    "match_pair_rule",
    "match_prefix_rule",
    "run",
    "GoldLabel",
    "Label",
    "RuleReport",
    "parse_gold",
    "render_report",
    "score",
    "SurzhykError",
    "AnchorMode",
    "Constraint",
    "ConstraintKind",
    "ConstraintTarget",
    "PairRule",
    "PatternAnchor",
    "PrefixRule",
    "RuleGroup",
    "RuleSet",
    "builtin_ruleset",
    "parse_ruleset",
    "render_ruleset",
    "validate_rule",
    "CorpusIndex",
    "Document",
    "Token",
    "index_corpus",
    "normalize",
    "tokenize",
]
