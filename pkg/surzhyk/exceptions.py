"""Custom exceptions for the Surzhyk detector"""

from typing import List, Optional


class SurzhykError(Exception):
    """Base exception for the Surzhyk detector"""
    pass


class ConfigurationError(SurzhykError):
    """Configuration or usage error"""
    pass


class CorpusError(SurzhykError):
    """Corpus file could not be read"""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path


class CorpusDecodeError(CorpusError):
    """Corpus file is not valid UTF-8"""

    def __init__(self, path: str, offset: int, reason: str = "invalid UTF-8"):
        super().__init__(f"{path}: {reason} at byte offset {offset}", path=path)
        self.offset = offset


class InputFileError(SurzhykError):
    """Match or gold file cannot be read or is not valid UTF-8"""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path


class MatchFileError(SurzhykError):
    """Match file given to evaluation is unreadable or malformed"""
    pass


class RuleError(SurzhykError):
    """Rule file related error"""
    pass


class RuleSyntaxError(RuleError):
    """Rule file is not valid JSON"""
    pass


class RuleSchemaError(RuleError):
    """Rule file parses but violates the rule schema"""

    def __init__(self, violations: List[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class DuplicateRuleError(RuleError):
    """Two rules in one set share an id"""

    def __init__(self, rule_id: str):
        super().__init__(f"duplicate rule id {rule_id!r}")
        self.rule_id = rule_id


class GoldError(SurzhykError):
    """Gold label file related error"""

    def __init__(self, message: str, row: Optional[int] = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row
