"""Shared fixtures for the Surzhyk detector tests"""

from pathlib import Path
from typing import List, Sequence

import pytest

from surzhyk.text import CorpusIndex, Document, normalize

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_DIR = FIXTURES / "surzhyk"
SPECIFIC_FILE = "specific_true_positives.txt"
PREFIX_FILE = "prefix_verbs.txt"
GOLD_FILE = FIXTURES / "specific_gold.tsv"

# The true-positive phrases of the specific rules, one per fixture line,
# with the rule each one fires.
SPECIFIC_PHRASES = [
    ("ми на нього кажем", "S1"),
    ("ми тут працюєм", "S2"),
    ("ми визнаєм", "S2"),
    ("ми чисто не балакаєм", "S2"),
    ("хіба ми чисто балакаєм", "S2"),
    ("ми лучшего на бачим", "S3"),
    ("ми тебе устроїм", "S4"),
    ("самі сієм", "S6"),
    ("будем злазить", "S13"),
    ("будем возвращать", "S13"),
    ("мусим ходить", "S15"),
]


def make_index(lines: Sequence[str], file_id: str = "t.txt") -> CorpusIndex:
    """Index raw lines as a single in-memory document."""
    return CorpusIndex.from_documents([Document(file_id, tuple(normalize(line) for line in lines))])


def make_multi_index(documents: Sequence[Sequence[str]]) -> CorpusIndex:
    return CorpusIndex.from_documents([
        Document(f"f{i:02d}.txt", tuple(normalize(line) for line in lines))
        for i, lines in enumerate(documents)
    ])


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture
def specific_lines() -> List[str]:
    return [phrase for phrase, _ in SPECIFIC_PHRASES]


@pytest.fixture
def write_corpus(tmp_path):
    """Write {name: text} files under a fresh directory and return it."""

    def _write(files):
        root = tmp_path / "corpus"
        root.mkdir(exist_ok=True)
        for name, text in files.items():
            path = root / name
            path.parent.mkdir(parents=True, exist_ok=True)
            if isinstance(text, bytes):
                path.write_bytes(text)
            else:
                path.write_text(text, encoding="utf-8")
        return root

    return _write
