"""Corpus normalization, tokenization and indexing

Raw transcripts are normalized (NFC, lowercase), split into position-indexed
tokens per line and grouped by (file, line), the scope every rule matches in.
"""

import logging
import unicodedata
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

import regex

from .exceptions import CorpusDecodeError, CorpusError

logger = logging.getLogger(__name__)

# A word is a run of letters, marks and digits; single internal apostrophes
# and hyphens join runs ("м'ясо", "будь-який"). Everything else separates.
_WORD_RE = regex.compile(r"[\p{L}\p{M}\p{N}]+(?:['’ʼ\-‐][\p{L}\p{M}\p{N}]+)*")

PathLike = Union[str, Path]


@dataclass(frozen=True)
class Document:
    """A corpus file as normalized lines; line numbers are 1-based list positions"""

    file_id: str
    lines: Tuple[str, ...]


@dataclass(frozen=True)
class Token:
    """One normalized word with its (file, line, position) coordinates"""

    file_id: str
    line: int
    position: int
    surface: str

    @property
    def char_len(self) -> int:
        """Number of Unicode characters in the surface, not encoded bytes"""
        return len(self.surface)


def normalize(raw: str) -> str:
    """
    Normalize raw text to lowercase NFC.

    Example:
        >>> normalize("Ми Тут Працюєм")
        'ми тут працюєм'
    """
    if not raw:
        return ""
    composed = unicodedata.normalize("NFC", raw)
    return unicodedata.normalize("NFC", composed.lower())


def tokenize_line(file_id: str, line: int, text: str) -> List[Token]:
    """Tokenize one normalized line; positions run 1..k with no gaps."""
    words = _WORD_RE.findall(text)
    return [
        Token(file_id=file_id, line=line, position=i, surface=word)
        for i, word in enumerate(words, start=1)
    ]


def tokenize(doc: Document) -> List[Token]:
    """
    Tokenize every line of a document.

    Edge punctuation is stripped and does not consume a position, so
    "вообщем уже, да, двадцять" yields four tokens at positions 1..4.

    Args:
        doc: Document whose lines are already normalized

    Returns:
        Tokens in (line, position) order
    """
    tokens: List[Token] = []
    for number, text in enumerate(doc.lines, start=1):
        tokens.extend(tokenize_line(doc.file_id, number, text))
    return tokens


def split_lines(text: str) -> List[str]:
    """Split on LF, accepting CRLF; a trailing newline does not add a line."""
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return [line[:-1] if line.endswith("\r") else line for line in lines]


def decode_corpus_bytes(data: bytes, path: str) -> str:
    """Decode UTF-8 corpus bytes, reporting the failing byte offset."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise CorpusDecodeError(path, e.start, e.reason)
    if text.startswith("\ufeff"):
        text = text[1:]
    return text


def read_document(path: PathLike, file_id: str) -> Document:
    """
    Read and normalize one corpus file.

    Raises:
        CorpusError: If the file cannot be read
        CorpusDecodeError: If the file is not valid UTF-8
    """
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise CorpusError(f"{path}: {e.strerror or e}", path=str(path))
    text = decode_corpus_bytes(data, str(path))
    lines = tuple(normalize(line) for line in split_lines(text))
    logger.debug("read %s: %d lines", file_id, len(lines))
    return Document(file_id=file_id, lines=lines)


class CorpusIndex:
    """
    Tokens grouped by (file_id, line), iterated in file_id then line order.

    Lines without tokens have no group, but every document's normalized
    lines are kept so that context around a match can be rendered.

    Example:
        >>> idx = CorpusIndex.from_documents([Document("a.txt", ("ми тут працюєм",))])
        >>> [(f, n, len(toks)) for f, n, toks in idx.groups()]
        [('a.txt', 1, 3)]
    """

    def __init__(
        self,
        groups: Dict[Tuple[str, int], Tuple[Token, ...]],
        lines: Dict[str, Tuple[str, ...]],
    ):
        self._groups = {key: groups[key] for key in sorted(groups)}
        self._lines = dict(lines)

    @classmethod
    def from_documents(cls, documents: Iterable[Document]) -> "CorpusIndex":
        groups: Dict[Tuple[str, int], Tuple[Token, ...]] = {}
        lines: Dict[str, Tuple[str, ...]] = {}
        for doc in documents:
            if doc.file_id in lines:
                raise CorpusError(f"duplicate file id {doc.file_id!r}", path=doc.file_id)
            lines[doc.file_id] = doc.lines
            for number, text in enumerate(doc.lines, start=1):
                tokens = tokenize_line(doc.file_id, number, text)
                if tokens:
                    groups[(doc.file_id, number)] = tuple(tokens)
        return cls(groups, lines)

    def groups(self) -> Iterator[Tuple[str, int, Tuple[Token, ...]]]:
        """Yield (file_id, line, tokens) for every line that has tokens."""
        for (file_id, line), tokens in self._groups.items():
            yield file_id, line, tokens

    def tokens(self) -> List[Token]:
        """Flatten the index back into one token stream."""
        return [token for tokens in self._groups.values() for token in tokens]

    @property
    def file_ids(self) -> List[str]:
        return sorted(self._lines)

    def line_text(self, file_id: str, line: int) -> str:
        return self._lines[file_id][line - 1]

    def context(self, file_id: str, line: int, radius: int = 0) -> str:
        """Return the line with up to `radius` neighbours on each side, joined by " / "."""
        lines = self._lines[file_id]
        start = max(1, line - radius)
        end = min(len(lines), line + radius)
        return " / ".join(lines[start - 1:end])

    def __len__(self) -> int:
        return len(self._groups)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CorpusIndex):
            return NotImplemented
        return self._groups == other._groups and self._lines == other._lines


def resolve_paths(paths: Sequence[PathLike]) -> List[Tuple[str, Path]]:
    """
    Expand CLI paths into (file_id, path) pairs.

    Directories are walked recursively for ``*.txt`` and their files are
    named relative to the directory; file arguments keep the path as given.

    Raises:
        CorpusError: If a path does not exist
    """
    resolved: List[Tuple[str, Path]] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            found = sorted(p for p in path.rglob("*.txt") if p.is_file())
            if not found:
                logger.warning("no *.txt files under %s", path)
            resolved.extend((p.relative_to(path).as_posix(), p) for p in found)
        elif path.exists():
            resolved.append((path.as_posix(), path))
        else:
            raise CorpusError(f"{raw}: no such file or directory", path=str(raw))
    return resolved


def index_corpus(paths: Sequence[PathLike], workers: int = 1) -> CorpusIndex:
    """
    Read, normalize, tokenize and group corpus files.

    Args:
        paths: Files and/or directories to index
        workers: Number of threads used to read files

    Returns:
        CorpusIndex; iteration order does not depend on `workers`

    Raises:
        CorpusError: If a path is missing or unreadable, or two files share an id
        CorpusDecodeError: If a file is not valid UTF-8
    """
    entries = resolve_paths(paths)
    if workers > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            documents = list(pool.map(lambda entry: read_document(entry[1], entry[0]), entries))
    else:
        documents = [read_document(path, file_id) for file_id, path in entries]

    idx = CorpusIndex.from_documents(documents)
    logger.info("indexed %d files, %d token lines", len(documents), len(idx))
    return idx
