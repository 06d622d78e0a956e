"""Reading, validating and writing tokenized parallel corpora and word alignments.

File conventions: UTF-8, LF line endings, one sentence per line, tokens
separated by single spaces. Alignments use the common `i-j` text format, one
line per sentence pair; an empty line is an empty alignment. Sentences arrive
pre-tokenized and are never re-tokenized here.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BadToken, EmptyLine, LineCountMismatch, LinkOutOfBounds, MalformedLink


def check_token(token: str) -> str:
    if not token or any(c.isspace() for c in token):
        raise BadToken(token)
    return token


@dataclass(frozen=True, slots=True)
class SentencePair:
    """One source/target sentence pair; id is the 0-based corpus line index."""

    id: int
    src: tuple[str, ...]
    tgt: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "src", tuple(self.src))
        object.__setattr__(self, "tgt", tuple(self.tgt))
        if self.id < 0:
            raise ValueError(f"pair id must be non-negative, got {self.id}")
        if not self.src or not self.tgt:
            raise ValueError(f"pair {self.id}: both sides must be non-empty")
        for tok in self.src:
            check_token(tok)
        for tok in self.tgt:
            check_token(tok)


@dataclass(frozen=True, slots=True)
class Alignment:
    """Set of (source index, target index) word links; may be empty."""

    links: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "links", frozenset(self.links))

    def __iter__(self):
        return iter(self.links)

    def __len__(self):
        return len(self.links)


EMPTY_ALIGNMENT = Alignment(frozenset())


@dataclass(frozen=True, slots=True)
class AlignedPair:
    pair: SentencePair
    alignment: Alignment

    def __post_init__(self):
        n, m = len(self.pair.src), len(self.pair.tgt)
        for s, t in self.alignment.links:
            if not (0 <= s < n and 0 <= t < m):
                raise LinkOutOfBounds(self.pair.id, (s, t))


def read_parallel_corpus(
    src_lines: Iterable[str], tgt_lines: Iterable[str]
) -> list[SentencePair]:
    """Zip two line streams into SentencePairs with ids 0..N-1.

    Empty lines are hard errors, not skipped: dropping a line would shift
    every later pair id and silently desynchronize the alignment file.
    """
    src_list = [line.rstrip("\n") for line in src_lines]
    tgt_list = [line.rstrip("\n") for line in tgt_lines]
    if len(src_list) != len(tgt_list):
        raise LineCountMismatch(len(src_list), len(tgt_list))
    pairs = []
    for i, (s_line, t_line) in enumerate(zip(src_list, tgt_list)):
        src = s_line.split()
        tgt = t_line.split()
        if not src:
            raise EmptyLine("source", i)
        if not tgt:
            raise EmptyLine("target", i)
        pairs.append(SentencePair(i, tuple(src), tuple(tgt)))
    return pairs


def parse_alignment_line(text: str, line_no: int = 0) -> Alignment:
    """Parse one `i-j i-j ...` line; duplicates collapse, empty line is fine."""
    links = set()
    for item in text.split():
        s_str, sep, t_str = item.partition("-")
        if not sep or not s_str.isdigit() or not t_str.isdigit():
            raise MalformedLink(item, line_no)
        links.add((int(s_str), int(t_str)))
    return Alignment(frozenset(links))


def format_alignment(alignment: Alignment) -> str:
    # sorted by (s, t) so serialization is byte-deterministic
    return " ".join(f"{s}-{t}" for s, t in sorted(alignment.links))


def read_alignment_file(lines: Iterable[str]) -> list[Alignment]:
    return [parse_alignment_line(line.rstrip("\n"), i) for i, line in enumerate(lines)]


def bind_alignments(
    corpus: Sequence[SentencePair], alignments: Sequence[Alignment]
) -> list[AlignedPair]:
    """Attach alignments to pairs, validating every link against the pair lengths."""
    if len(corpus) != len(alignments):
        raise LineCountMismatch(len(corpus), len(alignments))
    return [AlignedPair(pair, alignment) for pair, alignment in zip(corpus, alignments)]


def load_aligned_corpus(src_path, tgt_path, align_path) -> list[AlignedPair]:
    corpus = load_corpus(src_path, tgt_path)
    with open(align_path, encoding="utf-8") as f:
        alignments = read_alignment_file(f)
    return bind_alignments(corpus, alignments)


def load_corpus(src_path, tgt_path) -> list[SentencePair]:
    with open(src_path, encoding="utf-8") as f_src:
        src_lines = f_src.readlines()
    with open(tgt_path, encoding="utf-8") as f_tgt:
        tgt_lines = f_tgt.readlines()
    return read_parallel_corpus(src_lines, tgt_lines)


def write_corpus(pairs: Sequence[SentencePair], dest_src, dest_tgt) -> None:
    """Write the two sides back out; exact inverse of read_parallel_corpus."""
    write_lines(dest_src, (" ".join(p.src) for p in pairs))
    write_lines(dest_tgt, (" ".join(p.tgt) for p in pairs))


def write_alignment_file(alignments: Sequence[Alignment], dest) -> None:
    write_lines(dest, (format_alignment(a) for a in alignments))


def write_lines(path, lines: Iterable[str]) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for line in lines:
                f.write(line)
                f.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write {os.fspath(path)!r}: {exc}") from exc


def read_vocabulary(path) -> tuple[str, ...]:
    """One token per line; blank lines ignored; order kept, duplicates dropped."""
    seen = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            tok = line.strip()
            if tok and tok not in seen:
                seen[check_token(tok)] = None
    return tuple(seen)
