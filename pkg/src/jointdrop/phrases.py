"""Bilingual phrase pair extraction and phrase table building.

A phrase pair is a contiguous source span and a contiguous target span that
the word alignment supports: at least one link falls inside the box, and no
link crosses its boundary. Extraction returns *all* such span pairs within
the length bounds, which automatically covers extending spans over unaligned
boundary words; a deliberately naive brute-force twin of the extractor is
kept as the test oracle.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus_io import AlignedPair, Alignment


@dataclass(frozen=True, slots=True)
class Span:
    """Half-open token span [start, end); length >= 1."""

    start: int
    end: int

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def __len__(self):
        return self.end - self.start

    def covers(self, i: int) -> bool:
        return self.start <= i < self.end


@dataclass(frozen=True, slots=True)
class PhrasePair:
    src_span: Span
    tgt_span: Span


def is_consistent(alignment: Alignment, src_span: Span, tgt_span: Span) -> bool:
    """Alignment consistency of a span pair.

    True iff some link lies inside src_span x tgt_span and no link has exactly
    one endpoint inside its span.
    """
    s0, s1 = src_span.start, src_span.end
    t0, t1 = tgt_span.start, tgt_span.end
    inside = False
    for s, t in alignment.links:
        in_src = s0 <= s < s1
        in_tgt = t0 <= t < t1
        if in_src != in_tgt:
            return False
        if in_src:
            inside = True
    return inside


def extract_phrase_pairs(
    ap: AlignedPair, max_src_len: int | None = None, max_tgt_len: int | None = None
) -> set[PhrasePair]:
    """All consistent phrase pairs of a pair, with per-side length caps.

    For each source span we project its links onto the target side; the
    projection [t_min, t_max] is the tightest consistent target span, and any
    widening over *unaligned* target words stays consistent. Equals the
    brute-force enumeration exactly (property-tested), just without the n^2 m^2
    scan.
    """
    src_len, tgt_len = len(ap.pair.src), len(ap.pair.tgt)
    links = ap.alignment.links
    if not links:
        return set()
    src_to_tgt: list[list[int]] = [[] for _ in range(src_len)]
    tgt_to_src: list[list[int]] = [[] for _ in range(tgt_len)]
    for s, t in links:
        src_to_tgt[s].append(t)
        tgt_to_src[t].append(s)
    tgt_aligned = [bool(ss) for ss in tgt_to_src]

    cap_src = src_len if max_src_len is None else max_src_len
    cap_tgt = tgt_len if max_tgt_len is None else max_tgt_len
    out: set[PhrasePair] = set()

    for i1 in range(src_len):
        t_min, t_max = tgt_len, -1
        for i2 in range(i1 + 1, min(src_len, i1 + cap_src) + 1):
            for t in src_to_tgt[i2 - 1]:
                if t < t_min:
                    t_min = t
                if t > t_max:
                    t_max = t
            if t_max < 0:
                continue  # no link inside the source span yet
            # every link touching [t_min, t_max] must originate in [i1, i2)
            closed = True
            for t in range(t_min, t_max + 1):
                for s in tgt_to_src[t]:
                    if not i1 <= s < i2:
                        closed = False
                        break
                if not closed:
                    break
            if not closed:
                continue
            src_span = Span(i1, i2)
            j1 = t_min
            while True:
                j2 = t_max + 1
                while j2 - j1 <= cap_tgt:
                    out.add(PhrasePair(src_span, Span(j1, j2)))
                    if j2 >= tgt_len or tgt_aligned[j2]:
                        break
                    j2 += 1
                if j1 == 0 or tgt_aligned[j1 - 1] or t_max + 2 - j1 > cap_tgt:
                    break
                j1 -= 1
    return out


def extract_phrase_pairs_bruteforce(
    ap: AlignedPair, max_src_len: int | None = None, max_tgt_len: int | None = None
) -> set[PhrasePair]:
    """Oracle twin of extract_phrase_pairs: try every span pair, apply the
    consistency predicate literally. Kept naive on purpose."""
    src_len, tgt_len = len(ap.pair.src), len(ap.pair.tgt)
    cap_src = src_len if max_src_len is None else max_src_len
    cap_tgt = tgt_len if max_tgt_len is None else max_tgt_len
    alignment = ap.alignment
    src_spans = [
        Span(i1, i2)
        for i1 in range(src_len)
        for i2 in range(i1 + 1, min(src_len, i1 + cap_src) + 1)
    ]
    tgt_spans = [
        Span(j1, j2)
        for j1 in range(tgt_len)
        for j2 in range(j1 + 1, min(tgt_len, j1 + cap_tgt) + 1)
    ]
    return {
        PhrasePair(ss, ts)
        for ss in src_spans
        for ts in tgt_spans
        if is_consistent(alignment, ss, ts)
    }


def phrase_tokens(ap: AlignedPair, pp: PhrasePair) -> tuple[tuple[str, ...], tuple[str, ...]]:
    src = ap.pair.src[pp.src_span.start : pp.src_span.end]
    tgt = ap.pair.tgt[pp.tgt_span.start : pp.tgt_span.end]
    return src, tgt


@dataclass(frozen=True, slots=True)
class PhraseStats:
    count: int
    fwd_score: float


class PhraseTable:
    """Counts of extracted (source phrase, target phrase) occurrences plus the
    forward relative frequency count/sum(counts with the same source side)."""

    def __init__(self, counts: Counter):
        self._counts = Counter(counts)
        src_totals: Counter = Counter()
        for (src, _tgt), c in self._counts.items():
            src_totals[src] += c
        self.entries: dict[tuple[tuple[str, ...], tuple[str, ...]], PhraseStats] = {
            key: PhraseStats(c, c / src_totals[key[0]]) for key, c in self._counts.items()
        }

    def __len__(self):
        return len(self.entries)

    def __contains__(self, key):
        return key in self.entries

    def get(self, src: Sequence[str], tgt: Sequence[str]) -> PhraseStats | None:
        return self.entries.get((tuple(src), tuple(tgt)))

    def total_occurrences(self) -> int:
        return sum(s.count for s in self.entries.values())

    def to_lines(self) -> list[str]:
        """`src ||| tgt ||| count fwd_score` lines, sorted by the printed
        (src, tgt) text for byte-determinism."""
        rows = [
            (" ".join(src), " ".join(tgt), stats)
            for (src, tgt), stats in self.entries.items()
        ]
        rows.sort(key=lambda r: (r[0], r[1]))
        return [f"{s} ||| {t} ||| {st.count} {st.fwd_score:.6f}" for s, t, st in rows]


def build_phrase_table(
    corpus: Iterable[AlignedPair], max_src_len: int | None = 7, max_tgt_len: int | None = 7
) -> PhraseTable:
    """Count every extracted phrase pair occurrence across the corpus.

    Per-pair extraction is pure, and the merge is a commutative sum, so the
    table is identical no matter how the corpus is partitioned or ordered.
    """
    counts: Counter = Counter()
    for ap in corpus:
        for pp in extract_phrase_pairs(ap, max_src_len, max_tgt_len):
            counts[phrase_tokens(ap, pp)] += 1
    return PhraseTable(counts)
