"""Joint phrase-pair variable substitution.

For each sentence pair we enumerate candidate phrases (alignment-consistent
pairs by default), pick a random subset under the dropout-rate, count and
adjacency constraints, and replace each chosen source span with an indexed
variable token and its target span with the same-indexed partner token.
Adding the induced corpus to the original doubles the training set.

Selection is greedy over a shuffled candidate list. The shuffle comes from a
per-pair RNG stream derived from (seed, pair id), so the induced corpus is
identical no matter how many workers processed it.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .corpus_io import AlignedPair, SentencePair
from .errors import MalformedVariable, MissingAnnotation, OverlappingRecord, SpanOutOfBounds
from .phrases import PhrasePair, Span, extract_phrase_pairs
from .rng import check_seed, pair_stream

MODES = ("joint", "source_only", "target_only", "unaligned")
ADJACENCY_POLICIES = ("either_side", "both_sides")

# annotation set: pair id -> ((span, label), ...) over the pair's source side
AnnotationSet = Mapping[int, Sequence[tuple[Span, str]]]


def _check_var_format(template: str) -> str:
    try:
        probe = template.format(i=107)
    except (KeyError, IndexError, ValueError) as exc:
        raise ValueError(f"bad variable format {template!r}: {exc}") from exc
    if "107" not in probe or any(c.isspace() for c in probe) or not probe:
        raise ValueError(
            f"bad variable format {template!r}: must render one whitespace-free "
            "token containing the index"
        )
    return template


def _var_pattern(template: str) -> re.Pattern:
    """Regex matching any token the template can produce, capturing the index."""
    marker = "\x00"
    escaped = re.escape(template.format(i=marker))
    return re.compile("^" + escaped.replace(re.escape(marker), r"([0-9]+)") + "$")


@dataclass(frozen=True)
class JdConfig:
    """All knobs for joint-dropout augmentation."""

    rate: float = 0.3
    max_vars: int = 10
    mode: str = "joint"
    adjacency_policy: str = "either_side"
    min_phrase_len: int = 1
    max_phrase_len: int | None = None
    var_src_format: str = "<X_{i}>"
    var_tgt_format: str = "<Y_{i}>"
    seed: int = 0
    span_filter: AnnotationSet | None = None
    span_labels: frozenset[str] | None = None

    def __post_init__(self):
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError(f"rate must be in [0, 1], got {self.rate}")
        if self.max_vars < 1:
            raise ValueError(f"max_vars must be >= 1, got {self.max_vars}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.adjacency_policy not in ADJACENCY_POLICIES:
            raise ValueError(
                f"adjacency_policy must be one of {ADJACENCY_POLICIES}, "
                f"got {self.adjacency_policy!r}"
            )
        if self.min_phrase_len < 1:
            raise ValueError("min_phrase_len must be >= 1")
        if self.max_phrase_len is not None and self.max_phrase_len < self.min_phrase_len:
            raise ValueError("max_phrase_len must be >= min_phrase_len")
        _check_var_format(self.var_src_format)
        _check_var_format(self.var_tgt_format)
        check_seed(self.seed)

    def var_src(self, index: int) -> str:
        return self.var_src_format.format(i=index)

    def var_tgt(self, index: int) -> str:
        return self.var_tgt_format.format(i=index)


@dataclass(frozen=True, slots=True)
class Candidate:
    """A substitutable phrase: two-sided in joint/unaligned modes, one-sided
    otherwise. Token snapshots travel with the spans so the final record can
    splice the phrase back in."""

    src_span: Span | None
    tgt_span: Span | None
    src_tokens: tuple[str, ...] = ()
    tgt_tokens: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class Substitution:
    var_index: int
    src_span: Span | None
    tgt_span: Span | None
    src_tokens: tuple[str, ...]
    tgt_tokens: tuple[str, ...]


@dataclass(frozen=True)
class SubstitutionRecord:
    """The substitutions applied to one pair, ordered by variable index."""

    entries: tuple[Substitution, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        indices = [e.var_index for e in self.entries]
        if indices != list(range(1, len(indices) + 1)):
            raise ValueError(f"variable indices must be exactly 1..k in order, got {indices}")

    def __len__(self):
        return len(self.entries)


EMPTY_RECORD = SubstitutionRecord(())


@dataclass(frozen=True)
class VariableizedPair:
    pair: SentencePair
    record: SubstitutionRecord
    origin_id: int


def _cand_sort_key(c: Candidate):
    s = (c.src_span.start, c.src_span.end) if c.src_span else (-1, -1)
    t = (c.tgt_span.start, c.tgt_span.end) if c.tgt_span else (-1, -1)
    return s + t


def _side_spans(length: int, cfg: JdConfig) -> list[Span]:
    cap = length if cfg.max_phrase_len is None else min(cfg.max_phrase_len, length)
    return [
        Span(i, j)
        for i in range(length)
        for j in range(i + cfg.min_phrase_len, min(length, i + cap) + 1)
    ]


def _len_ok(span: Span, cfg: JdConfig) -> bool:
    if len(span) < cfg.min_phrase_len:
        return False
    return cfg.max_phrase_len is None or len(span) <= cfg.max_phrase_len


def candidate_phrases(ap: AlignedPair, cfg: JdConfig) -> list[Candidate]:
    """Enumerate substitution candidates for one pair, canonically ordered.

    joint: alignment-consistent phrase pairs, optionally restricted to source
    spans that exactly match an allowed annotated span. unaligned: every span
    combination, no consistency required. source_only/target_only: every span
    of that single side.
    """
    pair = ap.pair
    n, m = len(pair.src), len(pair.tgt)
    cands: list[Candidate]
    if cfg.mode == "joint":
        pairs = extract_phrase_pairs(ap, cfg.max_phrase_len, cfg.max_phrase_len)
        kept: Iterable[PhrasePair] = (
            pp for pp in pairs if _len_ok(pp.src_span, cfg) and _len_ok(pp.tgt_span, cfg)
        )
        if cfg.span_filter is not None:
            if pair.id not in cfg.span_filter:
                raise MissingAnnotation(pair.id)
            for span, _label in cfg.span_filter[pair.id]:
                if span.end > n:
                    raise SpanOutOfBounds(pair.id, span.start, span.end, n)
            allowed = {
                span
                for span, label in cfg.span_filter[pair.id]
                if cfg.span_labels is None or label in cfg.span_labels
            }
            kept = (pp for pp in kept if pp.src_span in allowed)
        cands = [
            Candidate(
                pp.src_span,
                pp.tgt_span,
                pair.src[pp.src_span.start : pp.src_span.end],
                pair.tgt[pp.tgt_span.start : pp.tgt_span.end],
            )
            for pp in kept
        ]
    elif cfg.mode == "unaligned":
        cands = [
            Candidate(ss, ts, pair.src[ss.start : ss.end], pair.tgt[ts.start : ts.end])
            for ss in _side_spans(n, cfg)
            for ts in _side_spans(m, cfg)
        ]
    elif cfg.mode == "source_only":
        cands = [
            Candidate(ss, None, pair.src[ss.start : ss.end], ())
            for ss in _side_spans(n, cfg)
        ]
    else:  # target_only
        cands = [
            Candidate(None, ts, (), pair.tgt[ts.start : ts.end])
            for ts in _side_spans(m, cfg)
        ]
    cands.sort(key=_cand_sort_key)
    return cands


def _overlap(a: Span, b: Span) -> bool:
    return a.start < b.end and b.start < a.end


def _adjacent(a: Span, b: Span) -> bool:
    return a.end == b.start or b.end == a.start


def _blocks(cand: Candidate, accepted: Candidate, policy: str) -> bool:
    # overlap on any shared side always blocks; spans touching end-to-start
    # block per policy (either_side: touching on one side is enough)
    adjacencies = []
    for a, b in ((cand.src_span, accepted.src_span), (cand.tgt_span, accepted.tgt_span)):
        if a is not None and b is not None:
            if _overlap(a, b):
                return True
            adjacencies.append(_adjacent(a, b))
    if not adjacencies:
        return False
    if policy == "either_side":
        return any(adjacencies)
    return all(adjacencies)


def _cand_size(c: Candidate) -> int:
    return (len(c.src_span) if c.src_span else 0) + (len(c.tgt_span) if c.tgt_span else 0)


def select_substitutions(
    candidates: Sequence[Candidate],
    src_len: int,
    tgt_len: int,
    cfg: JdConfig,
    rng,
) -> SubstitutionRecord:
    """Greedy randomized selection of non-conflicting candidates.

    Shuffle once, scan once. A candidate is accepted iff it neither overlaps
    nor sits adjacent (per policy) to anything already accepted, the variable
    budget is not exhausted, and the cumulative dropped-token share of
    (src_len + tgt_len) stays within cfg.rate. Variable indices then follow
    source span order (target order when only target spans exist).
    """
    order = list(candidates)
    rng.shuffle(order)
    total = src_len + tgt_len
    accepted: list[Candidate] = []
    dropped = 0
    for cand in order:
        if len(accepted) >= cfg.max_vars:
            break
        size = _cand_size(cand)
        if total == 0 or (dropped + size) / total > cfg.rate:
            continue
        if any(_blocks(cand, acc, cfg.adjacency_policy) for acc in accepted):
            continue
        accepted.append(cand)
        dropped += size

    if cfg.mode == "target_only":
        accepted.sort(key=lambda c: c.tgt_span.start)
    else:
        accepted.sort(key=lambda c: c.src_span.start)
    return SubstitutionRecord(
        tuple(
            Substitution(i, c.src_span, c.tgt_span, c.src_tokens, c.tgt_tokens)
            for i, c in enumerate(accepted, start=1)
        )
    )


def _replace_spans(
    tokens: tuple[str, ...],
    entries: list[Substitution],
    span_of,
    var_token,
) -> tuple[str, ...]:
    entries = sorted(entries, key=lambda e: span_of(e).start)
    prev_end = 0
    out: list[str] = []
    for e in entries:
        span = span_of(e)
        if span.start < prev_end:
            raise OverlappingRecord(f"spans overlap at {span.start}")
        if span.end > len(tokens):
            raise ValueError(f"span [{span.start}, {span.end}) exceeds sentence length {len(tokens)}")
        out.extend(tokens[prev_end : span.start])
        out.append(var_token(e.var_index))
        prev_end = span.end
    out.extend(tokens[prev_end:])
    return tuple(out)


def substitute(pair: SentencePair, record: SubstitutionRecord, cfg: JdConfig) -> VariableizedPair:
    """Replace each recorded span with its variable token."""
    new_src = _replace_spans(
        pair.src,
        [e for e in record.entries if e.src_span is not None],
        lambda e: e.src_span,
        cfg.var_src,
    )
    new_tgt = _replace_spans(
        pair.tgt,
        [e for e in record.entries if e.tgt_span is not None],
        lambda e: e.tgt_span,
        cfg.var_tgt,
    )
    return VariableizedPair(SentencePair(pair.id, new_src, new_tgt), record, pair.id)


def _splice_back(
    tokens: tuple[str, ...],
    by_token: dict[str, tuple[str, ...]],
    pattern: re.Pattern,
) -> tuple[str, ...]:
    out: list[str] = []
    for tok in tokens:
        if tok in by_token:
            out.extend(by_token[tok])
        elif pattern.match(tok):
            raise MalformedVariable(tok)
        else:
            out.append(tok)
    return tuple(out)


def reconstruct(vp: VariableizedPair, cfg: JdConfig) -> SentencePair:
    """Inverse of substitute: splice the recorded phrases back in."""
    src_map = {
        cfg.var_src(e.var_index): e.src_tokens
        for e in vp.record.entries
        if e.src_span is not None
    }
    tgt_map = {
        cfg.var_tgt(e.var_index): e.tgt_tokens
        for e in vp.record.entries
        if e.tgt_span is not None
    }
    src = _splice_back(vp.pair.src, src_map, _var_pattern(cfg.var_src_format))
    tgt = _splice_back(vp.pair.tgt, tgt_map, _var_pattern(cfg.var_tgt_format))
    return SentencePair(vp.origin_id, src, tgt)


def induce_pair(ap: AlignedPair, cfg: JdConfig) -> VariableizedPair:
    """One variable-induced version of a pair, driven by its own RNG stream."""
    rng = pair_stream(cfg.seed, ap.pair.id)
    cands = candidate_phrases(ap, cfg)
    record = select_substitutions(cands, len(ap.pair.src), len(ap.pair.tgt), cfg, rng)
    return substitute(ap.pair, record, cfg)


def induce_corpus(
    corpus: Sequence[AlignedPair], cfg: JdConfig, threads: int = 1
) -> list[VariableizedPair]:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda ap: induce_pair(ap, cfg), corpus))
    return [induce_pair(ap, cfg) for ap in corpus]


def augment_corpus(
    corpus: Sequence[AlignedPair], cfg: JdConfig, threads: int = 1
) -> list[SentencePair]:
    """Original corpus followed by one variable-induced pair per original.

    Pairs whose selection came back empty contribute an unchanged copy, so the
    output is always exactly twice the input, line-aligned with it.
    """
    induced = induce_corpus(corpus, cfg, threads)
    n = len(corpus)
    out = [ap.pair for ap in corpus]
    out.extend(
        SentencePair(n + i, vp.pair.src, vp.pair.tgt) for i, vp in enumerate(induced)
    )
    return out


def read_annotations(lines: Iterable[str]) -> dict[int, tuple[tuple[Span, str], ...]]:
    """Parse span annotations: TSV `pair_id TAB label TAB start TAB end`."""
    acc: dict[int, list[tuple[Span, str]]] = {}
    for line_no, line in enumerate(lines):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(f"annotation line {line_no}: expected 4 tab-separated fields")
        pair_id, label, start, end = parts
        acc.setdefault(int(pair_id), []).append((Span(int(start), int(end)), label))
    return {pid: tuple(spans) for pid, spans in acc.items()}


def format_record(origin_id: int, record: SubstitutionRecord) -> str:
    """One substitution-log line: `pair_id TAB k TAB i:ss-se/ts-te;...`
    (a `-` marks the missing side of one-sided substitutions)."""
    items = []
    for e in record.entries:
        src = f"{e.src_span.start}-{e.src_span.end}" if e.src_span else "-"
        tgt = f"{e.tgt_span.start}-{e.tgt_span.end}" if e.tgt_span else "-"
        items.append(f"{e.var_index}:{src}/{tgt}")
    return f"{origin_id}\t{len(record)}\t{';'.join(items)}"
