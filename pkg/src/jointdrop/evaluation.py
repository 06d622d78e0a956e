"""Consistency metric, subject-noun perturbation generation, and a smoothed
corpus BLEU for harness use.

The consistency rule: after swapping one noun in the input, two translations
count as consistent when they differ in exactly one word (token-level edit
distance 1). BLEU here is a smoke-test metric over pre-tokenized text, not a
replacement for a reference scorer.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EmptyCorpus, EmptyInput, LengthMismatch, SpanOutOfBounds
from .phrases import Span


def word_edit_distance(a: Sequence[str], b: Sequence[str]) -> int:
    """Levenshtein distance over tokens, unit costs."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, tok_a in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, tok_b in enumerate(b, start=1):
            cur[j] = min(
                prev[j] + 1,
                cur[j - 1] + 1,
                prev[j - 1] + (tok_a != tok_b),
            )
        prev = cur
    return prev[len(b)]


def _single_substitution(a: Sequence[str], b: Sequence[str]) -> bool:
    return len(a) == len(b) and sum(x != y for x, y in zip(a, b)) == 1


@dataclass(frozen=True)
class PerturbationCase:
    """A sentence, the subject-noun span to swap, and its replacement nouns."""

    id: int
    sentence: tuple[str, ...]
    target_span: Span
    replacements: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "sentence", tuple(self.sentence))
        object.__setattr__(
            self, "replacements", tuple(tuple(r) for r in self.replacements)
        )
        if self.target_span.end > len(self.sentence):
            raise SpanOutOfBounds(
                self.id, self.target_span.start, self.target_span.end, len(self.sentence)
            )
        if not self.replacements or any(not r for r in self.replacements):
            raise ValueError(f"case {self.id}: replacements must be non-empty")


@dataclass(frozen=True)
class ConsistencyVerdict:
    case_id: int
    repl_index: int
    edit_distance: int
    consistent: bool


def generate_perturbations(
    cases: Iterable[PerturbationCase],
) -> list[tuple[int, int, tuple[str, ...]]]:
    """One perturbed sentence per (case, replacement): swap the span, keep the rest."""
    out = []
    for case in cases:
        prefix = case.sentence[: case.target_span.start]
        suffix = case.sentence[case.target_span.end :]
        for idx, repl in enumerate(case.replacements):
            out.append((case.id, idx, prefix + tuple(repl) + suffix))
    return out


def consistency(
    orig_translation: Sequence[str],
    pert_translation: Sequence[str],
    *,
    allow_identical: bool = False,
    strict_substitution: bool = False,
    case_id: int = 0,
    repl_index: int = 0,
) -> ConsistencyVerdict:
    """Judge one translation pair.

    Default rule: consistent iff edit distance is exactly 1. allow_identical
    widens it to <= 1 (noun translated identically). strict_substitution
    additionally demands the single difference be an in-place word swap, the
    shape the noun substitution is expected to leave behind.
    """
    dist = word_edit_distance(orig_translation, pert_translation)
    ok = dist == 1 or (allow_identical and dist == 0)
    if strict_substitution and dist == 1:
        ok = _single_substitution(orig_translation, pert_translation)
    return ConsistencyVerdict(case_id, repl_index, dist, ok)


def consistency_score(verdicts: Sequence[ConsistencyVerdict]) -> float:
    """Percentage of consistent verdicts, reported to one decimal place."""
    if not verdicts:
        raise EmptyInput("no verdicts to score")
    return round(100.0 * sum(v.consistent for v in verdicts) / len(verdicts), 1)


def _ngrams(tokens: Sequence[str], order: int) -> Counter:
    return Counter(
        tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1)
    )


def corpus_bleu(
    hypotheses: Sequence[Sequence[str]],
    references: Sequence[Sequence[str]],
    max_order: int = 4,
    smoothing: str = "exp",
) -> float:
    """Corpus-level BLEU on pre-tokenized text, scaled to [0, 100].

    Geometric mean of modified n-gram precisions for orders 1..max_order times
    the brevity penalty. Zero match counts take exponential smoothing
    (1/(2 denom), then 1/(4 denom), ...). Orders the hypothesis corpus cannot
    form at all (no n-gram slots) drop out of the mean instead of zeroing it,
    so a perfect short corpus still scores 100.
    """
    if len(hypotheses) != len(references):
        raise LengthMismatch(len(hypotheses), len(references))
    if not hypotheses:
        raise EmptyCorpus("cannot score an empty corpus")
    if smoothing not in ("exp", "none"):
        raise ValueError(f"unknown smoothing {smoothing!r}")

    matches = [0] * max_order
    totals = [0] * max_order
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp = list(hyp)
        ref = list(ref)
        hyp_len += len(hyp)
        ref_len += len(ref)
        for k in range(1, max_order + 1):
            slots = len(hyp) - k + 1
            if slots <= 0:
                continue
            totals[k - 1] += slots
            ref_counts = _ngrams(ref, k)
            for ngram, count in _ngrams(hyp, k).items():
                matches[k - 1] += min(count, ref_counts.get(ngram, 0))

    if hyp_len == 0:
        return 0.0

    log_sum = 0.0
    effective_orders = 0
    smooth = 1.0
    for k in range(max_order):
        if totals[k] == 0:
            continue
        effective_orders += 1
        if matches[k] > 0:
            precision = matches[k] / totals[k]
        elif smoothing == "exp":
            smooth *= 2.0
            precision = 1.0 / (smooth * totals[k])
        else:
            return 0.0
        log_sum += math.log(precision)

    if effective_orders == 0:
        return 0.0
    brevity = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_sum / effective_orders)


def read_perturbation_cases(lines: Iterable[str]) -> list[PerturbationCase]:
    """TSV: `id TAB sentence TAB start TAB end TAB repl1|repl2|...`."""
    cases = []
    for line_no, line in enumerate(lines):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise ValueError(f"case line {line_no}: expected 5 tab-separated fields")
        case_id, sentence, start, end, repls = parts
        cases.append(
            PerturbationCase(
                int(case_id),
                tuple(sentence.split()),
                Span(int(start), int(end)),
                tuple(tuple(r.split()) for r in repls.split("|")),
            )
        )
    return cases


def format_verdict(v: ConsistencyVerdict) -> str:
    return f"{v.case_id}\t{v.repl_index}\t{v.edit_distance}\t{int(v.consistent)}"
