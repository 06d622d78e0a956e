"""Corpus augmentation via joint phrase-pair variables, baseline augmenters,
and a compositional-consistency evaluation harness for parallel corpora."""

__version__ = "0.1.0"

from .baselines import BaselineConfig, augment_corpus_baseline, switch_out, token_drop, zero_out
from .corpus_io import (
    AlignedPair,
    Alignment,
    SentencePair,
    bind_alignments,
    parse_alignment_line,
    read_parallel_corpus,
    write_corpus,
)
from .evaluation import (
    ConsistencyVerdict,
    PerturbationCase,
    consistency,
    consistency_score,
    corpus_bleu,
    generate_perturbations,
    word_edit_distance,
)
from .joint_dropout import (
    JdConfig,
    SubstitutionRecord,
    VariableizedPair,
    augment_corpus,
    candidate_phrases,
    induce_corpus,
    induce_pair,
    reconstruct,
    select_substitutions,
    substitute,
)
from .phrases import (
    PhrasePair,
    PhraseTable,
    Span,
    build_phrase_table,
    extract_phrase_pairs,
    extract_phrase_pairs_bruteforce,
    is_consistent,
)

__all__ = [
    "AlignedPair",
    "Alignment",
    "BaselineConfig",
    "ConsistencyVerdict",
    "JdConfig",
    "PerturbationCase",
    "PhrasePair",
    "PhraseTable",
    "SentencePair",
    "Span",
    "SubstitutionRecord",
    "VariableizedPair",
    "augment_corpus",
    "augment_corpus_baseline",
    "bind_alignments",
    "build_phrase_table",
    "candidate_phrases",
    "consistency",
    "consistency_score",
    "corpus_bleu",
    "extract_phrase_pairs",
    "extract_phrase_pairs_bruteforce",
    "generate_perturbations",
    "induce_corpus",
    "induce_pair",
    "is_consistent",
    "parse_alignment_line",
    "read_parallel_corpus",
    "reconstruct",
    "select_substitutions",
    "substitute",
    "switch_out",
    "token_drop",
    "word_edit_distance",
    "write_corpus",
    "zero_out",
]
