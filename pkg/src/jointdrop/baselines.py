"""Token-level comparison augmenters: token drop, switch-out, zero-out.

All three rewrite tokens in place (lengths never change) and share the
per-pair RNG derivation with the joint-dropout augmenter. zero_out only marks
tokens: the consuming trainer must map the marker to an all-zero,
non-trainable embedding, which is outside this tool.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .corpus_io import SentencePair, check_token
from .errors import MissingVocabulary
from .rng import check_seed, pair_stream

METHODS = ("token_drop", "switch_out", "zero_out")


@dataclass(frozen=True)
class BaselineConfig:
    method: str
    rate: float = 0.3
    seed: int = 0
    drop_token: str = "<dropped>"
    zero_token: str = "<zero>"
    src_vocab: tuple[str, ...] | None = None
    tgt_vocab: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError(f"rate must be in [0, 1], got {self.rate}")
        check_token(self.drop_token)
        check_token(self.zero_token)
        check_seed(self.seed)
        if self.method == "switch_out":
            if not self.src_vocab:
                raise MissingVocabulary("source")
            if not self.tgt_vocab:
                raise MissingVocabulary("target")


def _mark_side(tokens: tuple[str, ...], rate: float, marker: str, rng) -> tuple[str, ...]:
    return tuple(marker if rng.random() < rate else tok for tok in tokens)


def _switch_side(tokens, rate, vocab, rng) -> tuple[str, ...]:
    out = []
    for tok in tokens:
        if rng.random() < rate:
            out.append(vocab[rng.randrange(len(vocab))])
        else:
            out.append(tok)
    return tuple(out)


def token_drop(pair: SentencePair, cfg: BaselineConfig, rng) -> SentencePair:
    """Replace each token, on both sides, by the drop marker with prob rate."""
    return SentencePair(
        pair.id,
        _mark_side(pair.src, cfg.rate, cfg.drop_token, rng),
        _mark_side(pair.tgt, cfg.rate, cfg.drop_token, rng),
    )


def switch_out(pair: SentencePair, cfg: BaselineConfig, rng) -> SentencePair:
    """Replace each token with prob rate by a uniform draw from its side's vocabulary."""
    if not cfg.src_vocab:
        raise MissingVocabulary("source")
    if not cfg.tgt_vocab:
        raise MissingVocabulary("target")
    return SentencePair(
        pair.id,
        _switch_side(pair.src, cfg.rate, cfg.src_vocab, rng),
        _switch_side(pair.tgt, cfg.rate, cfg.tgt_vocab, rng),
    )


def zero_out(pair: SentencePair, cfg: BaselineConfig, rng) -> SentencePair:
    """Like token_drop but with the zero-embedding marker."""
    return SentencePair(
        pair.id,
        _mark_side(pair.src, cfg.rate, cfg.zero_token, rng),
        _mark_side(pair.tgt, cfg.rate, cfg.zero_token, rng),
    )


_APPLY = {"token_drop": token_drop, "switch_out": switch_out, "zero_out": zero_out}


def augment_pair(pair: SentencePair, cfg: BaselineConfig) -> SentencePair:
    return _APPLY[cfg.method](pair, cfg, pair_stream(cfg.seed, pair.id))


def augment_corpus_baseline(
    corpus: Sequence[SentencePair], cfg: BaselineConfig, threads: int = 1
) -> list[SentencePair]:
    """Same doubling convention as joint dropout: originals, then one modified
    copy per pair in origin order."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            modified = list(pool.map(lambda p: augment_pair(p, cfg), corpus))
    else:
        modified = [augment_pair(p, cfg) for p in corpus]
    n = len(corpus)
    out = list(corpus)
    out.extend(SentencePair(n + i, m.src, m.tgt) for i, m in enumerate(modified))
    return out
