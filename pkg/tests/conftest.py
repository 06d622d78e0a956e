import random
from pathlib import Path

import pytest
from hypothesis import settings

from jointdrop.corpus_io import AlignedPair, Alignment, SentencePair

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def make_aligned_pair(src: str, tgt: str, links, pair_id: int = 0) -> AlignedPair:
    return AlignedPair(
        SentencePair(pair_id, tuple(src.split()), tuple(tgt.split())),
        Alignment(frozenset(links)),
    )


# the small visited-Rome pair used everywhere: a 4/3-token pair where one
# target word is linked from two source words
ROME_LINKS = [(0, 0), (1, 1), (3, 1), (2, 2)]


@pytest.fixture
def rome_pair() -> AlignedPair:
    return make_aligned_pair("Sie hat Rom besucht", "She visited Rome", ROME_LINKS)


def random_aligned_pair(rnd: random.Random, pair_id: int = 0, max_len: int = 8) -> AlignedPair:
    n = rnd.randint(1, max_len)
    m = rnd.randint(1, max_len)
    density = rnd.random()
    links = frozenset(
        (s, t) for s in range(n) for t in range(m) if rnd.random() < density
    )
    return AlignedPair(
        SentencePair(
            pair_id,
            tuple(f"s{i}" for i in range(n)),
            tuple(f"t{j}" for j in range(m)),
        ),
        Alignment(links),
    )


def synthetic_aligned_corpus(
    n_pairs: int = 1000,
    min_len: int = 5,
    max_len: int = 30,
    seed: int = 1234,
) -> list[AlignedPair]:
    """Noisy diagonal-ish alignments so every length bucket yields phrase candidates."""
    rnd = random.Random(seed)
    corpus = []
    for pid in range(n_pairs):
        n = rnd.randint(min_len, max_len)
        m = max(min_len, min(max_len, n + rnd.randint(-3, 3)))
        links = set()
        for s in range(n):
            if rnd.random() < 0.8:
                t = min(m - 1, max(0, round(s * m / n) + rnd.randint(-1, 1)))
                links.add((s, t))
        for _ in range(rnd.randint(0, 3)):
            links.add((rnd.randrange(n), rnd.randrange(m)))
        corpus.append(
            AlignedPair(
                SentencePair(
                    pid,
                    tuple(f"w{rnd.randrange(60)}" for _ in range(n)),
                    tuple(f"v{rnd.randrange(60)}" for _ in range(m)),
                ),
                Alignment(frozenset(links)),
            )
        )
    return corpus


@pytest.fixture(scope="session")
def jd_corpus() -> list[AlignedPair]:
    return synthetic_aligned_corpus()
