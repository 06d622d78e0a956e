import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jointdrop.corpus_io import AlignedPair, Alignment, SentencePair
from jointdrop.phrases import (
    PhrasePair,
    Span,
    build_phrase_table,
    extract_phrase_pairs,
    extract_phrase_pairs_bruteforce,
    is_consistent,
    phrase_tokens,
)

from conftest import make_aligned_pair, random_aligned_pair

ROME_EXPECTED = {
    (("Sie",), ("She",)),
    (("Rom",), ("Rome",)),
    (("hat", "Rom", "besucht"), ("visited", "Rome")),
    (("Sie", "hat", "Rom", "besucht"), ("She", "visited", "Rome")),
}


@st.composite
def aligned_pairs(draw, max_len=8):
    n = draw(st.integers(1, max_len))
    m = draw(st.integers(1, max_len))
    links = draw(
        st.frozensets(st.tuples(st.integers(0, n - 1), st.integers(0, m - 1)), max_size=n * m)
    )
    return AlignedPair(
        SentencePair(0, tuple(f"s{i}" for i in range(n)), tuple(f"t{j}" for j in range(m))),
        Alignment(links),
    )


def token_pairs(ap, phrase_set):
    return {phrase_tokens(ap, pp) for pp in phrase_set}


class TestIsConsistent:
    def test_inner_box(self, rome_pair):
        assert is_consistent(rome_pair.alignment, Span(2, 3), Span(2, 3))

    def test_link_entering_from_outside(self, rome_pair):
        # (3,1) reaches "visited" from outside the source span "hat"
        assert not is_consistent(rome_pair.alignment, Span(1, 2), Span(1, 2))

    def test_empty_alignment(self):
        empty = Alignment(frozenset())
        assert not is_consistent(empty, Span(0, 1), Span(0, 1))

    def test_requires_inner_link(self):
        alignment = Alignment(frozenset({(0, 0)}))
        assert not is_consistent(alignment, Span(1, 2), Span(1, 2))


class TestExtraction:
    def test_visited_rome_set(self, rome_pair):
        got = token_pairs(rome_pair, extract_phrase_pairs(rome_pair))
        assert got == ROME_EXPECTED
        assert (("hat",), ("visited",)) not in got

    def test_single_link_pair(self):
        ap = make_aligned_pair("a", "x", [(0, 0)])
        assert extract_phrase_pairs(ap) == {PhrasePair(Span(0, 1), Span(0, 1))}

    def test_empty_alignment(self):
        ap = make_aligned_pair("a b", "x y", [])
        assert extract_phrase_pairs(ap) == set()

    def test_unaligned_boundary_expansion(self):
        # "b" is linked, "a" and "c"/"z" are not: spans may absorb them
        ap = make_aligned_pair("a b c", "y z", [(1, 0)])
        got = token_pairs(ap, extract_phrase_pairs(ap))
        assert (("b",), ("y",)) in got
        assert (("a", "b"), ("y", "z")) in got
        assert (("a", "b", "c"), ("y",)) in got

    def test_length_caps(self, rome_pair):
        got = token_pairs(rome_pair, extract_phrase_pairs(rome_pair, 1, 1))
        assert got == {(("Sie",), ("She",)), (("Rom",), ("Rome",))}

    @given(aligned_pairs())
    def test_matches_bruteforce(self, ap):
        assert extract_phrase_pairs(ap) == extract_phrase_pairs_bruteforce(ap)

    @given(aligned_pairs(max_len=6), st.integers(1, 6), st.integers(1, 6))
    def test_matches_bruteforce_with_caps(self, ap, cap_s, cap_t):
        assert extract_phrase_pairs(ap, cap_s, cap_t) == extract_phrase_pairs_bruteforce(
            ap, cap_s, cap_t
        )

    @given(aligned_pairs(max_len=6))
    def test_every_pair_consistent(self, ap):
        for pp in extract_phrase_pairs(ap):
            assert is_consistent(ap.alignment, pp.src_span, pp.tgt_span)

    @given(aligned_pairs(max_len=6), st.integers(1, 5), st.integers(1, 5))
    def test_monotone_in_length_caps(self, ap, cap_s, cap_t):
        smaller = extract_phrase_pairs(ap, cap_s, cap_t)
        larger = extract_phrase_pairs(ap, cap_s + 1, cap_t + 1)
        assert smaller <= larger
        assert larger <= extract_phrase_pairs(ap)

    @given(aligned_pairs(max_len=6))
    def test_symmetry_under_transposition(self, ap):
        flipped = AlignedPair(
            SentencePair(ap.pair.id, ap.pair.tgt, ap.pair.src),
            Alignment(frozenset((t, s) for s, t in ap.alignment.links)),
        )
        want = {
            PhrasePair(pp.tgt_span, pp.src_span) for pp in extract_phrase_pairs(ap)
        }
        assert extract_phrase_pairs(flipped) == want

    def test_seeded_random_sweep(self):
        rnd = random.Random(2024)
        for trial in range(200):
            ap = random_aligned_pair(rnd, trial)
            assert extract_phrase_pairs(ap) == extract_phrase_pairs_bruteforce(ap)


class TestPhraseTable:
    def test_single_pair_counts(self, rome_pair):
        table = build_phrase_table([rome_pair])
        entry = table.get(("Rom",), ("Rome",))
        assert entry is not None
        assert entry.count == 1
        assert entry.fwd_score == 1.0
        assert len(table) == 4

    def test_duplication_scales_counts_not_scores(self, rome_pair):
        once = build_phrase_table([rome_pair])
        twice = build_phrase_table([rome_pair, rome_pair])
        assert set(twice.entries) == set(once.entries)
        for key, stats in once.entries.items():
            assert twice.entries[key].count == 2 * stats.count
            assert twice.entries[key].fwd_score == pytest.approx(stats.fwd_score)

    def test_empty_corpus(self):
        assert len(build_phrase_table([])) == 0

    def test_fwd_scores_sum_to_one_per_source(self):
        # "a" pairs with both "x" and "x y" across two sentences
        corpus = [
            make_aligned_pair("a", "x", [(0, 0)], pair_id=0),
            make_aligned_pair("a b", "x y", [(0, 0), (1, 1)], pair_id=1),
        ]
        table = build_phrase_table(corpus)
        by_src = {}
        for (src, _tgt), stats in table.entries.items():
            by_src.setdefault(src, 0.0)
            by_src[src] += stats.fwd_score
        for total in by_src.values():
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_order_independent(self, jd_corpus):
        sample = jd_corpus[:40]
        forward = build_phrase_table(sample)
        backward = build_phrase_table(list(reversed(sample)))
        assert forward.entries == backward.entries

    def test_export_format(self, rome_pair):
        lines = build_phrase_table([rome_pair]).to_lines()
        assert "Rom ||| Rome ||| 1 1.000000" in lines
        keys = []
        for line in lines:
            src, tgt, stats = line.split(" ||| ")
            keys.append((src, tgt))
            count, score = stats.split()
            assert int(count) >= 1
            assert len(score.split(".")[1]) == 6
        assert keys == sorted(keys)
