import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jointdrop.errors import EmptyCorpus, EmptyInput, LengthMismatch, SpanOutOfBounds
from jointdrop.evaluation import (
    ConsistencyVerdict,
    PerturbationCase,
    consistency,
    consistency_score,
    corpus_bleu,
    format_verdict,
    generate_perturbations,
    read_perturbation_cases,
    word_edit_distance,
)
from jointdrop.phrases import Span

# frozen from an independent big-float evaluation of the formulas, done
# before this metric was implemented
GOLDEN_CAT_SAT = 71.65313105737893       # hyp "the cat sat", ref "the cat sat down"
GOLDEN_SMOOTHED = 35.35533905932738      # hyp "a b c d", ref "a b x d"

tokens = st.sampled_from(["a", "b", "c", "d", "e"])
token_lists = st.lists(tokens, max_size=12).map(tuple)


def edit_distance_reference(a, b):
    # independent full-matrix implementation for cross-checking
    n, m = len(a), len(b)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][0] = i
    for j in range(m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            d[i][j] = min(
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
                d[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    return d[n][m]


class TestWordEditDistance:
    def test_identical(self):
        assert word_edit_distance(["a", "b"], ["a", "b"]) == 0

    def test_single_substitution(self):
        assert (
            word_edit_distance(
                "I saw a monkey today".split(), "I saw a cat today".split()
            )
            == 1
        )

    def test_empty_vs_three(self):
        assert word_edit_distance([], ["a", "b", "c"]) == 3

    def test_mixed_edits(self):
        assert word_edit_distance("a b c".split(), "b c d".split()) == 2
        assert word_edit_distance("one two three".split(), "two three".split()) == 1

    @given(token_lists, token_lists)
    def test_matches_reference(self, a, b):
        assert word_edit_distance(a, b) == edit_distance_reference(a, b)

    @given(token_lists, token_lists)
    def test_symmetry(self, a, b):
        assert word_edit_distance(a, b) == word_edit_distance(b, a)

    @given(token_lists, token_lists)
    def test_identity_of_indiscernibles(self, a, b):
        assert (word_edit_distance(a, b) == 0) == (a == b)

    @given(token_lists, token_lists, token_lists)
    def test_triangle_inequality(self, a, b, c):
        assert word_edit_distance(a, c) <= word_edit_distance(a, b) + word_edit_distance(b, c)


class TestPerturbations:
    def smallpox_case(self):
        return PerturbationCase(
            0,
            tuple("smallpox killed billions of people on this planet".split()),
            Span(0, 1),
            (("tuberculosis",),),
        )

    def test_subject_noun_swap(self):
        rows = generate_perturbations([self.smallpox_case()])
        assert rows == [
            (0, 0, tuple("tuberculosis killed billions of people on this planet".split()))
        ]

    def test_replacement_equal_to_original(self):
        case = PerturbationCase(1, ("a", "b"), Span(0, 1), (("a",),))
        assert generate_perturbations([case])[0][2] == ("a", "b")

    def test_multi_token_replacement_grows(self):
        case = PerturbationCase(2, ("a", "b"), Span(0, 1), (("x", "y", "z"),))
        out = generate_perturbations([case])[0][2]
        assert out == ("x", "y", "z", "b")
        assert len(out) == 2 + (3 - 1)

    def test_tokens_outside_span_preserved(self):
        case = PerturbationCase(3, ("a", "b", "c", "d"), Span(1, 3), (("q",),))
        assert generate_perturbations([case])[0][2] == ("a", "q", "d")

    def test_span_out_of_bounds(self):
        with pytest.raises(SpanOutOfBounds):
            PerturbationCase(4, ("a", "b"), Span(1, 3), (("x",),))

    def test_case_tsv_round_trip(self):
        lines = ["0\tsmallpox killed billions\t0\t1\ttuberculosis|the flu"]
        cases = read_perturbation_cases(lines)
        assert cases[0].replacements == (("tuberculosis",), ("the", "flu"))
        assert cases[0].target_span == Span(0, 1)


class TestConsistency:
    def test_one_word_difference(self):
        v = consistency("I saw a monkey today".split(), "I saw a cat today".split())
        assert v.edit_distance == 1
        assert v.consistent

    def test_identical_not_consistent_by_default(self):
        v = consistency(["a", "b"], ["a", "b"])
        assert v.edit_distance == 0
        assert not v.consistent

    def test_identical_allowed_with_flag(self):
        v = consistency(["a", "b"], ["a", "b"], allow_identical=True)
        assert v.consistent

    def test_three_word_difference(self):
        v = consistency("a b c x y".split(), "q r s x y".split())
        assert v.edit_distance == 3
        assert not v.consistent

    def test_strict_mode_accepts_in_place_swap(self):
        v = consistency(["a", "b", "c"], ["a", "x", "c"], strict_substitution=True)
        assert v.consistent

    def test_strict_mode_rejects_deletion(self):
        v = consistency(["a", "b", "c"], ["a", "c"], strict_substitution=True)
        assert v.edit_distance == 1
        assert not v.consistent

    @given(token_lists, token_lists)
    def test_symmetric(self, a, b):
        assert consistency(a, b).consistent == consistency(b, a).consistent

    def test_verdict_line(self):
        v = ConsistencyVerdict(3, 1, 2, False)
        assert format_verdict(v) == "3\t1\t2\t0"


class TestConsistencyScore:
    def test_all_consistent(self):
        verdicts = [ConsistencyVerdict(i, 0, 1, True) for i in range(4)]
        assert consistency_score(verdicts) == 100.0

    def test_eleven_of_hundred(self):
        verdicts = [ConsistencyVerdict(i, 0, 1, i < 11) for i in range(100)]
        assert consistency_score(verdicts) == 11.0

    def test_none_consistent(self):
        verdicts = [ConsistencyVerdict(i, 0, 0, False) for i in range(5)]
        assert consistency_score(verdicts) == 0.0

    def test_one_of_three(self):
        verdicts = [
            ConsistencyVerdict(0, 0, 1, True),
            ConsistencyVerdict(1, 0, 0, False),
            ConsistencyVerdict(2, 0, 3, False),
        ]
        assert consistency_score(verdicts) == 33.3

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            consistency_score([])


class TestCorpusBleu:
    def test_identity_scores_100(self):
        corpus = [["the", "cat"], ["a", "b", "c", "d", "e"]]
        assert corpus_bleu(corpus, corpus) == pytest.approx(100.0, abs=1e-9)

    def test_identity_short_sentences(self):
        corpus = [["hi"], ["a", "b"]]
        assert corpus_bleu(corpus, corpus) == pytest.approx(100.0, abs=1e-9)

    def test_golden_cat_sat(self):
        got = corpus_bleu([["the", "cat", "sat"]], [["the", "cat", "sat", "down"]])
        assert got == pytest.approx(GOLDEN_CAT_SAT, abs=1e-9)

    def test_golden_smoothing(self):
        got = corpus_bleu([["a", "b", "c", "d"]], [["a", "b", "x", "d"]])
        assert got == pytest.approx(GOLDEN_SMOOTHED, abs=1e-9)

    def test_permutation_invariance(self):
        rnd = random.Random(5)
        hyps = [[f"w{rnd.randrange(8)}" for _ in range(rnd.randint(3, 9))] for _ in range(30)]
        refs = [[f"w{rnd.randrange(8)}" for _ in range(rnd.randint(3, 9))] for _ in range(30)]
        base = corpus_bleu(hyps, refs)
        order = list(range(30))
        rnd.shuffle(order)
        assert corpus_bleu([hyps[i] for i in order], [refs[i] for i in order]) == pytest.approx(
            base, abs=1e-9
        )

    def test_adding_perfect_pair_never_lowers(self):
        rnd = random.Random(11)
        for _ in range(25):
            n = rnd.randint(1, 10)
            hyps = [[f"w{rnd.randrange(6)}" for _ in range(rnd.randint(1, 8))] for _ in range(n)]
            refs = [[f"w{rnd.randrange(6)}" for _ in range(rnd.randint(1, 8))] for _ in range(n)]
            extra = [f"w{rnd.randrange(6)}" for _ in range(rnd.randint(1, 8))]
            before = corpus_bleu(hyps, refs)
            after = corpus_bleu(hyps + [extra], refs + [extra])
            assert after >= before - 1e-9

    def test_smoothing_none_zeroes_on_missing_order(self):
        assert corpus_bleu([["a", "b", "c", "d"]], [["q", "r", "s", "t"]], smoothing="none") == 0.0

    def test_brevity_penalty_direction(self):
        # same matches, shorter hypothesis must not score higher
        full = corpus_bleu([["a", "b", "c", "d"]], [["a", "b", "c", "d"]])
        short = corpus_bleu([["a", "b", "c"]], [["a", "b", "c", "d"]])
        assert short < full

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            corpus_bleu([["a"]], [])

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            corpus_bleu([], [])
