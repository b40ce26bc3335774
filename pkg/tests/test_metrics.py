"""Metric definitions: examples, degenerate cases, and invariants."""

import math
import random

import pytest
from hypothesis import given, strategies as st

from cgecscore import (
    BleuConfig,
    Corpus,
    EvaluationInstance,
    HypothesisSet,
    MeaningPreservationConfig,
    NormalizationPolicy,
    brevity_penalty,
    char_bleu,
    corpus_accuracy,
    evaluate_system,
    modified_precision,
    mp_average,
    mp_prime,
    mp_sentence,
    mp_system,
    sentence_match,
)

from corpusgen import make_corpus, make_hyps, random_corpus, random_sentence
from oracle_bleu import bleu_brute_force

T = 0.85


def single(hyp, refs, rid="1", source="src"):
    corpus = make_corpus([(rid, source, tuple(refs))])
    return make_hyps("sys", {rid: hyp}), corpus


class TestSentenceMatch:
    def test_first_reference(self):
        inst = EvaluationInstance("1", "s", ("但是", "可是"))
        assert sentence_match("但是", inst) == 1

    def test_any_reference_suffices(self):
        inst = EvaluationInstance("1", "s", ("r1", "r2", "r3"))
        assert sentence_match("r3", inst) == 1

    def test_one_char_off_is_zero(self):
        inst = EvaluationInstance("1", "s", ("但是好", "但是坏"))
        assert sentence_match("但是先", inst) == 0

    def test_normalization_applies_to_both_sides(self):
        inst = EvaluationInstance("1", "s", ("但是",))
        assert sentence_match("  但是\r\n", inst) == 1


class TestCorpusAccuracy:
    def test_quarter(self):
        corpus = make_corpus([(str(i), "s", (f"r{i}",)) for i in range(4)])
        hyps = make_hyps("sys", {"0": "r0", "1": "x", "2": "x", "3": "x"})
        assert corpus_accuracy(hyps, corpus) == 0.25

    def test_bounds(self):
        corpus = make_corpus([(str(i), "s", (f"r{i}",)) for i in range(3)])
        all_right = make_hyps("a", {str(i): f"r{i}" for i in range(3)})
        all_wrong = make_hyps("b", {str(i): "x" for i in range(3)})
        assert corpus_accuracy(all_right, corpus) == 1.0
        assert corpus_accuracy(all_wrong, corpus) == 0.0

    def test_coverage_required(self):
        corpus = make_corpus([("1", "s", ("r",)), ("2", "s", ("r",))])
        with pytest.raises(ValueError, match="cover"):
            corpus_accuracy(make_hyps("sys", {"1": "r"}), corpus)


class TestModifiedPrecision:
    def test_clipping(self):
        hyps, corpus = single("aab", ["ab"])
        stat = modified_precision(hyps, corpus, 1)
        assert (stat.numerator, stat.denominator) == (2, 3)
        assert stat.value == pytest.approx(2 / 3, abs=1e-15)

    def test_best_reference_caps(self):
        hyps, corpus = single("aa", ["a", "aa"])
        stat = modified_precision(hyps, corpus, 1)
        assert (stat.numerator, stat.denominator) == (2, 2)

    def test_identity_is_one(self):
        hyps, corpus = single("abcd", ["abcd"])
        for order in range(1, 5):
            stat = modified_precision(hyps, corpus, order)
            assert stat.value == 1.0

    def test_undefined_when_all_hypotheses_short(self):
        hyps, corpus = single("ab", ["abcd"])
        stat = modified_precision(hyps, corpus, 3)
        assert not stat.defined
        assert stat.value is None


class TestBrevityPenalty:
    def test_longer_hypothesis_no_penalty(self):
        hyps, corpus = single("a" * 10, ["a" * 8])
        stat = brevity_penalty(hyps, corpus)
        assert (stat.hypothesis_chars, stat.reference_chars) == (10, 8)
        assert stat.value == 1.0

    def test_short_hypothesis_penalized(self):
        hyps, corpus = single("a" * 8, ["a" * 10])
        stat = brevity_penalty(hyps, corpus)
        assert stat.value == pytest.approx(math.exp(1 - 10 / 8), abs=1e-12)
        assert stat.value == pytest.approx(0.77880, abs=5e-6)

    def test_equal_lengths_boundary(self):
        hyps, corpus = single("abcd", ["dcba"])
        assert brevity_penalty(hyps, corpus).value == 1.0

    def test_tie_goes_to_shorter_reference(self):
        # refs of length 3 and 5 are equidistant from a 4-char hypothesis
        hyps, corpus = single("abcd", ["abc", "abcde"])
        stat = brevity_penalty(hyps, corpus)
        assert stat.reference_chars == 3
        assert stat.value == 1.0

    def test_all_empty_hypotheses_degenerate(self):
        hyps, corpus = single("", ["abc"])
        stat = brevity_penalty(hyps, corpus)
        assert stat.degenerate
        assert stat.value == 0.0


class TestCharBleu:
    def test_perfect_system_scores_one(self):
        corpus = make_corpus(
            [("1", "s", ("abcde", "xyzzyx")), ("2", "s", ("bcdef",))]
        )
        hyps = make_hyps("sys", {"1": "abcde", "2": "bcdef"})
        assert char_bleu(hyps, corpus).value == 1.0

    def test_zero_precision_names_order(self):
        # unigrams overlap but no shared 4-gram anywhere
        corpus = make_corpus([("1", "s", ("abcd",))])
        hyps = make_hyps("sys", {"1": "acbd"})
        result = char_bleu(hyps, corpus)
        assert result.value == 0.0
        assert 4 in result.zero_orders
        assert any("P_4" in d for d in result.diagnostics)

    def test_all_empty_hypotheses(self):
        corpus = make_corpus([("1", "s", ("abcd",))])
        result = char_bleu(make_hyps("sys", {"1": ""}), corpus)
        assert result.value == 0.0
        assert result.brevity.degenerate

    def test_matches_brute_force_oracle_on_random_corpora(self):
        rng = random.Random(202)
        for _ in range(200):
            corpus, hyps = random_corpus(rng)
            got = char_bleu(hyps, corpus).value
            pairs = [
                (hyps.entries[inst.id], list(inst.references))
                for inst in corpus.instances
            ]
            want = bleu_brute_force(pairs)
            assert got == pytest.approx(want, abs=1e-12)

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            BleuConfig(max_order=2, weights=(0.9, 0.2))

    def test_custom_max_order(self):
        hyps, corpus = single("aab", ["aab"])
        result = char_bleu(hyps, corpus, BleuConfig(max_order=2))
        assert len(result.precisions) == 2
        assert result.value == 1.0


class TestMpSentence:
    def test_identity_is_exactly_one(self):
        assert mp_sentence("但是", "但是") == 1.0

    def test_disjoint_is_zero(self):
        assert mp_sentence("ab", "cd") == 0.0

    def test_harmonic_combination(self):
        # m=2, P=1, R=0.5 with t=0.85
        assert mp_sentence("ab", "abcd") == pytest.approx(0.5 / 0.925, abs=1e-12)

    def test_empty_sides(self):
        assert mp_sentence("", "abc") == 0.0
        assert mp_sentence("abc", "") == 0.0

    def test_order_insensitive(self):
        assert mp_sentence("abcd", "dcba") == 1.0

    @given(st.text(alphabet="abcde漢字", min_size=1, max_size=12),
           st.text(alphabet="abcde漢字", min_size=1, max_size=12))
    def test_bounds(self, c, o):
        value = mp_sentence(c, o)
        assert 0.0 <= value <= 1.0

    @given(st.text(alphabet="abc漢", min_size=1, max_size=10),
           st.text(alphabet="abc漢", min_size=1, max_size=10),
           st.randoms())
    def test_permutation_invariant(self, c, o, rand):
        shuffled_c = list(c)
        rand.shuffle(shuffled_c)
        shuffled_o = list(o)
        rand.shuffle(shuffled_o)
        assert mp_sentence("".join(shuffled_c), "".join(shuffled_o)) == mp_sentence(c, o)

    def test_t_must_be_strictly_inside_unit_interval(self):
        with pytest.raises(ValueError):
            MeaningPreservationConfig(t=1.0)
        with pytest.raises(ValueError):
            MeaningPreservationConfig(t=0.0)


class TestMpAggregates:
    def test_mp_average_one_when_refs_equal_sources(self):
        corpus = make_corpus([("1", "aaa", ("aaa",)), ("2", "bb", ("bb",))])
        assert mp_average(corpus) == 1.0

    def test_mp_average_flat_mean_over_pairs(self):
        corpus = make_corpus([("1", "abcd", ("ab", "abcd"))])
        s1 = mp_sentence("ab", "abcd")
        s2 = mp_sentence("abcd", "abcd")
        assert mp_average(corpus) == pytest.approx((s1 + s2) / 2, abs=1e-15)

    def test_mp_average_two_instances(self):
        corpus = make_corpus([("1", "ab", ("ab",)), ("2", "cd", ("cc",))])
        s1 = mp_sentence("ab", "ab")
        s2 = mp_sentence("cc", "cd")
        assert mp_average(corpus) == pytest.approx((s1 + s2) / 2, abs=1e-15)

    def test_mp_prime_zero_for_reference_system(self):
        corpus = make_corpus([("1", "abcd", ("abcf",)), ("2", "xy", ("xyz",))])
        hyps = make_hyps("gold", {"1": "abcf", "2": "xyz"})
        assert mp_prime(hyps, corpus) == 0.0

    def test_identity_system(self):
        corpus = make_corpus([("1", "abcd", ("abcf",)), ("2", "xy", ("xyz",))])
        hyps = make_hyps("copy", {"1": "abcd", "2": "xy"})
        assert mp_system(hyps, corpus) == 1.0
        assert mp_prime(hyps, corpus) == pytest.approx(
            abs(1.0 - mp_average(corpus)), abs=1e-15
        )


class TestEvaluateSystem:
    def test_perfect_system_composition(self):
        corpus = make_corpus([("1", "abcde", ("abcdf",)), ("2", "vwxyz", ("vwxyy",))])
        hyps = make_hyps("gold", {"1": "abcdf", "2": "vwxyy"})
        report = evaluate_system(hyps, corpus)
        assert report.acc_sen == 1.0
        assert report.bleu.value == 1.0
        assert report.mp_prime == 0.0

    def test_identity_system_mp_is_one(self):
        corpus = make_corpus([("1", "abcde", ("abcdf",))])
        hyps = make_hyps("copy", {"1": "abcde"})
        report = evaluate_system(hyps, corpus)
        assert report.acc_sen == 0.0
        assert report.mp == 1.0

    def test_internal_consistency(self):
        rng = random.Random(11)
        for _ in range(25):
            corpus, hyps = random_corpus(rng)
            report = evaluate_system(hyps, corpus, keep_per_sentence=True)
            assert report.mp_prime == abs(report.mp - report.mp_average)
            assert report.acc_sen == sum(
                s.exact_match for s in report.per_sentence
            ) / report.num_instances
            assert 0.0 <= report.acc_sen <= 1.0
            assert 0.0 <= report.bleu.value <= 1.0
            assert 0.0 <= report.mp <= 1.0

    def test_parallelism_does_not_change_report(self):
        rng = random.Random(5)
        corpus, hyps = random_corpus(rng, max_instances=30, max_len=12)
        sequential = evaluate_system(hyps, corpus, jobs=1, keep_per_sentence=True)
        threaded = evaluate_system(hyps, corpus, jobs=4, keep_per_sentence=True)
        assert sequential == threaded

    def test_instance_order_invariance(self):
        rng = random.Random(13)
        corpus, hyps = random_corpus(rng, max_instances=6)
        flipped = Corpus(tuple(reversed(corpus.instances)))
        a = evaluate_system(hyps, corpus)
        b = evaluate_system(hyps, flipped)
        assert a.acc_sen == b.acc_sen
        assert a.bleu.value == pytest.approx(b.bleu.value, abs=1e-15)
        assert a.mp == pytest.approx(b.mp, abs=1e-15)
        assert a.mp_prime == pytest.approx(b.mp_prime, abs=1e-15)

    def test_empty_corpus_is_usage_error(self):
        with pytest.raises(ValueError):
            corpus_accuracy(make_hyps("sys", {}), Corpus(()))


class TestReferenceMonotonicity:
    """Adding a reference can only help the match statistics: accuracy and
    every clipped numerator are non-decreasing, denominators are untouched."""

    def test_numerators_never_decrease(self):
        rng = random.Random(99)
        for _ in range(200):
            corpus, hyps = random_corpus(rng)
            target = rng.randrange(corpus.size)
            extra = random_sentence(rng, 1, 8)
            grown = _with_extra_reference(corpus, target, extra)
            for order in (1, 2, 3):
                before = modified_precision(hyps, corpus, order)
                after = modified_precision(hyps, grown, order)
                assert after.numerator >= before.numerator
                assert after.denominator == before.denominator

    def test_accuracy_never_decreases(self):
        rng = random.Random(98)
        for _ in range(200):
            corpus, hyps = random_corpus(rng)
            target = rng.randrange(corpus.size)
            extra = random_sentence(rng, 1, 8)
            grown = _with_extra_reference(corpus, target, extra)
            assert corpus_accuracy(hyps, grown) >= corpus_accuracy(hyps, corpus)

    def test_duplicate_reference_changes_nothing(self):
        rng = random.Random(97)
        for _ in range(50):
            corpus, hyps = random_corpus(rng)
            target = rng.randrange(corpus.size)
            dup = corpus.instances[target].references[0]
            grown = _with_extra_reference(corpus, target, dup)
            assert evaluate_system(hyps, grown) == evaluate_system(hyps, corpus)


def _with_extra_reference(corpus: Corpus, index: int, extra: str) -> Corpus:
    instances = list(corpus.instances)
    inst = instances[index]
    refs = tuple(dict.fromkeys(inst.references + (extra,)))
    instances[index] = EvaluationInstance(inst.id, inst.source, refs)
    return Corpus(tuple(instances))


class TestNormalizationPolicyEffects:
    def test_punctuation_is_not_folded(self):
        corpus = make_corpus([("1", "好，的", ("好，的",))])
        full = make_hyps("full", {"1": "好，的"})
        ascii_ = make_hyps("ascii", {"1": "好,的"})
        assert corpus_accuracy(full, corpus) == 1.0
        assert corpus_accuracy(ascii_, corpus) == 0.0

    def test_strip_internal_whitespace_changes_scores(self):
        corpus = make_corpus([("1", "a b", ("ab",))])
        hyps = make_hyps("sys", {"1": "a b"})
        strict = corpus_accuracy(hyps, corpus)
        loose = corpus_accuracy(
            hyps, corpus, NormalizationPolicy(strip_internal_whitespace=True)
        )
        assert (strict, loose) == (0.0, 1.0)
