import random

import pytest

from oracles import reference_wer

from wavepulse.clients import tokenize, word_error_rate


class TestWordErrorRate:
    def test_identity(self):
        assert word_error_rate("a b c", "a b c") == 0.0

    def test_single_substitution(self):
        assert word_error_rate("a b c", "a x c") == pytest.approx(1 / 3)

    def test_deletion(self):
        assert word_error_rate("hello world", "world") == 0.5

    def test_empty_reference_rejected(self):
        with pytest.raises(ValueError):
            word_error_rate("", "anything")

    def test_case_and_punctuation_folded(self):
        assert word_error_rate("Hello, World!", "hello world") == 0.0

    def test_insertion_only(self):
        assert word_error_rate("one", "one two three") == 2.0

    def test_zero_iff_equal(self):
        assert word_error_rate("x y", "x y") == 0.0
        assert word_error_rate("x y", "x z") > 0.0

    def test_upper_bound(self):
        ref, hyp = "a b c d", "w x y z e f"
        assert word_error_rate(ref, hyp) <= max(1.0, 6 / 4)

    def test_agreement_with_dp_reference(self):
        rng = random.Random(7)
        vocab = [f"w{i}" for i in range(30)]
        for _ in range(500):
            ref = [rng.choice(vocab) for _ in range(rng.randint(1, 40))]
            hyp = [rng.choice(vocab) for _ in range(rng.randint(0, 40))]
            assert word_error_rate(ref, hyp) == pytest.approx(reference_wer(ref, hyp))


class TestTokenize:
    def test_strips_punctuation(self):
        assert tokenize("Hello, world! It's fine.") == ["hello", "world", "it's", "fine"]

    def test_accepts_token_sequences(self):
        assert tokenize(["One", "TWO"]) == ["one", "two"]
