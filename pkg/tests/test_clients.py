import json

import numpy as np
import pytest

from wavepulse.clients import (
    ClientConfig,
    MockClaimExtractor,
    MockEmbedder,
    MockGenerator,
    MockSegmentClassifier,
    MockSentimentClassifier,
    MockSummarizer,
    MockTranscriber,
    Sentiment,
    Stance,
    StanceResult,
    build_summary_prompt,
    parse_stance_reply,
)
from wavepulse.clients.mocks import CORRUPT_MARKER
from wavepulse.errors import ClientError, ConfigError


class TestClientConfig:
    def test_defaults_valid(self):
        ClientConfig()

    def test_rejects_nonpositive_timeout(self):
        with pytest.raises(ConfigError):
            ClientConfig(timeout_s=0)

    def test_rejects_negative_retries(self):
        with pytest.raises(ConfigError):
            ClientConfig(retries=-1)


class TestStanceResult:
    def test_zero_mentions_force_neutral(self):
        with pytest.raises(ValueError):
            StanceResult(0, Stance.PROMOTE)

    def test_unknown_needs_mentions(self):
        with pytest.raises(ValueError):
            StanceResult(0, Stance.UNKNOWN)
        StanceResult(1, Stance.UNKNOWN)


class TestMockTranscriber:
    def test_fixture_audio_maps_to_pinned_segments(self, fixture_audio):
        segments = MockTranscriber().transcribe(fixture_audio)
        assert segments[0].text == "Here's Anna with headlines."
        assert segments[0].speaker == "SPEAKER_04"
        assert len(segments) == 5

    def test_empty_bytes_rejected(self):
        with pytest.raises(ValueError):
            MockTranscriber().transcribe(b"")

    def test_deterministic_for_same_bytes(self):
        a = MockTranscriber().transcribe(b"some synthetic chunk bytes")
        b = MockTranscriber().transcribe(b"some synthetic chunk bytes")
        assert a == b

    def test_different_bytes_differ(self):
        a = MockTranscriber().transcribe(b"chunk one")
        b = MockTranscriber().transcribe(b"chunk two")
        assert a != b

    def test_segments_satisfy_invariants(self):
        segments = MockTranscriber().transcribe(b"invariant check")
        for s in segments:
            assert 0 <= s.start <= s.end
            assert s.text.strip()
        starts = [s.start for s in segments]
        assert starts == sorted(starts)

    def test_corrupt_marker_raises(self):
        with pytest.raises(ClientError):
            MockTranscriber().transcribe(CORRUPT_MARKER + b"garbage")


class TestMockClassifier:
    def test_vote_is_political(self):
        (label,) = MockSegmentClassifier().classify_segments(
            ["Remember to vote on Tuesday."], task="political"
        )
        assert label is True

    def test_weather_is_not_political(self):
        (label,) = MockSegmentClassifier().classify_segments(
            ["Sunny skies expected tomorrow."], task="political"
        )
        assert label is False

    def test_empty_list(self):
        assert MockSegmentClassifier().classify_segments([], task="political") == []

    def test_batching_arithmetic(self):
        clf = MockSegmentClassifier(context_budget=200)
        texts = [f"segment {i} about the election" if i % 2 else f"plain {i}" for i in range(500)]
        labels = clf.classify_segments(texts, task="political")
        assert clf.request_count == 3
        assert len(labels) == 500
        # order preserved: political flags line up with the seeded pattern
        assert labels == [bool(i % 2) for i in range(500)]

    def test_ad_task(self):
        labels = MockSegmentClassifier().classify_segments(
            ["This message was paid for by the committee.", "Now the news."], task="ad"
        )
        assert labels == [True, False]


class TestMockSummarizer:
    def test_prompt_contains_pii_line(self):
        s = MockSummarizer()
        s.summarize("[2024-08-09 13:45:46] SPEAKER_04: Hello there. More text.")
        assert "Removes personal identifiable information (PII)" in s.last_prompt

    def test_first_sentence_of_each_turn(self):
        transcript = (
            "[2024-08-09 13:45:46] SPEAKER_04: First point. Extra detail.\n"
            "[2024-08-09 13:45:50] SPEAKER_04: Same turn continues. Ignored.\n"
            "[2024-08-09 13:46:00] SPEAKER_19: Second speaker here. And more.\n"
        )
        assert (
            MockSummarizer().summarize(transcript)
            == "First point. Second speaker here."
        )

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            MockSummarizer().summarize("   ")

    def test_overlength_split_and_concatenated(self):
        s = MockSummarizer(max_input_chars=200)
        lines = [
            f"[2024-08-09 13:45:{i:02d}] SPEAKER_{i % 3:02d}: Sentence number {i} is here."
            for i in range(10)
        ]
        out = s.summarize("\n".join(lines))
        assert s.split_count >= 1
        assert "\n\n" in out

    def test_deterministic(self):
        t = "[2024-08-09 13:45:46] SPEAKER_04: Alpha beta. Gamma."
        assert MockSummarizer().summarize(t) == MockSummarizer().summarize(t)


class TestStanceParsing:
    def test_plain_text_reply(self):
        result = parse_stance_reply("mention_count: 3, stance: debunk")
        assert result == StanceResult(3, Stance.DEBUNK)

    def test_json_reply(self):
        result = parse_stance_reply(json.dumps({"mention_count": 2, "stance": "promote"}))
        assert result == StanceResult(2, Stance.PROMOTE)

    def test_quoted_loose_reply(self):
        result = parse_stance_reply('"mention_count": 4,\n"stance": "neutral"')
        assert result == StanceResult(4, Stance.NEUTRAL)

    def test_zero_mentions_neutral(self):
        assert parse_stance_reply("mention_count: 0, stance: promote") == StanceResult(
            0, Stance.NEUTRAL
        )

    def test_unparseable_stance_becomes_unknown(self):
        result = parse_stance_reply("mention_count: 5, stance: meh")
        assert result == StanceResult(5, Stance.UNKNOWN)

    def test_garbage_reply_counts_nothing(self):
        assert parse_stance_reply("???") == StanceResult(0, Stance.NEUTRAL)


class TestMockClaimExtractor:
    NARRATIVE = "the 2020 election being stolen, rigged, or false"

    def test_two_seeded_claim_sentences(self):
        summary = (
            "A caller said the 2020 election was stolen and rigged. "
            "The host repeated that the election was stolen. "
            "Weather is sunny tomorrow."
        )
        result = MockClaimExtractor().extract_claim_stance(summary, self.NARRATIVE)
        assert result.mention_count == 2
        assert result.stance is Stance.PROMOTE

    def test_no_claim_text(self):
        result = MockClaimExtractor().extract_claim_stance(
            "Local sports scores and a bake sale.", self.NARRATIVE
        )
        assert result == StanceResult(0, Stance.NEUTRAL)

    def test_debunking_summary(self):
        summary = (
            "Officials said claims that the election was stolen are false and were debunked."
        )
        result = MockClaimExtractor().extract_claim_stance(summary, self.NARRATIVE)
        assert result.stance is Stance.DEBUNK

    def test_empty_narrative_rejected(self):
        with pytest.raises(ValueError):
            MockClaimExtractor().extract_claim_stance("text", "  ")


class TestMockSentiment:
    def test_positive(self):
        assert MockSentimentClassifier().classify("great economy") is Sentiment.POS

    def test_negative(self):
        assert MockSentimentClassifier().classify("a bad crisis") is Sentiment.NEG

    def test_neutral(self):
        assert MockSentimentClassifier().classify("the meeting is at noon") is Sentiment.NEU

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            MockSentimentClassifier().classify("")

    def test_deterministic(self):
        clf = MockSentimentClassifier()
        assert clf.classify("great win today") == clf.classify("great win today")


class TestMockEmbedder:
    def test_dimension(self):
        assert MockEmbedder().embed("hello").shape == (1024,)

    def test_unit_norm(self):
        vec = MockEmbedder().embed("some summary text")
        assert abs(np.linalg.norm(vec) - 1.0) <= 1e-6

    def test_identical_for_same_text(self):
        a = MockEmbedder().embed("same text")
        b = MockEmbedder().embed("same text")
        assert np.array_equal(a, b)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            MockEmbedder().embed("")


class TestMockGenerator:
    def test_excerpts_top_source(self):
        prompt = (
            "Answer the question using only the numbered source summaries below.\n\n"
            "### Source 1 | station=WDUN state=GA date=2024-07-01 time=08:00\n"
            "County officials reviewed the vote count.\n\n"
            "### Source 2 | station=KENI state=AK date=2024-07-02 time=09:00\n"
            "Unrelated content.\n\n"
            "Question: what happened?\nAnswer:"
        )
        answer = MockGenerator().generate(prompt)
        assert answer.startswith("County officials reviewed the vote count.")
        assert "Unrelated" not in answer


class TestPromptAssembly:
    def test_transcript_substituted_verbatim(self):
        prompt = build_summary_prompt("THE TRANSCRIPT BODY")
        assert prompt.endswith("Spoken Text Transcription: THE TRANSCRIPT BODY")
