import itertools
import random
from collections import Counter
from datetime import datetime

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import golden
from wavepulse.errors import SegmentError
from wavepulse.scheduling import BROADCAST_TZ, AudioChunkMeta
from wavepulse.transcripts import (
    CONTINUATION_MARKERS,
    ContentLabel,
    LabeledTranscript,
    TranscriptSegment,
    normalize_speaker,
    parse_segments,
    render_transcript,
    split_transcript,
)

META = AudioChunkMeta(
    state="CA",
    call_sign="KAHI",
    start_instant=datetime(2024, 8, 9, 13, 30, tzinfo=BROADCAST_TZ),
)


def seg(i, text="segment text"):
    return TranscriptSegment(
        start=float(10 * i), end=float(10 * i + 5), text=f"{text} {i}", speaker="SPEAKER_00"
    )


def labeled(labels):
    return LabeledTranscript(
        chunk_meta=META,
        segments=tuple((seg(i), label) for i, label in enumerate(labels)),
    )


class TestParseSegments:
    def test_sample_document_first_record(self, sample_segments):
        first = sample_segments[0]
        assert first == TranscriptSegment(
            946.93, 948.391, "Here's Anna with headlines.", "SPEAKER_04"
        )

    def test_empty(self):
        assert parse_segments("[]") == []

    def test_end_before_start_rejected(self):
        doc = [{"start": 5, "end": 3, "text": "x", "speaker": "SPEAKER_00"}]
        with pytest.raises(SegmentError, match="segment 0"):
            parse_segments(doc)

    def test_missing_field_names_index(self):
        doc = [
            {"start": 1, "end": 2, "text": "ok", "speaker": 0},
            {"start": 3, "end": 4, "speaker": 1},
        ]
        with pytest.raises(SegmentError, match="segment 1.*text"):
            parse_segments(doc)

    @pytest.mark.parametrize(
        "raw,expected",
        [("SPEAKER_04", "SPEAKER_04"), ("speaker_4", "SPEAKER_04"), (7, "SPEAKER_07"), ("19", "SPEAKER_19")],
    )
    def test_speaker_normalization(self, raw, expected):
        assert normalize_speaker(raw) == expected

    def test_blank_text_rejected(self):
        doc = [{"start": 1, "end": 2, "text": "  ", "speaker": 0}]
        with pytest.raises(SegmentError):
            parse_segments(doc)


def reference_split(labels):
    """Brute-force splitter: for each class, walk original indices and insert
    a marker between consecutive kept segments separated by a foreign run."""
    out = {}
    for target in ContentLabel:
        kept = [i for i, lbl in enumerate(labels) if lbl is target]
        lines = []
        for prev, cur in zip([None] + kept, kept):
            if prev is not None and cur - prev > 1:
                run = labels[prev + 1 : cur]
                counts = Counter(run)
                best = max(counts.values())
                winner = next(lbl for lbl in run if counts[lbl] == best)
                lines.append(("marker", CONTINUATION_MARKERS[winner]))
            lines.append(("segment", cur))
        out[target] = lines
    return out


class TestSplitTranscript:
    def test_ad_between_news(self):
        parts = split_transcript(
            labeled(
                [
                    ContentLabel.POLITICAL_CONTENT,
                    ContentLabel.POLITICAL_AD,
                    ContentLabel.POLITICAL_CONTENT,
                ]
            )
        )
        news = parts["news"].lines
        assert [line.is_marker for line in news] == [False, True, False]
        assert news[1].text == "political ad..."

    def test_all_apolitical(self):
        parts = split_transcript(labeled([ContentLabel.APOLITICAL] * 3))
        assert parts["news"].lines == ()
        assert parts["ads"].lines == ()
        assert len(parts["apolitical"].lines) == 3

    def test_apolitical_between_ads(self):
        parts = split_transcript(
            labeled(
                [
                    ContentLabel.POLITICAL_AD,
                    ContentLabel.APOLITICAL,
                    ContentLabel.POLITICAL_AD,
                ]
            )
        )
        ads = parts["ads"].lines
        assert [line.is_marker for line in ads] == [False, True, False]
        assert ads[1].text == "apolitical content..."

    def test_all_three_label_patterns_match_reference(self):
        for pattern in itertools.product(list(ContentLabel), repeat=3):
            parts = split_transcript(labeled(list(pattern)))
            expected = reference_split(list(pattern))
            for name, target in [
                ("news", ContentLabel.POLITICAL_CONTENT),
                ("ads", ContentLabel.POLITICAL_AD),
                ("apolitical", ContentLabel.APOLITICAL),
            ]:
                got = [
                    ("marker", line.text) if line.is_marker else ("segment", int(line.offset // 10))
                    for line in parts[name].lines
                ]
                assert got == expected[target], pattern

    @given(
        st.lists(st.sampled_from(list(ContentLabel)), min_size=0, max_size=40)
    )
    @settings(max_examples=300)
    def test_partition_law(self, labels):
        parts = split_transcript(labeled(labels))
        total = sum(p.segment_count for p in parts.values())
        assert total == len(labels)
        # concatenating parts and sorting by offset reproduces the input order
        offsets = sorted(
            line.offset
            for part in parts.values()
            for line in part.lines
            if not line.is_marker
        )
        assert offsets == [float(10 * i) for i in range(len(labels))]

    def test_random_sequences_match_reference(self):
        rng = random.Random(42)
        for _ in range(200):
            labels = [rng.choice(list(ContentLabel)) for _ in range(rng.randint(0, 25))]
            parts = split_transcript(labeled(labels))
            expected = reference_split(labels)
            got_news = [
                ("marker", line.text) if line.is_marker else ("segment", int(line.offset // 10))
                for line in parts["news"].lines
            ]
            assert got_news == expected[ContentLabel.POLITICAL_CONTENT]


class TestRender:
    def test_offset_arithmetic(self):
        t = LabeledTranscript(
            chunk_meta=META,
            segments=(
                (
                    TranscriptSegment(946.93, 948.391, "Testing.", "SPEAKER_04"),
                    ContentLabel.POLITICAL_CONTENT,
                ),
            ),
        )
        rendered = render_transcript(split_transcript(t)["news"])
        assert rendered == "[2024-08-09 13:45:46] SPEAKER_04: Testing.\n"

    def test_empty_part_renders_empty(self):
        parts = split_transcript(labeled([]))
        assert render_transcript(parts["news"]) == ""

    def test_render_is_idempotent(self, sample_labeled):
        part = split_transcript(sample_labeled)["news"]
        assert render_transcript(part) == render_transcript(part)

    def test_golden_files(self, sample_labeled):
        parts = split_transcript(sample_labeled)
        assert render_transcript(parts["news"]) == golden("news.txt")
        assert render_transcript(parts["ads"]) == golden("ads.txt")
        assert render_transcript(parts["apolitical"]) == golden("apolitical.txt")
