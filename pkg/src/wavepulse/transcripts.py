"""Transcript segments, content labels, and the three-way transcript split.

Each chunk's diarized segments carry one content label apiece. Splitting
produces three mutually exclusive rendered parts (news/discussion, political
ads, apolitical); wherever a part's consecutive segments were separated in
the broadcast by other content, a continuation marker names what was skipped
so readers can follow the original timeline.
"""

from __future__ import annotations

import enum
import json
import math
import re
from dataclasses import dataclass
from datetime import timedelta

from .errors import SegmentError
from .scheduling import AudioChunkMeta

SPEAKER_RE = re.compile(r"^SPEAKER_(\d+)$")


class ContentLabel(enum.Enum):
    APOLITICAL = "apolitical"
    POLITICAL_AD = "political_ad"
    POLITICAL_CONTENT = "political_content"


# Marker text inserted for a skipped run of each class.
CONTINUATION_MARKERS = {
    ContentLabel.POLITICAL_AD: "political ad...",
    ContentLabel.APOLITICAL: "apolitical content...",
    ContentLabel.POLITICAL_CONTENT: "news/discussion...",
}


@dataclass(frozen=True)
class TranscriptSegment:
    """One spoken utterance: offsets in seconds from chunk start."""

    start: float
    end: float
    text: str
    speaker: str

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise SegmentError(
                f"segment offsets invalid: start={self.start}, end={self.end}"
            )
        if not self.text.strip():
            raise SegmentError("segment text is empty")
        if not SPEAKER_RE.match(self.speaker):
            raise SegmentError(f"speaker label {self.speaker!r} not normalized")


def normalize_speaker(raw) -> str:
    """Coerce speaker labels to the canonical ``SPEAKER_NN`` form."""
    if isinstance(raw, int):
        return f"SPEAKER_{raw:02d}"
    text = str(raw).strip().upper()
    m = re.match(r"^(?:SPEAKER[_ ]?)?(\d+)$", text)
    if not m:
        raise SegmentError(f"cannot normalize speaker label {raw!r}")
    return f"SPEAKER_{int(m.group(1)):02d}"


def parse_segments(document: str | bytes | list) -> list[TranscriptSegment]:
    """Parse a segment JSON array, preserving order.

    Every record needs start, end, text, and speaker; errors name the index
    of the offending record.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SegmentError(f"segment document is not valid JSON: {exc}") from exc
    if not isinstance(document, list):
        raise SegmentError("segment document must be a JSON array")

    segments: list[TranscriptSegment] = []
    for i, record in enumerate(document):
        if not isinstance(record, dict):
            raise SegmentError(f"segment {i} is not an object")
        missing = [k for k in ("start", "end", "text", "speaker") if k not in record]
        if missing:
            raise SegmentError(f"segment {i}: missing field(s) {', '.join(missing)}")
        try:
            segments.append(
                TranscriptSegment(
                    start=float(record["start"]),
                    end=float(record["end"]),
                    text=str(record["text"]),
                    speaker=normalize_speaker(record["speaker"]),
                )
            )
        except SegmentError as exc:
            raise SegmentError(f"segment {i}: {exc}") from exc
        except (TypeError, ValueError) as exc:
            raise SegmentError(f"segment {i}: {exc}") from exc
    return segments


@dataclass(frozen=True)
class LabeledTranscript:
    """A chunk's segments plus one content label per segment."""

    chunk_meta: AudioChunkMeta
    segments: tuple[tuple[TranscriptSegment, ContentLabel], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "segments", tuple((seg, label) for seg, label in self.segments)
        )
        starts = [seg.start for seg, _ in self.segments]
        if starts != sorted(starts):
            raise SegmentError("segments must be ordered by start time")


@dataclass(frozen=True)
class RenderedLine:
    """One line of a rendered part: a spoken segment or a continuation marker."""

    text: str
    speaker: str | None = None
    offset: float | None = None  # seconds from chunk start; None for markers

    @property
    def is_marker(self) -> bool:
        return self.speaker is None


@dataclass(frozen=True)
class RenderedPart:
    chunk_meta: AudioChunkMeta
    label: ContentLabel
    lines: tuple[RenderedLine, ...]

    @property
    def segment_count(self) -> int:
        return sum(1 for line in self.lines if not line.is_marker)


def split_transcript(t: LabeledTranscript) -> dict[str, RenderedPart]:
    """Split a labeled transcript into news / ads / apolitical parts.

    Each segment lands in exactly one part, in original order. Between two
    consecutive segments of a part that were separated in the broadcast, one
    marker is inserted naming the skipped run's majority class (ties go to
    the class seen first in the run).
    """
    by_label: dict[ContentLabel, list[RenderedLine]] = {label: [] for label in ContentLabel}
    # pending run of foreign segments since each part's last own segment
    pending: dict[ContentLabel, list[ContentLabel]] = {label: [] for label in ContentLabel}

    for seg, label in t.segments:
        for other in ContentLabel:
            if other is label:
                continue
            pending[other].append(label)
        lines = by_label[label]
        if lines and pending[label]:
            lines.append(RenderedLine(text=_marker_for_run(pending[label])))
        pending[label] = []
        lines.append(RenderedLine(text=seg.text, speaker=seg.speaker, offset=seg.start))

    parts = {
        "news": ContentLabel.POLITICAL_CONTENT,
        "ads": ContentLabel.POLITICAL_AD,
        "apolitical": ContentLabel.APOLITICAL,
    }
    return {
        name: RenderedPart(chunk_meta=t.chunk_meta, label=label, lines=tuple(by_label[label]))
        for name, label in parts.items()
    }


def _marker_for_run(run: list[ContentLabel]) -> str:
    counts: dict[ContentLabel, int] = {}
    for label in run:
        counts[label] = counts.get(label, 0) + 1
    best = max(counts.values())
    for label in run:  # first-seen wins ties
        if counts[label] == best:
            return CONTINUATION_MARKERS[label]
    raise AssertionError("unreachable: run is non-empty")


def render_transcript(part: RenderedPart) -> str:
    """Render a part as text: ``[yyyy-mm-dd HH:MM:SS] SPEAKER_NN: text`` lines.

    Absolute timestamps are chunk start plus the floored segment offset;
    markers sit on their own lines. An empty part renders as the empty string.
    """
    out: list[str] = []
    base = part.chunk_meta.start_instant
    for line in part.lines:
        if line.is_marker:
            out.append(line.text)
        else:
            stamp = base + timedelta(seconds=math.floor(line.offset))
            out.append(
                f"[{stamp.strftime('%Y-%m-%d %H:%M:%S')}] {line.speaker}: {line.text}"
            )
    return "\n".join(out) + ("\n" if out else "")
