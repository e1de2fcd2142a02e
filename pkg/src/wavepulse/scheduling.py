"""Station schedules, recording windows, chunk naming, and buffer sharding.

All schedule arithmetic runs in a fixed UTC-4 offset; DST is deliberately
ignored so that a given schedule always expands to the same instants.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field, replace
from datetime import date, datetime, time, timedelta, timezone

from .errors import ConfigError, FilenameError, ScheduleError

logger = logging.getLogger(__name__)

# Broadcast tzoffset used for every station regardless of its civil timezone.
BROADCAST_TZ = timezone(timedelta(hours=-4), name="UTC-4")

# Recording day runs 05:00 through 03:00 the next calendar day.
OPERATING_START = time(5, 0)
OPERATING_END_NEXT_DAY = time(3, 0)

CALL_SIGN_RE = re.compile(r"^[AKNW][A-Z]{2,3}$")
STATE_RE = re.compile(r"^[A-Z]{2}$")
_TIME_RE = re.compile(r"^([01]\d|2[0-3]):([0-5]\d)$")

DEFAULT_CHUNK_SECONDS = 1800
DEFAULT_DURATION_SLACK = 5.0


@dataclass(frozen=True)
class ScheduleEntry:
    """One station: stream URL, identity, and its daily recording times.

    ``times`` holds an even number of HH:MM strings; consecutive pairs are
    window start/end. An end that is clock-earlier than its start rolls over
    past midnight.
    """

    url: str
    radio_name: str
    state: str
    times: tuple[str, ...]

    def __post_init__(self) -> None:
        if not CALL_SIGN_RE.match(self.radio_name):
            raise ScheduleError(
                f"call sign {self.radio_name!r} must match {CALL_SIGN_RE.pattern}"
            )
        if not STATE_RE.match(self.state):
            raise ScheduleError(f"state {self.state!r} must be a 2-letter code")
        if len(self.times) < 2 or len(self.times) % 2 != 0:
            raise ScheduleError(
                f"station {self.radio_name}: times must have even length >= 2, "
                f"got {len(self.times)}"
            )
        for stamp in self.times:
            if not _TIME_RE.match(stamp):
                raise ScheduleError(
                    f"station {self.radio_name}: bad clock time {stamp!r}"
                )
        for start, end in self.window_pairs():
            if start == end:
                raise ScheduleError(
                    f"station {self.radio_name}: window start equals end ({start})"
                )

    def window_pairs(self) -> list[tuple[str, str]]:
        return [
            (self.times[i], self.times[i + 1]) for i in range(0, len(self.times), 2)
        ]


@dataclass(frozen=True)
class RecordingWindow:
    """A half-open [start, end) span during which one station is recorded."""

    station: str
    start: datetime
    end: datetime

    def __post_init__(self) -> None:
        if self.start.tzinfo is None or self.end.tzinfo is None:
            raise ScheduleError("recording window instants must be timezone-aware")
        if self.start >= self.end:
            raise ScheduleError(
                f"window for {self.station} has start >= end ({self.start} / {self.end})"
            )

    @property
    def duration_seconds(self) -> float:
        return (self.end - self.start).total_seconds()


@dataclass(frozen=True)
class AudioChunkMeta:
    """Identity of one recorded audio chunk.

    ``start_instant`` is minute-precision; the rendered filename round-trips
    through :func:`parse_filename` on state, call sign, and start instant.
    """

    state: str
    call_sign: str
    start_instant: datetime
    duration: float = DEFAULT_CHUNK_SECONDS
    path: str = ""
    buffer_id: int | None = None
    duration_slack: float = field(default=DEFAULT_DURATION_SLACK, compare=False)

    def __post_init__(self) -> None:
        if not STATE_RE.match(self.state):
            raise FilenameError(f"state {self.state!r} must be a 2-letter code")
        if not CALL_SIGN_RE.match(self.call_sign):
            raise FilenameError(f"call sign {self.call_sign!r} is not valid")
        if self.start_instant.second or self.start_instant.microsecond:
            raise FilenameError("chunk start instants carry minute precision only")
        if self.duration < 0 or self.duration > DEFAULT_CHUNK_SECONDS + self.duration_slack:
            raise FilenameError(
                f"chunk duration {self.duration}s exceeds "
                f"{DEFAULT_CHUNK_SECONDS}s + {self.duration_slack}s slack"
            )

    def key_fields(self) -> tuple[str, str, datetime]:
        return (self.state, self.call_sign, self.start_instant)


def parse_schedule(document: str | bytes | list) -> list[ScheduleEntry]:
    """Parse a schedule JSON array into validated entries, in document order.

    Accepts the raw JSON text or an already-decoded list. Each record carries
    ``url``, ``radio_name``, ``state``, and a ``time`` array of HH:MM strings.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ScheduleError(f"schedule document is not valid JSON: {exc}") from exc
    if not isinstance(document, list):
        raise ScheduleError("schedule document must be a JSON array of stations")

    entries: list[ScheduleEntry] = []
    for i, record in enumerate(document):
        if not isinstance(record, dict):
            raise ScheduleError(f"schedule entry {i} is not an object")
        try:
            times = record.get("time", record.get("times"))
            if times is None:
                raise ScheduleError("missing 'time' array")
            entries.append(
                ScheduleEntry(
                    url=str(record["url"]),
                    radio_name=str(record["radio_name"]),
                    state=str(record["state"]),
                    times=tuple(str(t) for t in times),
                )
            )
        except KeyError as exc:
            raise ScheduleError(f"schedule entry {i}: missing field {exc}") from exc
        except ScheduleError as exc:
            raise ScheduleError(f"schedule entry {i}: {exc}") from exc
    return entries


def operating_span(day: date) -> tuple[datetime, datetime]:
    """The 05:00 -> 03:00(+1) span recordings must fall inside, in UTC-4."""
    start = datetime.combine(day, OPERATING_START, tzinfo=BROADCAST_TZ)
    end = datetime.combine(
        day + timedelta(days=1), OPERATING_END_NEXT_DAY, tzinfo=BROADCAST_TZ
    )
    return start, end


def expand_windows(entry: ScheduleEntry, day: date) -> list[RecordingWindow]:
    """Expand one station's schedule into concrete windows for ``day``.

    Ends that are clock-earlier than their start roll to the next calendar
    day. Windows are clipped to the operating span; a window that falls
    entirely outside it contributes nothing (logged).
    """
    span_start, span_end = operating_span(day)
    windows: list[RecordingWindow] = []
    for start_s, end_s in entry.window_pairs():
        start = datetime.combine(
            day, _parse_clock(start_s), tzinfo=BROADCAST_TZ
        )
        end_day = day if end_s > start_s else day + timedelta(days=1)
        end = datetime.combine(end_day, _parse_clock(end_s), tzinfo=BROADCAST_TZ)

        clipped_start = max(start, span_start)
        clipped_end = min(end, span_end)
        if clipped_start >= clipped_end:
            logger.warning(
                "station %s: window %s-%s on %s lies outside the operating span",
                entry.radio_name, start_s, end_s, day,
            )
            continue
        windows.append(
            RecordingWindow(station=entry.radio_name, start=clipped_start, end=clipped_end)
        )
    return windows


def _parse_clock(stamp: str) -> time:
    hh, mm = stamp.split(":")
    return time(int(hh), int(mm))


_FILENAME_RE = re.compile(
    r"^([A-Z]{2})_([AKNW][A-Z]{2,3})_(\d{4})_(\d{2})_(\d{2})_(\d{2})_(\d{2})\.mp3$"
)


def chunk_filename(meta: AudioChunkMeta) -> str:
    """Render ``SS_CALL_yyyy_mm_dd_HH_MM.mp3`` for a chunk."""
    t = meta.start_instant
    return (
        f"{meta.state}_{meta.call_sign}_"
        f"{t.year:04d}_{t.month:02d}_{t.day:02d}_{t.hour:02d}_{t.minute:02d}.mp3"
    )


def parse_filename(name: str) -> AudioChunkMeta:
    """Parse a canonical chunk filename back into its metadata fields.

    Only the fields encoded in the name are recovered; duration, path, and
    buffer assignment take their defaults.
    """
    m = _FILENAME_RE.match(name)
    if m is None:
        raise FilenameError(f"{name!r} does not match SS_CALL_yyyy_mm_dd_HH_MM.mp3")
    state, call, y, mo, d, hh, mm = m.groups()
    try:
        start = datetime(int(y), int(mo), int(d), int(hh), int(mm), tzinfo=BROADCAST_TZ)
    except ValueError as exc:
        raise FilenameError(f"{name!r}: {exc}") from exc
    return AudioChunkMeta(state=state, call_sign=call, start_instant=start)


def distribute_to_buffers(
    chunks: list[AudioChunkMeta], n_buffers: int
) -> list[AudioChunkMeta]:
    """Assign chunks to buffer shards round-robin, in input order.

    Loads stay balanced (max - min <= 1) and the assignment is a partition:
    every chunk lands in exactly one buffer.
    """
    if n_buffers < 1:
        raise ConfigError(f"buffer count must be >= 1, got {n_buffers}")
    return [replace(c, buffer_id=i % n_buffers) for i, c in enumerate(chunks)]
