"""Stream recording: chunked capture with reconnect/backoff and an ingest log.

The recorder is transport-agnostic. A :class:`StreamSource` yields timestamped
byte blocks; the live HTTP source stamps blocks with wall-clock arrival, while
tests drive a scripted source and simulated clock. Audio bytes are opaque:
nothing here decodes, resamples, or inspects them.
"""

from __future__ import annotations

import json
import logging
import threading
import time as time_mod
import urllib.request
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path
from typing import Callable, Iterator, Protocol

from .errors import StreamError
from .scheduling import (
    BROADCAST_TZ,
    DEFAULT_CHUNK_SECONDS,
    AudioChunkMeta,
    RecordingWindow,
    chunk_filename,
)

logger = logging.getLogger(__name__)

AUDIO_CONTENT_TYPES = ("audio/", "application/ogg", "application/octet-stream")


class StreamDisconnect(StreamError):
    """The transport dropped mid-stream; the window may be retried."""


class StreamConnectError(StreamError):
    """Could not (re)establish the stream connection."""


class StreamConnection(Protocol):
    """An open stream yielding (arrival instant, bytes) blocks."""

    content_type: str

    def __iter__(self) -> Iterator[tuple[datetime, bytes]]: ...

    def close(self) -> None: ...


class StreamSource(Protocol):
    def connect(self, url: str) -> StreamConnection: ...


@dataclass(frozen=True)
class RecorderPolicy:
    """Reconnect and chunking knobs for one recording window."""

    chunk_seconds: int = DEFAULT_CHUNK_SECONDS
    backoff_initial: float = 1.0
    backoff_cap: float = 60.0
    retry_budget: int = 10
    duration_slack: float = 5.0

    def __post_init__(self) -> None:
        if not 0 < self.chunk_seconds <= DEFAULT_CHUNK_SECONDS:
            raise ValueError("chunk_seconds must be in (0, 1800]")


class IngestLog:
    """Append-only newline-JSON log shared by all recording tasks."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def append(
        self,
        station: str,
        window: RecordingWindow,
        event: str,
        instant: datetime,
        **detail,
    ) -> None:
        record = {
            "station": station,
            "window": [window.start.isoformat(), window.end.isoformat()],
            "event": event,
            "instant": instant.isoformat(),
        }
        if detail:
            record["detail"] = detail
        line = json.dumps(record, sort_keys=True)
        with self._lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def read(self) -> list[dict]:
        if not self.path.exists():
            return []
        with self.path.open(encoding="utf-8") as fh:
            return [json.loads(line) for line in fh if line.strip()]


def grid_floor(instant: datetime, chunk_seconds: int) -> datetime:
    """Largest chunk-grid boundary <= instant (grid anchored at midnight)."""
    midnight = instant.replace(hour=0, minute=0, second=0, microsecond=0)
    offset = (instant - midnight).total_seconds()
    return midnight + timedelta(seconds=int(offset // chunk_seconds) * chunk_seconds)


def grid_next(instant: datetime, chunk_seconds: int) -> datetime:
    """Smallest chunk-grid boundary strictly after instant."""
    return grid_floor(instant, chunk_seconds) + timedelta(seconds=chunk_seconds)


class _ChunkWriter:
    """Accumulates one chunk on disk; the file is renamed into place on close."""

    def __init__(self, out_dir: Path, state: str, call_sign: str, start: datetime):
        self.state = state
        self.call_sign = call_sign
        self.start = start
        self.name = chunk_filename(
            AudioChunkMeta(state=state, call_sign=call_sign, start_instant=start)
        )
        self.final_path = out_dir / self.name
        self._tmp_path = out_dir / (self.name + ".part")
        self._fh = self._tmp_path.open("wb")

    def write(self, data: bytes) -> None:
        self._fh.write(data)

    def close(self, end: datetime, slack: float) -> AudioChunkMeta:
        self._fh.close()
        self._tmp_path.replace(self.final_path)
        duration = (end - self.start).total_seconds()
        return AudioChunkMeta(
            state=self.state,
            call_sign=self.call_sign,
            start_instant=self.start,
            duration=duration,
            path=str(self.final_path),
            duration_slack=slack,
        )

    def abandon(self) -> None:
        self._fh.close()
        self._tmp_path.unlink(missing_ok=True)


def record_stream(
    window: RecordingWindow,
    url: str,
    *,
    state: str,
    source: StreamSource,
    out_dir: str | Path,
    ingest: IngestLog,
    policy: RecorderPolicy = RecorderPolicy(),
    clock: Callable[[], datetime] | None = None,
    sleep: Callable[[float], None] = time_mod.sleep,
) -> Iterator[AudioChunkMeta]:
    """Record one window, yielding chunk metadata as each chunk completes.

    Chunks are cut on the wall-clock grid of ``chunk_seconds`` (30 minutes by
    default, so cuts land on :00/:30). On a mid-chunk disconnect the open
    chunk is closed short and, after reconnecting with exponential backoff,
    recording resumes at the next grid boundary; the skipped span is logged
    as a gap. Exhausting the retry budget aborts the window with a gap
    through its end. A non-audio content type aborts the window immediately.
    """
    clock = clock or (lambda: datetime.now(tz=BROADCAST_TZ))
    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)

    attempts_used = 0
    consecutive_failures = 0
    record_from = window.start  # earliest instant bytes may be kept
    writer: _ChunkWriter | None = None

    ingest.append(window.station, window, "window_start", clock())

    def close_writer(end: datetime) -> AudioChunkMeta | None:
        nonlocal writer
        if writer is None:
            return None
        meta = writer.close(end, policy.duration_slack)
        writer = None
        ingest.append(
            window.station, window, "chunk", end,
            name=meta.path and Path(meta.path).name, duration=meta.duration,
        )
        return meta

    while True:
        now = clock()
        if now >= window.end:
            break
        try:
            conn = source.connect(url)
        except StreamConnectError as exc:
            attempts_used += 1
            consecutive_failures += 1
            if attempts_used >= policy.retry_budget:
                ingest.append(
                    window.station, window, "aborted", clock(),
                    reason=str(exc), gap_until=window.end.isoformat(),
                )
                logger.error("window %s aborted: retry budget exhausted", window)
                return
            delay = min(
                policy.backoff_initial * 2 ** (consecutive_failures - 1),
                policy.backoff_cap,
            )
            sleep(delay)
            continue

        ctype = getattr(conn, "content_type", "") or ""
        if not ctype.startswith(AUDIO_CONTENT_TYPES):
            conn.close()
            ingest.append(
                window.station, window, "non_audio_fatal", clock(), content_type=ctype
            )
            logger.error("window %s: non-audio content type %r", window, ctype)
            return

        consecutive_failures = 0
        connected_at = clock()
        ingest.append(window.station, window, "connect", connected_at)
        if record_from > window.start and connected_at < record_from:
            # resuming after a disconnect: wait out the rest of the grid cell
            ingest.append(
                window.station, window, "gap", connected_at,
                until=record_from.isoformat(),
            )

        try:
            for instant, data in conn:
                if instant >= window.end:
                    meta = close_writer(window.end)
                    if meta:
                        yield meta
                    conn.close()
                    ingest.append(window.station, window, "window_end", window.end)
                    return
                if instant < record_from:
                    continue
                if writer is not None and instant >= _cell_end(writer.start, window, policy):
                    meta = close_writer(_cell_end(writer.start, window, policy))
                    if meta:
                        yield meta
                if writer is None:
                    start = max(window.start, grid_floor(instant, policy.chunk_seconds))
                    writer = _ChunkWriter(out_path, state, window.station, start)
                writer.write(data)
        except StreamDisconnect:
            dropped_at = clock()
            meta = close_writer(min(dropped_at, window.end))
            if meta:
                yield meta
            ingest.append(window.station, window, "disconnect", dropped_at)
            if dropped_at >= window.end:
                ingest.append(window.station, window, "window_end", window.end)
                return
            record_from = grid_next(dropped_at, policy.chunk_seconds)
            continue

        # clean end of stream before window end counts as a disconnect
        conn.close()
        ended_at = clock()
        meta = close_writer(min(ended_at, window.end))
        if meta:
            yield meta
        if ended_at >= window.end:
            break
        ingest.append(window.station, window, "disconnect", ended_at, reason="eof")
        record_from = grid_next(ended_at, policy.chunk_seconds)

    ingest.append(window.station, window, "window_end", clock())


def _cell_end(chunk_start: datetime, window: RecordingWindow, policy: RecorderPolicy) -> datetime:
    return min(window.end, grid_next(chunk_start, policy.chunk_seconds))


class HttpStreamConnection:
    """Live HTTP stream; blocks are stamped with arrival wall-clock time."""

    def __init__(self, response, clock: Callable[[], datetime], block_size: int = 8192):
        self._response = response
        self._clock = clock
        self._block = block_size
        self.content_type = response.headers.get("Content-Type", "") or ""

    def __iter__(self) -> Iterator[tuple[datetime, bytes]]:
        while True:
            try:
                data = self._response.read(self._block)
            except OSError as exc:
                raise StreamDisconnect(str(exc)) from exc
            if not data:
                return
            yield self._clock(), data

    def close(self) -> None:
        try:
            self._response.close()
        except OSError:
            pass


class HttpStreamSource:
    """Opens radio stream URLs over HTTP(S)."""

    def __init__(self, timeout: float = 15.0, clock: Callable[[], datetime] | None = None):
        self.timeout = timeout
        self.clock = clock or (lambda: datetime.now(tz=BROADCAST_TZ))

    def connect(self, url: str) -> HttpStreamConnection:
        try:
            response = urllib.request.urlopen(url, timeout=self.timeout)
        except OSError as exc:
            raise StreamConnectError(f"{url}: {exc}") from exc
        return HttpStreamConnection(response, self.clock)


def record_window_to_list(*args, **kwargs) -> list[AudioChunkMeta]:
    """Drain :func:`record_stream` into a list (convenience for callers)."""
    return list(record_stream(*args, **kwargs))
