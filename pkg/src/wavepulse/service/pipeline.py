"""The chunk pipeline: recorded -> transcribed -> labeled -> split ->
summarized -> embedded, journaled and resumable.

Every stage writes its artifact atomically (tmp + rename) before the journal
records completion, and every stage is a no-op when its completion record
already exists. A crash at any point therefore leaves at most one stage to
redo, and redoing it rewrites byte-identical artifacts because the offline
clients are deterministic.
"""

from __future__ import annotations

import json
import logging
import shutil
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

from ..clients import (
    ClientConfig,
    MockClaimExtractor,
    MockEmbedder,
    MockGenerator,
    MockSegmentClassifier,
    MockSentimentClassifier,
    MockSummarizer,
    MockTranscriber,
)
from ..errors import ConfigError
from ..scheduling import parse_filename
from ..transcripts import (
    ContentLabel,
    LabeledTranscript,
    parse_segments,
    render_transcript,
    split_transcript,
)
from ..vectorstore import EmbeddingRecord, IndexWriter
from .config import EngineConfig
from .journal import QUARANTINED, STAGES, ChunkState, Journal

logger = logging.getLogger(__name__)

Checkpoint = Callable[[str], None]


class PipelineInterrupt(BaseException):
    """Raised by fault injectors to simulate a hard crash mid-run.

    Derives from BaseException so stage-level error handling never absorbs it.
    """


@dataclass
class EngineClients:
    transcriber: "Transcriber"
    classifier: "Classifier"
    summarizer: "Summarizer"
    claims: "ClaimExtractor"
    sentiment: "SentimentClassifier"
    embedder: "Embedder"
    generator: "Generator"


class Transcriber(Protocol):
    def transcribe(self, chunk: bytes): ...


class Classifier(Protocol):
    def classify_segments(self, segments, task: str) -> list[bool]: ...


class Summarizer(Protocol):
    def summarize(self, transcript: str) -> str: ...


class ClaimExtractor(Protocol):
    def extract_claim_stance(self, summary: str, narrative: str): ...


class SentimentClassifier(Protocol):
    def classify(self, text: str): ...


class Embedder(Protocol):
    def embed(self, text: str): ...


class Generator(Protocol):
    def generate(self, prompt: str) -> str: ...


def build_clients(config: EngineConfig) -> EngineClients:
    """Offline mode wires the deterministic mocks; live mode needs endpoints."""
    if config.offline:
        return EngineClients(
            transcriber=MockTranscriber(seed=config.seed),
            classifier=MockSegmentClassifier(),
            summarizer=MockSummarizer(),
            claims=MockClaimExtractor(),
            sentiment=MockSentimentClassifier(),
            embedder=MockEmbedder(dim=config.embedding_dim, seed=config.seed),
            generator=MockGenerator(),
        )

    from ..clients.live import (
        LiveClaimExtractor,
        LiveEmbedder,
        LiveGenerator,
        LiveSegmentClassifier,
        LiveSentimentClassifier,
        LiveSummarizer,
        LiveTranscriber,
    )

    def cc(name: str) -> ClientConfig:
        if name not in config.clients:
            raise ConfigError(f"live mode requires a client config for {name!r}")
        return config.clients[name]

    return EngineClients(
        transcriber=LiveTranscriber(cc("transcriber")),
        classifier=LiveSegmentClassifier(cc("classifier")),
        summarizer=LiveSummarizer(cc("summarizer")),
        claims=LiveClaimExtractor(cc("claims")),
        sentiment=LiveSentimentClassifier(cc("sentiment")),
        embedder=LiveEmbedder(cc("embedder"), dim=config.embedding_dim),
        generator=LiveGenerator(cc("generator")),
    )


def write_atomic(path: Path, data: str | bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    if isinstance(data, str):
        tmp.write_text(data, encoding="utf-8")
    else:
        tmp.write_bytes(data)
    tmp.replace(path)


class PipelineRunner:
    """Drives buffered chunks through all post-recording stages."""

    def __init__(
        self,
        config: EngineConfig,
        clients: EngineClients | None = None,
        checkpoint: Checkpoint | None = None,
    ):
        self.config = config
        self.layout = config.layout
        self.layout.ensure()
        self.journal = Journal(self.layout.journal_path)
        self.clients = clients or build_clients(config)
        self._checkpoint = checkpoint or (lambda label: None)
        self._index_writer: IndexWriter | None = None

    # ------------------------------------------------------------- discovery

    def discover_chunks(self) -> dict[str, Path | None]:
        """Chunk name -> buffered audio path (None once audio was released)."""
        chunks: dict[str, Path | None] = {}
        if self.layout.buffers_root.exists():
            for path in sorted(self.layout.buffers_root.glob("*/*.mp3")):
                chunks[path.stem] = path
        for chunk, state in self.journal.replay().items():
            if not state.quarantined and "embedded" not in state.done:
                chunks.setdefault(chunk, None)
        return dict(sorted(chunks.items()))

    # ------------------------------------------------------------ run loops

    def process_once(self) -> dict[str, int]:
        """One pass over all chunks; failed stages are retried on later passes."""
        states = self.journal.replay()
        progressed = 0
        for chunk, audio_path in self.discover_chunks().items():
            state = states.get(chunk, ChunkState())
            if state.quarantined:
                continue
            progressed += self._process_chunk(chunk, audio_path, state)
        counters = self.journal.stage_counters()
        counters["progressed"] = progressed
        return counters

    def run_until_settled(self, max_passes: int = 10) -> dict[str, int]:
        """Pass until every chunk is embedded or quarantined (or no progress)."""
        counters = self.journal.stage_counters()
        for _ in range(max_passes):
            counters = self.process_once()
            if counters["progressed"] == 0:
                break
        return counters

    # ---------------------------------------------------------------- stages

    def _process_chunk(self, chunk: str, audio_path: Path | None, state: ChunkState) -> int:
        progressed = 0
        for stage in STAGES:
            if stage in state.done:
                continue
            self._checkpoint(f"{chunk}:{stage}:begin")
            try:
                self._run_stage(stage, chunk, audio_path)
            except PipelineInterrupt:
                raise
            except Exception as exc:
                attempts = state.attempts(stage) + 1
                state.failures[stage] = attempts
                self.journal.record(
                    chunk, stage, "failed", attempt=attempts, error=str(exc)
                )
                logger.warning("chunk %s failed at %s (attempt %d): %s", chunk, stage, attempts, exc)
                if attempts >= self.config.max_stage_attempts:
                    self._quarantine(chunk, audio_path, stage)
                # the failure record itself is progress toward quarantine
                return progressed + 1
            self.journal.record(chunk, stage, "done")
            self._checkpoint(f"{chunk}:{stage}:journaled")
            state.done.add(stage)
            progressed += 1
            if stage == "transcribed" and not self.config.retain_audio and audio_path:
                audio_path.unlink(missing_ok=True)
                audio_path = None
        return progressed

    def _run_stage(self, stage: str, chunk: str, audio_path: Path | None) -> None:
        if stage == "recorded":
            return  # presence in a buffer is the completion condition
        if stage == "transcribed":
            self._stage_transcribe(chunk, audio_path)
        elif stage == "labeled":
            self._stage_label(chunk)
        elif stage == "split":
            self._stage_split(chunk)
        elif stage == "summarized":
            self._stage_summarize(chunk)
        elif stage == "embedded":
            self._stage_embed(chunk)
        else:
            raise ConfigError(f"unknown stage {stage!r}")

    def _stage_transcribe(self, chunk: str, audio_path: Path | None) -> None:
        if audio_path is None or not audio_path.exists():
            raise FileNotFoundError(f"no buffered audio for chunk {chunk}")
        segments = self.clients.transcriber.transcribe(audio_path.read_bytes())
        payload = json.dumps(
            [
                {"start": s.start, "end": s.end, "text": s.text, "speaker": s.speaker}
                for s in segments
            ],
            indent=2,
        )
        self._checkpoint(f"{chunk}:transcribed:pre-write")
        write_atomic(self.layout.raw_transcripts / f"{chunk}.json", payload)

    def _stage_label(self, chunk: str) -> None:
        segments = self._load_segments(chunk)
        political = self.clients.classifier.classify_segments(segments, task="political")
        political_segments = [s for s, flag in zip(segments, political) if flag]
        ad_flags = iter(
            self.clients.classifier.classify_segments(political_segments, task="ad")
            if political_segments
            else []
        )
        labels = []
        for flag in political:
            if not flag:
                labels.append(ContentLabel.APOLITICAL)
            elif next(ad_flags):
                labels.append(ContentLabel.POLITICAL_AD)
            else:
                labels.append(ContentLabel.POLITICAL_CONTENT)
        payload = json.dumps([label.value for label in labels])
        self._checkpoint(f"{chunk}:labeled:pre-write")
        write_atomic(self.layout.raw_transcripts / f"{chunk}.labels.json", payload)

    def _stage_split(self, chunk: str) -> None:
        segments = self._load_segments(chunk)
        labels = [
            ContentLabel(v)
            for v in json.loads(
                (self.layout.raw_transcripts / f"{chunk}.labels.json").read_text(
                    encoding="utf-8"
                )
            )
        ]
        meta = parse_filename(f"{chunk}.mp3")
        transcript = LabeledTranscript(
            chunk_meta=meta, segments=tuple(zip(segments, labels))
        )
        parts = split_transcript(transcript)
        self._checkpoint(f"{chunk}:split:pre-write")
        for name, part in parts.items():
            write_atomic(
                self.layout.part_dir(name) / f"{chunk}.txt", render_transcript(part)
            )

    def _stage_summarize(self, chunk: str) -> None:
        news = (self.layout.part_dir("news") / f"{chunk}.txt").read_text(
            encoding="utf-8"
        )
        if not news.strip():
            logger.info("chunk %s has no news content; nothing to summarize", chunk)
            return
        summary = self.clients.summarizer.summarize(news)
        self._checkpoint(f"{chunk}:summarized:pre-write")
        write_atomic(self.layout.summaries / f"{chunk}.txt", summary)

    def _stage_embed(self, chunk: str) -> None:
        summary_path = self.layout.summaries / f"{chunk}.txt"
        if not summary_path.exists():
            logger.info("chunk %s has no summary; nothing to embed", chunk)
            return
        text = summary_path.read_text(encoding="utf-8")
        vector = self.clients.embedder.embed(text)
        meta = parse_filename(f"{chunk}.mp3")
        record = EmbeddingRecord(
            id=chunk,
            vector=vector,
            metadata={
                "state": meta.state,
                "call_sign": meta.call_sign,
                "date": meta.start_instant.date().isoformat(),
                "time": meta.start_instant.strftime("%H:%M"),
            },
        )
        self._checkpoint(f"{chunk}:embedded:pre-write")
        if self._index_writer is None:
            self._index_writer = IndexWriter(
                self.layout.index, dim=self.config.embedding_dim
            )
        self._index_writer.append(record)

    def _quarantine(self, chunk: str, audio_path: Path | None, stage: str) -> None:
        self.layout.failed.mkdir(parents=True, exist_ok=True)
        if audio_path and audio_path.exists():
            shutil.move(str(audio_path), str(self.layout.failed / audio_path.name))
        self.journal.record(chunk, stage, QUARANTINED)
        logger.error("chunk %s quarantined after repeated failures at %s", chunk, stage)

    def _load_segments(self, chunk: str):
        raw = (self.layout.raw_transcripts / f"{chunk}.json").read_text(encoding="utf-8")
        return parse_segments(raw)


def distribute_recordings(config: EngineConfig) -> int:
    """Copy recorded chunks into buffer shards (idempotent, by filename).

    Round-robin over the sorted filenames keeps shard loads within one of
    each other and makes the assignment reproducible.
    """
    layout = config.layout
    layout.ensure()
    recordings = sorted(layout.recordings.glob("*.mp3"))
    moved = 0
    for i, path in enumerate(recordings):
        target_dir = layout.buffer(i % config.buffers)
        target_dir.mkdir(parents=True, exist_ok=True)
        target = target_dir / path.name
        if not target.exists() and not _anywhere_in_buffers(layout, path.name):
            shutil.copy2(str(path), str(target))
            moved += 1
    return moved


def _anywhere_in_buffers(layout, name: str) -> bool:
    return any(layout.buffers_root.glob(f"*/{name}"))
