import hashlib
import json
from datetime import datetime
from pathlib import Path

import pytest

from wavepulse.clients import load_fixture_audio
from wavepulse.scheduling import BROADCAST_TZ, AudioChunkMeta
from wavepulse.service import EngineConfig
from wavepulse.transcripts import ContentLabel, LabeledTranscript, parse_segments

FIXTURES = Path(__file__).parent / "fixtures"

# two stations carry byte-identical audio, so the fixture corpus contains one
# planted syndication pair (KXEL/WHIO) alongside two unrelated chunks
SHARED_AUDIO = b"SYNDICATED-FEED-0042\x00" * 400
FIXTURE_CHUNKS = {
    "GA_WDUN_2024_07_01_08_00": b"LOCAL-MORNING-SHOW-A\x01" * 400,
    "GA_WDUN_2024_07_01_08_30": b"LOCAL-MORNING-SHOW-B\x02" * 400,
    "IA_KXEL_2024_07_01_09_00": SHARED_AUDIO,
    "OH_WHIO_2024_07_02_08_00": SHARED_AUDIO,
}


def make_engine_config(root: Path, **overrides) -> EngineConfig:
    return EngineConfig(root=root, buffers=2, offline=True, **overrides)


def seed_buffers(config: EngineConfig, chunks: dict[str, bytes] | None = None) -> None:
    layout = config.layout
    layout.ensure()
    items = sorted((chunks or FIXTURE_CHUNKS).items())
    for i, (name, data) in enumerate(items):
        target = layout.buffer(i % config.buffers)
        target.mkdir(parents=True, exist_ok=True)
        (target / f"{name}.mp3").write_bytes(data)


def tree_hash(root: Path, subdirs=("transcripts", "summaries", "index")) -> str:
    """Content hash of the pipeline's output tree (journal/buffers excluded)."""
    digest = hashlib.sha256()
    for sub in subdirs:
        base = root / sub
        if not base.exists():
            continue
        for path in sorted(base.rglob("*")):
            if path.is_file():
                digest.update(str(path.relative_to(root)).encode())
                digest.update(path.read_bytes())
    return digest.hexdigest()


@pytest.fixture
def engine(tmp_path):
    config = make_engine_config(tmp_path / "data")
    seed_buffers(config)
    return config

SAMPLE_LABELS = [
    ContentLabel.POLITICAL_CONTENT,
    ContentLabel.POLITICAL_CONTENT,
    ContentLabel.POLITICAL_AD,
    ContentLabel.APOLITICAL,
    ContentLabel.POLITICAL_CONTENT,
]


@pytest.fixture
def sample_segments():
    from importlib import resources

    raw = (
        resources.files("wavepulse.clients") / "fixtures" / "sample_segments.json"
    ).read_text(encoding="utf-8")
    return parse_segments(json.loads(raw))


@pytest.fixture
def sample_chunk_meta():
    return AudioChunkMeta(
        state="CA",
        call_sign="KAHI",
        start_instant=datetime(2024, 8, 9, 13, 30, tzinfo=BROADCAST_TZ),
    )


@pytest.fixture
def sample_labeled(sample_segments, sample_chunk_meta):
    return LabeledTranscript(
        chunk_meta=sample_chunk_meta,
        segments=tuple(zip(sample_segments, SAMPLE_LABELS)),
    )


@pytest.fixture
def fixture_audio():
    return load_fixture_audio()


def golden(name: str) -> str:
    return (FIXTURES / "golden" / name).read_text(encoding="utf-8")
