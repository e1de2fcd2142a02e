"""Engine configuration and the fixed on-disk storage layout."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..clients.base import ClientConfig
from ..errors import ConfigError
from ..trends import DEFAULT_ALIASES, AliasTable

CLIENT_NAMES = (
    "transcriber",
    "classifier",
    "summarizer",
    "claims",
    "sentiment",
    "embedder",
    "generator",
)

DEFAULT_NARRATIVES = {
    "election-2020": "the 2020 election being stolen, rigged, or false",
}


class StorageLayout:
    """Directory tree under one root; every stage knows exactly where to look."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    @property
    def recordings(self) -> Path:
        return self.root / "recordings"

    def buffer(self, buffer_id: int) -> Path:
        return self.root / "buffers" / str(buffer_id)

    @property
    def buffers_root(self) -> Path:
        return self.root / "buffers"

    @property
    def raw_transcripts(self) -> Path:
        return self.root / "transcripts" / "raw"

    def part_dir(self, part: str) -> Path:
        if part not in ("news", "ads", "apolitical"):
            raise ConfigError(f"unknown transcript part {part!r}")
        return self.root / "transcripts" / part

    @property
    def summaries(self) -> Path:
        return self.root / "summaries"

    @property
    def index(self) -> Path:
        return self.root / "index"

    @property
    def analytics(self) -> Path:
        return self.root / "analytics"

    @property
    def failed(self) -> Path:
        return self.root / "failed"

    @property
    def journal_path(self) -> Path:
        return self.root / "journal" / "journal.ndjson"

    @property
    def ingest_log_path(self) -> Path:
        return self.root / "journal" / "ingest.ndjson"

    def ensure(self) -> None:
        for path in (
            self.recordings,
            self.buffers_root,
            self.raw_transcripts,
            self.part_dir("news"),
            self.part_dir("ads"),
            self.part_dir("apolitical"),
            self.summaries,
            self.index,
            self.analytics,
            self.failed,
            self.journal_path.parent,
        ):
            path.mkdir(parents=True, exist_ok=True)


@dataclass
class EngineConfig:
    """One config object drives recording, processing, analytics, and the API."""

    root: Path
    schedule_path: Path | None = None
    stations_path: Path | None = None  # optional roster with format/coordinates
    buffers: int = 2
    offline: bool = True
    retain_audio: bool = True

    api_host: str = "127.0.0.1"
    api_port: int = 8000

    # near-duplicate matching
    theta: float = 0.8
    num_hashes: int = 256
    bands: int = 32
    rows: int = 8
    shingle_width: int = 3
    seed: int = 1
    time_threshold_days: int | None = None  # accepted, not used by refinement

    # trend analytics
    trend_window_days: int = 7
    lead_window_days: int = 14
    aliases: AliasTable = field(default_factory=lambda: DEFAULT_ALIASES)
    party_entities: dict[str, str] = field(
        default_factory=lambda: {"D": "Harris", "R": "Trump"}
    )
    narratives: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_NARRATIVES))

    embedding_dim: int = 1024
    max_stage_attempts: int = 3
    clients: dict[str, ClientConfig] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.root = Path(self.root)
        if self.buffers < 1:
            raise ConfigError("buffers must be >= 1")
        if not 0.0 < self.theta <= 1.0:
            raise ConfigError("theta must be in (0, 1]")
        if self.bands * self.rows != self.num_hashes:
            raise ConfigError(
                f"bands*rows must equal num_hashes: "
                f"{self.bands}*{self.rows} != {self.num_hashes}"
            )
        if self.trend_window_days < 1 or self.lead_window_days < 1:
            raise ConfigError("rolling windows must be >= 1 day")
        for name in self.clients:
            if name not in CLIENT_NAMES:
                raise ConfigError(f"unknown client section {name!r}")

    @property
    def layout(self) -> StorageLayout:
        return StorageLayout(self.root)

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path | None = None) -> "EngineConfig":
        data = dict(data)
        base = Path(base_dir) if base_dir else Path.cwd()

        def resolve(key):
            if data.get(key):
                data[key] = (base / data[key]).resolve() if not Path(data[key]).is_absolute() else Path(data[key])

        resolve("root")
        resolve("schedule_path")
        resolve("stations_path")
        if "aliases" in data and not isinstance(data["aliases"], AliasTable):
            data["aliases"] = AliasTable.from_dict(data["aliases"])
        if "clients" in data:
            data["clients"] = {
                name: cfg if isinstance(cfg, ClientConfig) else ClientConfig(**cfg)
                for name, cfg in data["clients"].items()
            }
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> "EngineConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data, base_dir=path.parent)
