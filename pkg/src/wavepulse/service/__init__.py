"""Pipeline orchestration, storage layout, analytics snapshots, HTTP API, CLI."""

from .config import EngineConfig, StorageLayout
from .journal import STAGES, ChunkState, Journal
from .pipeline import (
    EngineClients,
    PipelineInterrupt,
    PipelineRunner,
    build_clients,
    distribute_recordings,
)

__all__ = [
    "EngineConfig",
    "StorageLayout",
    "STAGES",
    "ChunkState",
    "Journal",
    "EngineClients",
    "PipelineInterrupt",
    "PipelineRunner",
    "build_clients",
    "distribute_recordings",
]
