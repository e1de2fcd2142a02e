"""Exact flat vector index with metadata filtering and binary persistence.

Search is a full scan over the (optionally filtered) record set: exact by
construction, and fast enough at the corpus scales this engine targets. The
on-disk format is append-friendly: fixed-layout records in ``records.bin``
plus a ``manifest.json`` sidecar naming the dimension and the count of valid
records (which makes partially-written tails harmless).
"""

from __future__ import annotations

import json
import logging
import struct
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping

import numpy as np

from ..errors import VectorIndexError

logger = logging.getLogger(__name__)

DEFAULT_DIM = 1024
FORMAT_VERSION = 1

MetadataFilter = Callable[[Mapping[str, str]], bool] | Mapping[str, str] | None


@dataclass(frozen=True)
class EmbeddingRecord:
    id: str
    vector: np.ndarray
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        vec = np.asarray(self.vector, dtype=np.float32)
        if vec.ndim != 1:
            raise VectorIndexError(f"vector must be 1-d, got shape {vec.shape}")
        if not np.all(np.isfinite(vec)):
            raise VectorIndexError(f"vector for {self.id!r} has non-finite components")
        object.__setattr__(self, "vector", vec)
        object.__setattr__(self, "metadata", dict(self.metadata))


@dataclass(frozen=True)
class SearchHit:
    id: str
    distance: float  # squared L2
    similarity: float | None  # cosine; None if either vector is zero
    metadata: dict[str, str]


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """dot(a, b) / (|a| |b|); undefined (error) for zero vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise VectorIndexError("cosine similarity is undefined for zero vectors")
    return float(np.dot(a, b) / (norm_a * norm_b))


def _as_predicate(flt: MetadataFilter) -> Callable[[Mapping[str, str]], bool]:
    if flt is None:
        return lambda _meta: True
    if callable(flt):
        return flt
    wanted = dict(flt)
    return lambda meta: all(meta.get(k) == v for k, v in wanted.items())


class VectorIndex:
    """In-memory exact k-NN index; writes are serialized, reads see snapshots."""

    def __init__(self, dim: int = DEFAULT_DIM):
        if dim < 1:
            raise VectorIndexError(f"dimension must be >= 1, got {dim}")
        self.dim = dim
        self._lock = threading.Lock()
        self._ids: list[str] = []
        self._slot: dict[str, int] = {}
        self._metadata: list[dict[str, str]] = []
        self._vectors: list[np.ndarray] = []
        self._matrix: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self._ids)

    def __contains__(self, record_id: str) -> bool:
        return record_id in self._slot

    def add(self, record: EmbeddingRecord) -> None:
        """Insert a record; a duplicate id replaces the stored one (logged)."""
        if record.vector.shape != (self.dim,):
            raise VectorIndexError(
                f"vector for {record.id!r} has dimension "
                f"{record.vector.shape[0]}, index expects {self.dim}"
            )
        with self._lock:
            slot = self._slot.get(record.id)
            if slot is not None:
                logger.info("replacing existing record %r", record.id)
                self._vectors[slot] = record.vector
                self._metadata[slot] = dict(record.metadata)
            else:
                self._slot[record.id] = len(self._ids)
                self._ids.append(record.id)
                self._vectors.append(record.vector)
                self._metadata.append(dict(record.metadata))
            self._matrix = None

    def get(self, record_id: str) -> EmbeddingRecord | None:
        slot = self._slot.get(record_id)
        if slot is None:
            return None
        return EmbeddingRecord(
            id=record_id, vector=self._vectors[slot], metadata=self._metadata[slot]
        )

    def _snapshot(self) -> tuple[list[str], list[dict[str, str]], np.ndarray]:
        with self._lock:
            if self._matrix is None:
                self._matrix = (
                    np.stack(self._vectors).astype(np.float64)
                    if self._vectors
                    else np.empty((0, self.dim), dtype=np.float64)
                )
            return list(self._ids), list(self._metadata), self._matrix

    def knn_search(
        self, query: np.ndarray, k: int, flt: MetadataFilter = None
    ) -> list[SearchHit]:
        """Exact top-k by squared L2 over the filtered subset.

        Results come back sorted by ascending distance with ties broken by
        id; an empty filtered subset yields an empty result.
        """
        if k < 1:
            raise VectorIndexError(f"k must be >= 1, got {k}")
        q = np.asarray(query, dtype=np.float64)
        if q.shape != (self.dim,):
            raise VectorIndexError(
                f"query has dimension {q.shape}, index expects ({self.dim},)"
            )
        ids, metadata, matrix = self._snapshot()

        predicate = _as_predicate(flt)
        keep = [i for i, meta in enumerate(metadata) if predicate(meta)]
        if not keep:
            return []
        sub = matrix[keep]
        diff = sub - q[None, :]
        distances = np.sum(diff * diff, axis=1)

        order = np.lexsort((np.asarray([ids[i] for i in keep]), distances))
        q_norm = float(np.linalg.norm(q))
        hits: list[SearchHit] = []
        for pos in order[: min(k, len(keep))]:
            idx = keep[int(pos)]
            row_norm = float(np.linalg.norm(matrix[idx]))
            if q_norm == 0.0 or row_norm == 0.0:
                similarity = None
            else:
                similarity = float(np.dot(matrix[idx], q) / (row_norm * q_norm))
            hits.append(
                SearchHit(
                    id=ids[idx],
                    distance=float(distances[int(pos)]),
                    similarity=similarity,
                    metadata=dict(metadata[idx]),
                )
            )
        return hits

    def records(self) -> Iterable[EmbeddingRecord]:
        for i, record_id in enumerate(self._ids):
            yield EmbeddingRecord(
                id=record_id, vector=self._vectors[i], metadata=self._metadata[i]
            )

    # ---------------------------------------------------------------- storage

    def save(self, directory: str | Path) -> None:
        """Write all records plus the manifest; replaces any existing store."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        tmp = directory / "records.bin.tmp"
        with tmp.open("wb") as fh:
            for record in self.records():
                fh.write(_encode_record(record))
        tmp.replace(directory / "records.bin")
        _write_manifest(directory, self.dim, len(self))

    @classmethod
    def load(cls, directory: str | Path) -> "VectorIndex":
        """Read manifest + records; trailing bytes past the count are ignored."""
        directory = Path(directory)
        manifest = json.loads((directory / "manifest.json").read_text(encoding="utf-8"))
        index = cls(dim=int(manifest["dim"]))
        with (directory / "records.bin").open("rb") as fh:
            for _ in range(int(manifest["count"])):
                record = _read_record(fh, index.dim)
                index.add(record)
        return index


class IndexWriter:
    """Append records to an on-disk store without loading vectors back.

    Used by the pipeline's embed stage: appends are idempotent by id, and a
    crash between the record append and the manifest update leaves a tail
    that the next open truncates away.
    """

    def __init__(self, directory: str | Path, dim: int = DEFAULT_DIM):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.dim = dim
        self._records_path = self.directory / "records.bin"
        manifest_path = self.directory / "manifest.json"
        if manifest_path.exists():
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
            if int(manifest["dim"]) != dim:
                raise VectorIndexError(
                    f"store at {self.directory} has dim {manifest['dim']}, expected {dim}"
                )
            self.count = int(manifest["count"])
        else:
            self.count = 0
            self._records_path.touch()
            _write_manifest(self.directory, dim, 0)
        self._ids, valid_bytes = self._scan()
        actual = self._records_path.stat().st_size
        if actual > valid_bytes:
            logger.warning(
                "truncating %d bytes of partial tail in %s",
                actual - valid_bytes, self._records_path,
            )
            with self._records_path.open("rb+") as fh:
                fh.truncate(valid_bytes)

    def _scan(self) -> tuple[set[str], int]:
        ids: set[str] = set()
        offset = 0
        with self._records_path.open("rb") as fh:
            for _ in range(self.count):
                record = _read_record(fh, self.dim)
                ids.add(record.id)
                offset = fh.tell()
        return ids, offset

    def __contains__(self, record_id: str) -> bool:
        return record_id in self._ids

    def append(self, record: EmbeddingRecord) -> bool:
        """Append one record; a second append of the same id is a no-op."""
        if record.id in self._ids:
            return False
        if record.vector.shape != (self.dim,):
            raise VectorIndexError(
                f"vector for {record.id!r} has dimension "
                f"{record.vector.shape[0]}, store expects {self.dim}"
            )
        with self._records_path.open("ab") as fh:
            fh.write(_encode_record(record))
        self.count += 1
        self._ids.add(record.id)
        _write_manifest(self.directory, self.dim, self.count)
        return True


def _write_manifest(directory: Path, dim: int, count: int) -> None:
    payload = json.dumps(
        {"dim": dim, "count": count, "version": FORMAT_VERSION}, sort_keys=True
    )
    tmp = directory / "manifest.json.tmp"
    tmp.write_text(payload, encoding="utf-8")
    tmp.replace(directory / "manifest.json")


def _encode_record(record: EmbeddingRecord) -> bytes:
    id_bytes = record.id.encode("utf-8")
    meta_bytes = json.dumps(record.metadata, sort_keys=True).encode("utf-8")
    vec_bytes = record.vector.astype("<f4").tobytes()
    return (
        struct.pack("<I", len(id_bytes))
        + id_bytes
        + struct.pack("<I", len(meta_bytes))
        + meta_bytes
        + vec_bytes
    )


def _read_record(fh, dim: int) -> EmbeddingRecord:
    id_len = struct.unpack("<I", _read_exact(fh, 4))[0]
    record_id = _read_exact(fh, id_len).decode("utf-8")
    meta_len = struct.unpack("<I", _read_exact(fh, 4))[0]
    metadata = json.loads(_read_exact(fh, meta_len).decode("utf-8"))
    vector = np.frombuffer(_read_exact(fh, dim * 4), dtype="<f4")
    return EmbeddingRecord(id=record_id, vector=vector, metadata=metadata)


def _read_exact(fh, n: int) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise VectorIndexError("record store is truncated mid-record")
    return data
