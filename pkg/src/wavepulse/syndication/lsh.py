"""Banded locality-sensitive hashing over MinHash signatures.

With b bands of r rows each (b*r = H), a pair with signature agreement s
collides in at least one band with probability 1 - (1 - s^r)^b. The defaults
(32 bands of 8 rows over 256 hashes) make pairs at the 0.8 similarity
threshold near-certain candidates while keeping dissimilar pairs rare.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Sequence

from ..errors import ConfigError
from .minhash import MinHashSignature

DEFAULT_BANDS = 32
DEFAULT_ROWS = 8


def candidate_probability(similarity: float, bands: int = DEFAULT_BANDS, rows: int = DEFAULT_ROWS) -> float:
    """Analytic collision curve 1 - (1 - s^r)^b."""
    return 1.0 - (1.0 - similarity**rows) ** bands


def lsh_candidates(
    signatures: Sequence[MinHashSignature],
    bands: int = DEFAULT_BANDS,
    rows: int = DEFAULT_ROWS,
) -> set[tuple[str, str]]:
    """Unordered id pairs sharing at least one band bucket."""
    if not signatures:
        return set()
    num_hashes = signatures[0].num_hashes
    if bands * rows != num_hashes:
        raise ConfigError(
            f"bands*rows must equal signature length: {bands}*{rows} != {num_hashes}"
        )

    pairs: set[tuple[str, str]] = set()
    for band in range(bands):
        lo, hi = band * rows, (band + 1) * rows
        buckets: dict[bytes, list[str]] = defaultdict(list)
        for sig in signatures:
            if sig.num_hashes != num_hashes:
                raise ConfigError("signatures have mixed lengths")
            buckets[sig.values[lo:hi].tobytes()].append(sig.transcript_id)
        for members in buckets.values():
            if len(members) < 2:
                continue
            members = sorted(set(members))
            for i, left in enumerate(members):
                for right in members[i + 1 :]:
                    pairs.add((left, right))
    return pairs


def ordered_pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def all_pairs(ids: Iterable[str]) -> set[tuple[str, str]]:
    """Every unordered pair of distinct ids (brute-force oracle helper)."""
    seq = sorted(set(ids))
    return {(seq[i], seq[j]) for i in range(len(seq)) for j in range(i + 1, len(seq))}
