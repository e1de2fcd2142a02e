"""MinHash signatures over word shingles.

Signatures use H universal hash functions of the form (a*x + b) mod p with p
the Mersenne prime 2^61 - 1, applied to 32-bit shingle hashes. Coefficients
derive from the seed alone, so signatures are reproducible across processes
and platforms. The fraction of matching signature positions estimates the
Jaccard similarity of the underlying shingle sets.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError

_MERSENNE_PRIME = np.uint64((1 << 61) - 1)
_MAX_HASH_32 = np.uint64((1 << 32) - 1)

_TOKEN_RE = re.compile(r"[\w']+")

DEFAULT_NUM_HASHES = 256
DEFAULT_SHINGLE_WIDTH = 3
DEFAULT_SEED = 1


class TextTooShort(ValueError):
    """Text has fewer tokens than one shingle; excluded from matching."""


@dataclass(frozen=True)
class MinHashSignature:
    transcript_id: str
    values: np.ndarray  # shape (H,), uint64
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", np.ascontiguousarray(self.values, dtype=np.uint64)
        )

    @property
    def num_hashes(self) -> int:
        return int(self.values.shape[0])


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.casefold())


def shingles(text: str, width: int = DEFAULT_SHINGLE_WIDTH) -> set[str]:
    """Word w-grams of the case-folded text."""
    tokens = tokenize(text)
    if len(tokens) < width:
        raise TextTooShort(
            f"need at least {width} tokens for shingling, got {len(tokens)}"
        )
    return {" ".join(tokens[i : i + width]) for i in range(len(tokens) - width + 1)}


def _shingle_hash(shingle: str) -> int:
    # process-stable 32-bit hash (builtin hash() is salted per process)
    digest = hashlib.blake2b(shingle.encode("utf-8"), digest_size=4).digest()
    return int.from_bytes(digest, "big")


def _coefficients(num_hashes: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    a = rng.integers(1, 1 << 32, size=num_hashes, dtype=np.uint64)
    b = rng.integers(0, 1 << 32, size=num_hashes, dtype=np.uint64)
    return a, b


def signature_of_shingles(
    shingle_set: set[str],
    transcript_id: str = "",
    num_hashes: int = DEFAULT_NUM_HASHES,
    seed: int = DEFAULT_SEED,
) -> MinHashSignature:
    """Signature of an explicit shingle set (useful for controlled tests)."""
    if not shingle_set:
        raise TextTooShort("cannot sign an empty shingle set")
    a, b = _coefficients(num_hashes, seed)
    base = np.asarray([_shingle_hash(s) for s in sorted(shingle_set)], dtype=np.uint64)
    # (S, H): a*x + b stays below 2^64 because a, b, x are all < 2^32
    table = (a[None, :] * base[:, None] + b[None, :]) % _MERSENNE_PRIME & _MAX_HASH_32
    return MinHashSignature(
        transcript_id=transcript_id, values=table.min(axis=0), seed=seed
    )


def minhash_signature(
    text: str,
    transcript_id: str = "",
    num_hashes: int = DEFAULT_NUM_HASHES,
    shingle_width: int = DEFAULT_SHINGLE_WIDTH,
    seed: int = DEFAULT_SEED,
) -> MinHashSignature:
    """MinHash signature of a transcript's text."""
    return signature_of_shingles(
        shingles(text, shingle_width),
        transcript_id=transcript_id,
        num_hashes=num_hashes,
        seed=seed,
    )


def estimate_jaccard(a: MinHashSignature, b: MinHashSignature) -> float:
    """Fraction of matching signature positions."""
    if a.num_hashes != b.num_hashes:
        raise ConfigError(
            f"signature lengths differ: {a.num_hashes} vs {b.num_hashes}"
        )
    if a.seed != b.seed:
        raise ConfigError("signatures built with different seeds are not comparable")
    return float(np.count_nonzero(a.values == b.values)) / a.num_hashes


def exact_jaccard(x: set, y: set) -> float:
    """Exact set Jaccard; the independent oracle for signature estimates."""
    if not x and not y:
        return 1.0
    return len(x & y) / len(x | y)
