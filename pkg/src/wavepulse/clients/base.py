"""Shared client plumbing: config, retry loop, rate limiting, batching."""

from __future__ import annotations

import enum
import logging
import threading
import time as time_mod
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, TypeVar

from ..errors import ClientError, ConfigError

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class ClientConfig:
    """Transport settings for one external model service."""

    endpoint: str = ""
    model: str = ""
    timeout_s: float = 60.0
    retries: int = 2
    rpm: int | None = None
    api_key_env: str | None = None

    def __post_init__(self) -> None:
        if self.timeout_s <= 0:
            raise ConfigError(f"timeout_s must be > 0, got {self.timeout_s}")
        if self.retries < 0:
            raise ConfigError(f"retries must be >= 0, got {self.retries}")
        if self.rpm is not None and self.rpm < 1:
            raise ConfigError(f"rpm must be >= 1, got {self.rpm}")


class Sentiment(enum.Enum):
    POS = "pos"
    NEU = "neu"
    NEG = "neg"


class Stance(enum.Enum):
    PROMOTE = "promote"
    NEUTRAL = "neutral"
    DEBUNK = "debunk"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class StanceResult:
    """Mention count plus the broadcast's posture toward a claim.

    ``unknown`` only ever pairs with a positive mention count (an unparseable
    model reply); zero mentions are always neutral.
    """

    mention_count: int
    stance: Stance

    def __post_init__(self) -> None:
        if self.mention_count < 0:
            raise ValueError("mention_count must be >= 0")
        if self.mention_count == 0 and self.stance is not Stance.NEUTRAL:
            raise ValueError("zero mentions force a neutral stance")
        if self.stance is Stance.UNKNOWN and self.mention_count == 0:
            raise ValueError("unknown stance requires mention_count > 0")


@dataclass(frozen=True)
class SentimentCounts:
    """Positive / neutral / negative tallies for one aggregation cell."""

    pos: int = 0
    neu: int = 0
    neg: int = 0

    def __post_init__(self) -> None:
        if min(self.pos, self.neu, self.neg) < 0:
            raise ValueError("sentiment counts must be >= 0")

    @property
    def total(self) -> int:
        return self.pos + self.neu + self.neg

    def __add__(self, other: "SentimentCounts") -> "SentimentCounts":
        return SentimentCounts(
            self.pos + other.pos, self.neu + other.neu, self.neg + other.neg
        )

    def add(self, cls: Sentiment) -> "SentimentCounts":
        if cls is Sentiment.POS:
            return SentimentCounts(self.pos + 1, self.neu, self.neg)
        if cls is Sentiment.NEU:
            return SentimentCounts(self.pos, self.neu + 1, self.neg)
        return SentimentCounts(self.pos, self.neu, self.neg + 1)


class RateLimiter:
    """Blocking requests-per-minute limiter shared across threads."""

    def __init__(self, rpm: int | None, clock=time_mod.monotonic, sleep=time_mod.sleep):
        self.interval = 60.0 / rpm if rpm else 0.0
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next_slot = 0.0

    def acquire(self) -> None:
        if self.interval <= 0:
            return
        with self._lock:
            now = self._clock()
            wait = self._next_slot - now
            self._next_slot = max(now, self._next_slot) + self.interval
        if wait > 0:
            self._sleep(wait)


def call_with_retries(
    fn: Callable[[], T],
    retries: int,
    *,
    base_delay: float = 1.0,
    max_delay: float = 30.0,
    sleep: Callable[[float], None] = time_mod.sleep,
    retryable: tuple[type[Exception], ...] = (ClientError, OSError),
) -> T:
    """Run ``fn`` with up to ``retries`` retries on transport failures."""
    attempt = 0
    while True:
        try:
            return fn()
        except retryable as exc:
            if attempt >= retries:
                raise ClientError(f"gave up after {attempt + 1} attempt(s): {exc}") from exc
            delay = min(base_delay * 2**attempt, max_delay)
            logger.warning("client call failed (%s); retrying in %.1fs", exc, delay)
            sleep(delay)
            attempt += 1


def batched(items: Sequence[T], budget: int) -> Iterator[Sequence[T]]:
    """Split items into contiguous batches of at most ``budget`` elements."""
    if budget < 1:
        raise ConfigError(f"batch budget must be >= 1, got {budget}")
    for i in range(0, len(items), budget):
        yield items[i : i + budget]
