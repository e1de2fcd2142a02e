"""Model service clients: contracts, offline mocks, live transports, metrics."""

from .base import (
    ClientConfig,
    RateLimiter,
    Sentiment,
    SentimentCounts,
    Stance,
    StanceResult,
    batched,
    call_with_retries,
)
from .mocks import (
    MockClaimExtractor,
    MockEmbedder,
    MockGenerator,
    MockSegmentClassifier,
    MockSentimentClassifier,
    MockSummarizer,
    MockTranscriber,
    load_fixture_audio,
)
from .prompts import (
    build_claim_prompt,
    build_summary_prompt,
    parse_stance_reply,
)
from .wer import tokenize, word_error_rate

__all__ = [
    "ClientConfig",
    "RateLimiter",
    "Sentiment",
    "SentimentCounts",
    "Stance",
    "StanceResult",
    "batched",
    "call_with_retries",
    "MockClaimExtractor",
    "MockEmbedder",
    "MockGenerator",
    "MockSegmentClassifier",
    "MockSentimentClassifier",
    "MockSummarizer",
    "MockTranscriber",
    "load_fixture_audio",
    "build_claim_prompt",
    "build_summary_prompt",
    "parse_stance_reply",
    "tokenize",
    "word_error_rate",
]
