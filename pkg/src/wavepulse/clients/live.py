"""Thin HTTP clients for hosted model services.

Every client shares one wire shape: POST ``endpoint`` with a JSON body and an
optional bearer token, expecting a JSON reply. Provider-specific adapters can
subclass and override the payload/reply mapping; the offline mocks remain the
default (and the only path exercised in CI).
"""

from __future__ import annotations

import base64
import logging
import os
import time

import httpx
import numpy as np

from ..errors import ClientError
from ..transcripts import TranscriptSegment, parse_segments
from .base import ClientConfig, RateLimiter, Sentiment, StanceResult, batched, call_with_retries
from .prompts import build_claim_prompt, build_summary_prompt, parse_stance_reply

logger = logging.getLogger(__name__)


class JsonServiceClient:
    """Rate-limited, retrying JSON-over-HTTP transport."""

    def __init__(
        self,
        config: ClientConfig,
        transport: httpx.BaseTransport | None = None,
        sleep=time.sleep,
    ):
        self.config = config
        self._limiter = RateLimiter(config.rpm)
        self._sleep = sleep
        self._http = httpx.Client(timeout=config.timeout_s, transport=transport)

    def post(self, payload: dict) -> dict:
        headers = {}
        if self.config.api_key_env:
            key = os.environ.get(self.config.api_key_env, "")
            if key:
                headers["Authorization"] = f"Bearer {key}"

        def attempt() -> dict:
            self._limiter.acquire()
            started = time.monotonic()
            try:
                response = self._http.post(
                    self.config.endpoint, json=payload, headers=headers
                )
            except httpx.HTTPError as exc:
                raise ClientError(str(exc)) from exc
            if response.status_code >= 500:
                raise ClientError(f"server error {response.status_code}")
            if response.status_code >= 400:
                raise RuntimeError(
                    f"request rejected ({response.status_code}): {response.text[:200]}"
                )
            logger.info(
                "%s call took %.2fs", self.config.model or self.config.endpoint,
                time.monotonic() - started,
            )
            return response.json()

        return call_with_retries(attempt, self.config.retries, sleep=self._sleep)

    def close(self) -> None:
        self._http.close()


class LiveTranscriber(JsonServiceClient):
    def transcribe(self, chunk: bytes) -> list[TranscriptSegment]:
        if not chunk:
            raise ValueError("cannot transcribe empty audio bytes")
        reply = self.post(
            {
                "model": self.config.model,
                "task": "transcribe_diarize",
                "audio_b64": base64.b64encode(chunk).decode("ascii"),
            }
        )
        return parse_segments(reply["segments"])


class LiveSegmentClassifier(JsonServiceClient):
    def __init__(self, config: ClientConfig, context_budget: int = 200, **kw):
        super().__init__(config, **kw)
        self.context_budget = context_budget

    def classify_segments(self, segments, task: str) -> list[bool]:
        texts = [getattr(s, "text", s) for s in segments]
        labels: list[bool] = []
        for batch in batched(texts, self.context_budget):
            labels.extend(self._classify_batch(list(batch), task))
        return labels

    def _classify_batch(self, texts: list[str], task: str) -> list[bool]:
        payload = {"model": self.config.model, "task": f"classify_{task}", "texts": texts}
        for _ in range(2):  # one retry on an unparseable reply
            reply = self.post(payload)
            raw = reply.get("labels")
            if isinstance(raw, list) and len(raw) == len(texts):
                return [bool(v) for v in raw]
        # Default keeps content flowing: not-political for the political pass,
        # not-an-ad for the ad pass. Flagged low confidence in the log.
        logger.warning(
            "classifier reply unparseable twice; defaulting %d segments (task=%s)",
            len(texts), task,
        )
        return [False] * len(texts)


class LiveSummarizer(JsonServiceClient):
    def summarize(self, transcript: str) -> str:
        if not transcript.strip():
            raise ValueError("cannot summarize an empty transcript")
        reply = self.post(
            {"model": self.config.model, "prompt": build_summary_prompt(transcript)}
        )
        return str(reply["text"])


class LiveClaimExtractor(JsonServiceClient):
    def extract_claim_stance(self, summary: str, narrative: str) -> StanceResult:
        if not narrative.strip():
            raise ValueError("narrative description must be non-empty")
        reply = self.post(
            {"model": self.config.model, "prompt": build_claim_prompt(summary, narrative)}
        )
        return parse_stance_reply(str(reply.get("text", "")))


class LiveSentimentClassifier(JsonServiceClient):
    def classify(self, text: str) -> Sentiment:
        if not text.strip():
            raise ValueError("cannot score empty text")
        reply = self.post({"model": self.config.model, "task": "sentiment", "text": text})
        return Sentiment(str(reply["label"]).lower())


class LiveEmbedder(JsonServiceClient):
    def __init__(self, config: ClientConfig, dim: int = 1024, **kw):
        super().__init__(config, **kw)
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        if not text.strip():
            raise ValueError("cannot embed empty text")
        reply = self.post({"model": self.config.model, "task": "embed", "text": text})
        vec = np.asarray(reply["embedding"], dtype=np.float64)
        if vec.shape != (self.dim,):
            raise ClientError(f"embedding has shape {vec.shape}, expected ({self.dim},)")
        return vec


class LiveGenerator(JsonServiceClient):
    def generate(self, prompt: str) -> str:
        reply = self.post({"model": self.config.model, "prompt": prompt})
        return str(reply["text"])
