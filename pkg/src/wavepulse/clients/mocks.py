"""Deterministic offline stand-ins for every external model service.

Each mock is a pure function of its inputs and a fixed seed, so a pipeline
run in offline mode is exactly reproducible. The heuristics are intentionally
simple (keyword lexicons, hash projections); they exist to exercise the
pipeline, not to be accurate.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
import re
from importlib import resources
from typing import Sequence

import numpy as np

from ..errors import ClientError
from ..transcripts import TranscriptSegment, parse_segments
from .base import Sentiment, Stance, StanceResult, batched
from .prompts import build_claim_prompt, build_summary_prompt

logger = logging.getLogger(__name__)

CORRUPT_MARKER = b"CORRUPT"

_POLITICAL_KEYWORDS = frozenset(
    """vote votes voter voters voting elect election elections campaign
    president presidential senator senate congress governor ballot ballots
    poll polls democrat democrats republican republicans rally candidate
    candidates primary caucus legislation policy debate""".split()
)

_AD_PHRASES = (
    "paid for by",
    "call now",
    "sponsored by",
    "approve this message",
    "visit our website",
)

_POSITIVE_WORDS = frozenset(
    """great win winning wins strong hope success successes boom growth victory
    support supporters gaining popular optimistic thriving praised record
    momentum""".split()
)

_NEGATIVE_WORDS = frozenset(
    """bad crisis fear attack attacks decline failure weak corrupt scandal
    angry worst lose losing lost collapse threat struggling slammed""".split()
)

_PROMOTE_WORDS = frozenset(
    "stolen rigged fraud fraudulent proven confirmed exposed suspicious".split()
)
_DEBUNK_WORDS = frozenset(
    "debunked false baseless disproven unfounded meritless".split()
)

_STOPWORDS = frozenset(
    """the this that with from being been have were will when what your
    their there about into over under these those than then them they
    was are and but for not you all can had her his its our out who
    claims claim regarding mention mentions""".split()
)

_WORD_RE = re.compile(r"[a-z0-9']+")
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")


def _words(text: str) -> list[str]:
    return _WORD_RE.findall(text.casefold())


def _load_default_fixtures() -> dict[str, list[dict]]:
    pkg = resources.files(__package__) / "fixtures"
    manifest = json.loads((pkg / "manifest.json").read_text(encoding="utf-8"))
    return {
        digest: json.loads((pkg / filename).read_text(encoding="utf-8"))
        for digest, filename in manifest.items()
    }


def load_fixture_audio(name: str = "fixture-a.mp3") -> bytes:
    """Packaged opaque audio bytes whose mock transcription is pinned."""
    return (resources.files(__package__) / "fixtures" / name).read_bytes()


class MockTranscriber:
    """Derives a diarized segment list deterministically from content bytes.

    Known fixture hashes map to pinned segment documents; anything else gets
    synthetic political/ad/apolitical chatter seeded by the content hash.
    Bytes starting with ``CORRUPT`` simulate unreadable audio.
    """

    def __init__(
        self,
        seed: int = 0,
        entities: Sequence[str] = ("Harris", "Trump", "Biden"),
        fixtures: dict[str, list[dict]] | None = None,
    ):
        self.seed = seed
        self.entities = tuple(entities)
        self.fixtures = _load_default_fixtures() if fixtures is None else dict(fixtures)

    def transcribe(self, chunk: bytes) -> list[TranscriptSegment]:
        if not chunk:
            raise ValueError("cannot transcribe empty audio bytes")
        if chunk.startswith(CORRUPT_MARKER):
            raise ClientError("unreadable audio content")
        digest = hashlib.sha256(chunk).hexdigest()
        if digest in self.fixtures:
            return parse_segments(self.fixtures[digest])
        return self._synthesize(digest)

    def _synthesize(self, digest: str) -> list[TranscriptSegment]:
        rng = random.Random(f"{self.seed}:{digest}")
        segments = []
        t = rng.uniform(0.0, 3.0)
        for _ in range(rng.randint(6, 12)):
            text = self._sentence(rng)
            dur = rng.uniform(2.0, 9.0)
            segments.append(
                TranscriptSegment(
                    start=round(t, 3),
                    end=round(t + dur, 3),
                    text=text,
                    speaker=f"SPEAKER_{rng.randint(0, 3):02d}",
                )
            )
            t += dur + rng.uniform(0.1, 1.2)
        return segments

    def _sentence(self, rng: random.Random) -> str:
        entity = rng.choice(self.entities)
        roll = rng.random()
        if roll < 0.45:
            return rng.choice(
                [
                    f"The {entity} campaign held a rally in the state capital today.",
                    f"{entity} spoke about the economy ahead of the election.",
                    f"Polls show {entity} gaining support among voters this week.",
                    f"Critics say the {entity} campaign plan is a bad idea.",
                    f"Supporters call it a great win for the {entity} campaign.",
                    "Lawmakers traded barbs over the new election legislation.",
                    "Turnout projections dominated the morning political debate.",
                ]
            )
        if roll < 0.6:
            return rng.choice(
                [
                    f"This message was paid for by the committee to elect {entity}.",
                    f"Call now to hear more about the {entity} campaign.",
                    "This hour is sponsored by our friends at the hardware store.",
                ]
            )
        return rng.choice(
            [
                "Traffic on the interstate is heavy this morning.",
                "Tomorrow looks sunny with light winds across the region.",
                "High school football scores are coming up after the break.",
                "A new bakery opened downtown over the weekend.",
                "The county fair wraps up on Sunday evening.",
            ]
        )


class MockSegmentClassifier:
    """Keyword-lexicon classifier for the political and ad passes.

    Requests are batched to ``context_budget`` segments apiece; the batch
    count is observable for tests via ``request_count``.
    """

    def __init__(self, context_budget: int = 200):
        self.context_budget = context_budget
        self.request_count = 0

    def classify_segments(self, segments: Sequence, task: str) -> list[bool]:
        if task not in ("political", "ad"):
            raise ValueError(f"unknown classification task {task!r}")
        texts = [getattr(s, "text", s) for s in segments]
        labels: list[bool] = []
        for batch in batched(texts, self.context_budget):
            self.request_count += 1
            labels.extend(self._classify_one(text, task) for text in batch)
        return labels

    @staticmethod
    def _classify_one(text: str, task: str) -> bool:
        lowered = text.casefold()
        if task == "ad":
            return any(phrase in lowered for phrase in _AD_PHRASES)
        return any(w in _POLITICAL_KEYWORDS for w in _words(lowered))


_RENDERED_LINE_RE = re.compile(r"^\[[^\]]+\]\s+(SPEAKER_\d+):\s*(.*)$")


class MockSummarizer:
    """Summary = first sentence of each speaker turn, in order."""

    def __init__(self, max_input_chars: int = 24000):
        self.max_input_chars = max_input_chars
        self.last_prompt: str | None = None
        self.split_count = 0

    def summarize(self, transcript: str) -> str:
        if not transcript.strip():
            raise ValueError("cannot summarize an empty transcript")
        if len(transcript) > self.max_input_chars:
            self.split_count += 1
            logger.warning(
                "transcript of %d chars exceeds budget %d; summarizing halves",
                len(transcript), self.max_input_chars,
            )
            head, tail = _split_near_middle(transcript)
            return self.summarize(head) + "\n\n" + self.summarize(tail)
        self.last_prompt = build_summary_prompt(transcript)

        turns: list[str] = []
        current_speaker = None
        current_text: list[str] = []
        for raw in transcript.splitlines():
            m = _RENDERED_LINE_RE.match(raw.strip())
            if not m:
                # continuation markers and blank lines end the current turn
                if current_text:
                    turns.append(" ".join(current_text))
                current_speaker, current_text = None, []
                continue
            speaker, text = m.groups()
            if speaker != current_speaker:
                if current_text:
                    turns.append(" ".join(current_text))
                current_speaker, current_text = speaker, []
            current_text.append(text)
        if current_text:
            turns.append(" ".join(current_text))
        if not turns:  # plain text input: treat the whole thing as one turn
            turns = [transcript.strip()]
        return " ".join(_first_sentence(turn) for turn in turns if turn.strip())


def _first_sentence(text: str) -> str:
    parts = _SENTENCE_SPLIT_RE.split(text.strip(), maxsplit=1)
    return parts[0]


def _split_near_middle(text: str) -> tuple[str, str]:
    mid = len(text) // 2
    cut = text.rfind("\n", 0, mid)
    if cut <= 0:
        cut = mid
    return text[:cut], text[cut:]


class MockClaimExtractor:
    """Counts sentences matching the narrative's content words.

    A sentence is a mention when it shares at least two content words
    (one, for single-word narratives) with the narrative description.
    Stance comes from promote/debunk lexicon hits over those sentences.
    """

    def __init__(self):
        self.last_prompt: str | None = None

    def extract_claim_stance(self, summary: str, narrative: str) -> StanceResult:
        if not narrative.strip():
            raise ValueError("narrative description must be non-empty")
        self.last_prompt = build_claim_prompt(summary, narrative)

        keywords = {
            w for w in _words(narrative) if len(w) >= 4 and w not in _STOPWORDS
        }
        if not keywords:
            return StanceResult(0, Stance.NEUTRAL)
        need = min(2, len(keywords))

        mentions = [
            s
            for s in _SENTENCE_SPLIT_RE.split(summary)
            if len(keywords.intersection(_words(s))) >= need
        ]
        if not mentions:
            return StanceResult(0, Stance.NEUTRAL)

        promote = debunk = 0
        for sentence in mentions:
            ws = set(_words(sentence))
            promote += len(ws & _PROMOTE_WORDS)
            debunk += len(ws & _DEBUNK_WORDS)
        if promote > debunk:
            stance = Stance.PROMOTE
        elif debunk > promote:
            stance = Stance.DEBUNK
        else:
            stance = Stance.NEUTRAL
        return StanceResult(len(mentions), stance)


class MockSentimentClassifier:
    """Signed-lexicon polarity: the majority of pos/neg hits wins."""

    def classify(self, text: str) -> Sentiment:
        if not text.strip():
            raise ValueError("cannot score empty text")
        ws = _words(text)
        pos = sum(1 for w in ws if w in _POSITIVE_WORDS)
        neg = sum(1 for w in ws if w in _NEGATIVE_WORDS)
        if pos > neg:
            return Sentiment.POS
        if neg > pos:
            return Sentiment.NEG
        return Sentiment.NEU


class MockEmbedder:
    """Unit-norm hash projection into the embedding space."""

    def __init__(self, dim: int = 1024, seed: int = 7):
        self.dim = dim
        self.seed = seed

    def embed(self, text: str) -> np.ndarray:
        if not text.strip():
            raise ValueError("cannot embed empty text")
        digest = hashlib.sha256(f"{self.seed}\x1f{text}".encode("utf-8")).digest()
        rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
        vec = rng.standard_normal(self.dim)
        return vec / np.linalg.norm(vec)


class MockGenerator:
    """Answers by excerpting the top retrieved source in the prompt."""

    def __init__(self, excerpt_chars: int = 300):
        self.excerpt_chars = excerpt_chars

    def generate(self, prompt: str) -> str:
        lines = prompt.splitlines()
        collected: list[str] = []
        in_top_source = False
        for line in lines:
            if line.startswith("### Source 1 "):
                in_top_source = True
                continue
            if in_top_source and (line.startswith("### Source") or line.startswith("Question:")):
                break
            if in_top_source:
                collected.append(line)
        text = "\n".join(collected).strip()
        if not text:
            return "no relevant context found"
        return text[: self.excerpt_chars]
