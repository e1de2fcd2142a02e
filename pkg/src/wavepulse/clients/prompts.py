"""Prompt templates shared by the live clients and their offline mocks."""

from __future__ import annotations

import json
import re

from .base import Stance, StanceResult

SUMMARY_PROMPT_TEMPLATE = """You are a concise and direct news summarizer. Given below is a JSON with spoken text and its speaker ID recorded from a radio livestream. Create a summary that:
- Presents information directly, without phrases like "I heard" or "The news reported."
- Uses a factual, journalistic tone as if directly reporting the news.
- Retains key facts and information while making the content specific and granular.
- Removes personal identifiable information (PII), such as phone numbers and sensitive personal data, but keeps public figures' names (e.g., politicians, celebrities) and other key proper nouns relevant to the context.
- Is clear and avoids vague language.
- Clarifies ambiguous words or phrases.
- Utilizes changes in speaker ID to understand the flow of conversation or different segments of news.
- Corresponds strictly to information derived from the provided text.
- Organizes information into coherent paragraphs, each focusing on a distinct topic or news item.
- Maintains a neutral, objective tone throughout the summary.

Do not include any meta-commentary about the summarization process or the source of the information.

Spoken Text Transcription: {transcript}"""

CLAIM_PROMPT_TEMPLATE = """Analyze the following document summary regarding mentions of {narrative}.

Document summary: {content}

Answer the following questions:
- How many times was {narrative} mentioned?
- Did the document promoting, neutral report, or debunk these claims?

Provide your answer in the following format:

    "mention_count": <number of mentions>,

    "stance": "<promote/neutral/debunk>"
"""

# Context block framing for retrieval-augmented answering. The offline
# generator mock relies on this exact shape to excerpt the top source.
RAG_SOURCE_HEADER = "### Source {rank} | station={call_sign} state={state} date={date} time={time}"
RAG_PROMPT_TEMPLATE = """Answer the question using only the numbered source summaries below. Cite the stations you rely on.

{sources}

Question: {question}
Answer:"""


def build_summary_prompt(transcript: str) -> str:
    return SUMMARY_PROMPT_TEMPLATE.format(transcript=transcript)


def build_claim_prompt(summary: str, narrative: str) -> str:
    return CLAIM_PROMPT_TEMPLATE.format(narrative=narrative, content=summary)


_MENTIONS_RE = re.compile(r"mention_count\W*[:=]?\W*(\d+)", re.IGNORECASE)
_STANCE_RE = re.compile(
    r"stance\W*[:=]?\W*[\"']?(promote|promoting|neutral|debunk|debunking)", re.IGNORECASE
)

_STANCE_ALIASES = {
    "promote": Stance.PROMOTE,
    "promoting": Stance.PROMOTE,
    "neutral": Stance.NEUTRAL,
    "debunk": Stance.DEBUNK,
    "debunking": Stance.DEBUNK,
}


def parse_stance_reply(reply: str) -> StanceResult:
    """Parse a model reply into a stance result, tolerating format drift.

    Accepts JSON objects as well as loose ``mention_count: N, stance: X``
    text. Zero mentions are neutral by definition. A positive count whose
    stance cannot be recognized comes back as ``unknown``; a reply with no
    recognizable count at all counts as zero mentions (logged by callers).
    """
    count: int | None = None
    stance: Stance | None = None

    try:
        data = json.loads(reply)
    except (json.JSONDecodeError, TypeError):
        data = None
    if isinstance(data, dict):
        raw_count = data.get("mention_count")
        if isinstance(raw_count, (int, float)) and raw_count >= 0:
            count = int(raw_count)
        raw_stance = str(data.get("stance", "")).strip().lower()
        stance = _STANCE_ALIASES.get(raw_stance)

    if count is None:
        m = _MENTIONS_RE.search(reply or "")
        if m:
            count = int(m.group(1))
    if stance is None:
        m = _STANCE_RE.search(reply or "")
        if m:
            stance = _STANCE_ALIASES[m.group(1).lower()]

    if count is None or count == 0:
        return StanceResult(mention_count=0, stance=Stance.NEUTRAL)
    return StanceResult(mention_count=count, stance=stance or Stance.UNKNOWN)
