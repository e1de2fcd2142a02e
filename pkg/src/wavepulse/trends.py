"""Candidate mention extraction, sentiment scoring, and trend aggregation.

Scores fold per-day positive/neutral/negative tallies into a single value in
[0, 1]: a day of all-positive mentions scores 1, all-negative scores 0, and
the score is independent of how many mentions there were.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Iterable, Mapping, Protocol, Sequence

from .clients.base import Sentiment, SentimentCounts, StanceResult
from .errors import ConfigError

_WORD_RE = re.compile(r"[\w']+")

NATIONAL_SCOPE = "national"


class SentimentClient(Protocol):
    def classify(self, text: str) -> Sentiment: ...


@dataclass(frozen=True)
class AliasTable:
    """Entity -> name variants. Variant sets must be pairwise disjoint."""

    entities: Mapping[str, frozenset[str]]

    def __post_init__(self) -> None:
        normalized = {
            entity: frozenset(v.casefold() for v in variants)
            for entity, variants in self.entities.items()
        }
        seen: dict[str, str] = {}
        for entity, variants in normalized.items():
            for variant in variants:
                if variant in seen:
                    raise ConfigError(
                        f"alias {variant!r} is claimed by both "
                        f"{seen[variant]!r} and {entity!r}"
                    )
                seen[variant] = entity
        object.__setattr__(self, "entities", normalized)

    @classmethod
    def from_dict(cls, data: Mapping[str, Iterable[str]]) -> "AliasTable":
        return cls({entity: frozenset(variants) for entity, variants in data.items()})


DEFAULT_ALIASES = AliasTable.from_dict(
    {
        "Harris": ["Harris", "Kamala"],
        "Trump": ["Trump", "Donald Trump"],
        "Biden": ["Biden", "Joe Biden"],
    }
)


@dataclass(frozen=True)
class TaggedSegment:
    """One transcript segment with its broadcast provenance."""

    text: str
    station: str
    state: str
    day: date


@dataclass(frozen=True)
class MentionRecord:
    """A single-candidate mention with its sentiment class."""

    entity: str
    station: str
    state: str
    day: date
    sentiment: Sentiment


@dataclass(frozen=True)
class TrendPoint:
    entity: str
    day: date
    scope: str  # NATIONAL_SCOPE or 2-letter state code
    counts: SentimentCounts

    @property
    def score(self) -> float:
        return normalized_score(self.counts)


def _phrase_positions(tokens: Sequence[str], phrase: str) -> bool:
    """Whole-word match of a (possibly multi-word) phrase; '*' ends a prefix."""
    words = phrase.casefold().split()
    if not words:
        return False
    n = len(words)
    for i in range(len(tokens) - n + 1):
        if all(_word_matches(tokens[i + j], words[j]) for j in range(n)):
            return True
    return False


def _word_matches(token: str, pattern: str) -> bool:
    if pattern.endswith("*"):
        return token.startswith(pattern[:-1])
    return token == pattern


def matched_entities(text: str, aliases: AliasTable) -> set[str]:
    tokens = _WORD_RE.findall(text.casefold())
    return {
        entity
        for entity, variants in aliases.entities.items()
        if any(_phrase_positions(tokens, variant) for variant in variants)
    }


def extract_mentions(
    segments: Iterable[TaggedSegment],
    aliases: AliasTable,
    sentiment: SentimentClient,
) -> list[MentionRecord]:
    """Single-candidate mentions with sentiment attached.

    Matching is case-insensitive and whole-word; segments naming variants of
    two or more entities are excluded so the sentiment is unambiguous.
    """
    records: list[MentionRecord] = []
    for seg in segments:
        entities = matched_entities(seg.text, aliases)
        if len(entities) != 1:
            continue
        (entity,) = entities
        records.append(
            MentionRecord(
                entity=entity,
                station=seg.station,
                state=seg.state,
                day=seg.day,
                sentiment=sentiment.classify(seg.text),
            )
        )
    return records


def normalized_score(counts: SentimentCounts) -> float:
    """(2*pos + neu) / (2*total), in [0, 1]. Undefined for zero totals."""
    if counts.total == 0:
        raise ValueError("score is undefined when there are no mentions")
    return (2 * counts.pos + counts.neu) / (2 * counts.total)


def aggregate(
    mentions: Iterable[MentionRecord],
    scope: str = NATIONAL_SCOPE,
) -> list[TrendPoint]:
    """Sum counts per (entity, day[, state]); days without mentions are absent.

    ``scope`` is either ``national`` (one series per entity) or ``state``
    (one series per entity and state).
    """
    if scope not in (NATIONAL_SCOPE, "state"):
        raise ConfigError(f"scope must be 'national' or 'state', got {scope!r}")
    cells: dict[tuple[str, date, str], SentimentCounts] = {}
    for m in mentions:
        key_scope = NATIONAL_SCOPE if scope == NATIONAL_SCOPE else m.state
        key = (m.entity, m.day, key_scope)
        cells[key] = cells.get(key, SentimentCounts()).add(m.sentiment)
    return [
        TrendPoint(entity=entity, day=day, scope=sc, counts=counts)
        for (entity, day, sc), counts in sorted(cells.items())
    ]


def rolling_average(
    series: Sequence[tuple[date, float]],
    window_days: int = 7,
) -> list[tuple[date, float]]:
    """Trailing calendar-day moving average.

    For each day in the series the value is the mean of the values present
    within the preceding ``window_days`` calendar days (inclusive); absent
    days simply contribute nothing, and early points average over whatever
    history exists. The input must be sorted by day.
    """
    if window_days < 1:
        raise ConfigError(f"window must be >= 1 day, got {window_days}")
    days = [d for d, _ in series]
    if days != sorted(days):
        raise ValueError("series must be sorted by day")

    out: list[tuple[date, float]] = []
    lo = 0
    for i, (day, _) in enumerate(series):
        window_start = day - timedelta(days=window_days - 1)
        while days[lo] < window_start:
            lo += 1
        window_vals = [v for _, v in series[lo : i + 1]]
        out.append((day, sum(window_vals) / len(window_vals)))
    return out


def score_series(points: Sequence[TrendPoint]) -> list[tuple[date, float]]:
    """(day, score) pairs of one entity/scope slice, sorted by day."""
    return [(p.day, p.score) for p in sorted(points, key=lambda p: p.day)]


def state_lead(
    dem_series: Sequence[tuple[date, float]],
    rep_series: Sequence[tuple[date, float]],
    window_days: int = 14,
) -> str:
    """Per-state lead label from smoothed score means.

    The gain is 100 times the difference of period-mean smoothed scores
    (first series minus second). Gains under one point are a tie; otherwise
    the label carries the winner's letter and the rounded magnitude.
    """
    if not dem_series or not rep_series:
        return "insufficient data"
    dem = rolling_average(list(dem_series), window_days)
    rep = rolling_average(list(rep_series), window_days)
    dem_mean = sum(v for _, v in dem) / len(dem)
    rep_mean = sum(v for _, v in rep) / len(rep)
    gain = 100.0 * (dem_mean - rep_mean)
    if abs(gain) < 1.0:
        return "Tie"
    magnitude = math.floor(abs(gain) + 0.5)
    return f"D+{magnitude}" if gain > 0 else f"R+{magnitude}"


def narrative_trend(
    results: Iterable[tuple[str, StanceResult]],
) -> dict[str, dict[str, int]]:
    """Per-state mention totals partitioned by stance.

    Input pairs are (state, stance result); zero-mention results contribute
    nothing. The output maps state -> stance name -> summed mention count.
    """
    out: dict[str, dict[str, int]] = {}
    for state, result in results:
        if result.mention_count == 0:
            continue
        bucket = out.setdefault(state, {})
        name = result.stance.value
        bucket[name] = bucket.get(name, 0) + result.mention_count
    return out


def keyword_filter(text: str, rules: Sequence[Sequence[str]]) -> bool:
    """Evaluate a disjunction of conjunctions of wildcard phrase terms.

    Each clause is a list of terms that must all appear in the text; a term
    is one or more words matched whole-word and case-insensitively, with a
    trailing ``*`` matching any suffix of the final word.
    """
    if not rules or any(not clause for clause in rules):
        raise ConfigError("keyword rules must contain at least one non-empty clause")
    tokens = _WORD_RE.findall(text.casefold())
    return any(
        all(_phrase_positions(tokens, term) for term in clause) for clause in rules
    )


def parse_rule_clauses(lines: Iterable[str]) -> list[list[str]]:
    """Parse rules of the form ``term AND term AND ...``, one clause per line."""
    clauses = []
    for line in lines:
        terms = [t.strip() for t in re.split(r"\s+AND\s+", line) if t.strip()]
        if terms:
            clauses.append(terms)
    if not clauses:
        raise ConfigError("no rule clauses parsed")
    return clauses
