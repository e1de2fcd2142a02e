"""Analytics products over the processed tree: trends, leads, network, narrative.

Writers read pipeline artifacts and emit CSV/JSON snapshots under
``analytics/``; the API serves those snapshots verbatim (plus pure-function
derivations such as smoothing windows), so analytics never recompute behind a
request's back.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from ..scheduling import parse_filename
from ..syndication import build_syndication_network
from ..transcripts import ContentLabel, parse_segments
from ..trends import (
    MentionRecord,
    TaggedSegment,
    TrendPoint,
    aggregate,
    extract_mentions,
    score_series,
    state_lead,
)
from .config import EngineConfig
from .pipeline import EngineClients, build_clients, write_atomic

logger = logging.getLogger(__name__)

TRENDS_CSV = "trends.csv"
LEADS_CSV = "leads.csv"
EDGES_CSV = "edges.csv"
SUBGROUPS_JSON = "subgroups.json"
COMMUNITIES_CSV = "communities.csv"
NARRATIVE_CSV = "narrative.csv"
NARRATIVE_DETAIL = "narrative_detail.ndjson"


@dataclass(frozen=True)
class ChunkProvenance:
    chunk: str
    station: str
    state: str
    day: date
    time: str


def chunk_provenance(chunk: str) -> ChunkProvenance:
    meta = parse_filename(f"{chunk}.mp3")
    return ChunkProvenance(
        chunk=chunk,
        station=meta.call_sign,
        state=meta.state,
        day=meta.start_instant.date(),
        time=meta.start_instant.strftime("%H:%M"),
    )


def collect_news_segments(config: EngineConfig) -> list[TaggedSegment]:
    """News/discussion segments across all processed chunks, with provenance."""
    layout = config.layout
    tagged: list[TaggedSegment] = []
    for raw_path in sorted(layout.raw_transcripts.glob("*.json")):
        if raw_path.name.endswith(".labels.json"):
            continue
        chunk = raw_path.stem
        labels_path = layout.raw_transcripts / f"{chunk}.labels.json"
        if not labels_path.exists():
            continue
        prov = chunk_provenance(chunk)
        segments = parse_segments(raw_path.read_text(encoding="utf-8"))
        labels = [
            ContentLabel(v) for v in json.loads(labels_path.read_text(encoding="utf-8"))
        ]
        for segment, label in zip(segments, labels):
            if label is ContentLabel.POLITICAL_CONTENT:
                tagged.append(
                    TaggedSegment(
                        text=segment.text,
                        station=prov.station,
                        state=prov.state,
                        day=prov.day,
                    )
                )
    return tagged


def compute_mentions(
    config: EngineConfig, clients: EngineClients | None = None
) -> list[MentionRecord]:
    clients = clients or build_clients(config)
    return extract_mentions(
        collect_news_segments(config), config.aliases, clients.sentiment
    )


def write_trend_analytics(
    config: EngineConfig,
    clients: EngineClients | None = None,
    date_from: date | None = None,
    date_to: date | None = None,
) -> dict[str, Path]:
    """Emit trends.csv (daily counts + scores) and leads.csv (state labels)."""
    layout = config.layout
    layout.analytics.mkdir(parents=True, exist_ok=True)
    mentions = compute_mentions(config, clients)
    if date_from:
        mentions = [m for m in mentions if m.day >= date_from]
    if date_to:
        mentions = [m for m in mentions if m.day <= date_to]

    points = aggregate(mentions, scope="national") + aggregate(mentions, scope="state")

    trends_path = layout.analytics / TRENDS_CSV
    rows = [
        {
            "entity": p.entity,
            "scope": p.scope,
            "day": p.day.isoformat(),
            "pos": p.counts.pos,
            "neu": p.counts.neu,
            "neg": p.counts.neg,
            "score": repr(p.score),
        }
        for p in points
    ]
    _write_csv(trends_path, ["entity", "scope", "day", "pos", "neu", "neg", "score"], rows)

    leads_path = layout.analytics / LEADS_CSV
    _write_csv(leads_path, ["state", "label"], _lead_rows(config, points))
    return {"trends": trends_path, "leads": leads_path}


def _lead_rows(config: EngineConfig, points: list[TrendPoint]) -> list[dict]:
    dem = config.party_entities.get("D")
    rep = config.party_entities.get("R")
    states = sorted({p.scope for p in points if p.scope != "national"})
    rows = []
    for state in states:
        dem_series = score_series(
            [p for p in points if p.scope == state and p.entity == dem]
        )
        rep_series = score_series(
            [p for p in points if p.scope == state and p.entity == rep]
        )
        label = state_lead(dem_series, rep_series, config.lead_window_days)
        rows.append({"state": state, "label": label})
    return rows


def write_network_analytics(config: EngineConfig) -> dict[str, Path]:
    """Emit edges.csv, subgroups.json, communities.csv from raw transcripts."""
    layout = config.layout
    layout.analytics.mkdir(parents=True, exist_ok=True)
    texts: dict[str, str] = {}
    for raw_path in sorted(layout.raw_transcripts.glob("*.json")):
        if raw_path.name.endswith(".labels.json"):
            continue
        segments = parse_segments(raw_path.read_text(encoding="utf-8"))
        texts[raw_path.stem] = " ".join(s.text for s in segments)

    result = build_syndication_network(
        texts,
        theta=config.theta,
        num_hashes=config.num_hashes,
        bands=config.bands,
        rows=config.rows,
        shingle_width=config.shingle_width,
        seed=config.seed,
    )

    edges_path = layout.analytics / EDGES_CSV
    _write_csv(
        edges_path,
        ["station_a", "station_b"],
        [
            {"station_a": e.station_a, "station_b": e.station_b}
            for e in sorted(result.edges)
        ],
    )

    subgroups_path = layout.analytics / SUBGROUPS_JSON
    write_atomic(
        subgroups_path,
        json.dumps([list(g.members) for g in result.subgroups], indent=2),
    )

    communities_path = layout.analytics / COMMUNITIES_CSV
    rows = []
    for community_id, members in enumerate(result.communities):
        for station in sorted(members):
            rows.append({"station": station, "community_id": community_id})
    _write_csv(communities_path, ["station", "community_id"], rows)
    return {
        "edges": edges_path,
        "subgroups": subgroups_path,
        "communities": communities_path,
    }


def write_narrative_analytics(
    config: EngineConfig, clients: EngineClients | None = None
) -> dict[str, Path]:
    """Per-state stance tallies for each configured narrative.

    ``narrative.csv`` carries the first (default) narrative in the pinned
    (state, stance, mentions) shape; the full per-chunk detail for every
    narrative lands in ``narrative_detail.ndjson`` for filtered queries.
    """
    clients = clients or build_clients(config)
    layout = config.layout
    layout.analytics.mkdir(parents=True, exist_ok=True)

    detail_lines: list[str] = []
    rollups: dict[str, dict[str, dict[str, int]]] = {}
    for name, description in config.narratives.items():
        rollup: dict[str, dict[str, int]] = {}
        for summary_path in sorted(layout.summaries.glob("*.txt")):
            prov = chunk_provenance(summary_path.stem)
            summary = summary_path.read_text(encoding="utf-8")
            if not summary.strip():
                continue
            result = clients.claims.extract_claim_stance(summary, description)
            if result.mention_count == 0:
                continue
            detail_lines.append(
                json.dumps(
                    {
                        "name": name,
                        "chunk": prov.chunk,
                        "state": prov.state,
                        "day": prov.day.isoformat(),
                        "stance": result.stance.value,
                        "mentions": result.mention_count,
                    },
                    sort_keys=True,
                )
            )
            bucket = rollup.setdefault(prov.state, {})
            stance = result.stance.value
            bucket[stance] = bucket.get(stance, 0) + result.mention_count
        rollups[name] = rollup

    detail_path = layout.analytics / NARRATIVE_DETAIL
    write_atomic(detail_path, "\n".join(detail_lines) + ("\n" if detail_lines else ""))

    narrative_path = layout.analytics / NARRATIVE_CSV
    first = next(iter(config.narratives), None)
    rows = []
    if first is not None:
        for state in sorted(rollups.get(first, {})):
            for stance in sorted(rollups[first][state]):
                rows.append(
                    {
                        "state": state,
                        "stance": stance,
                        "mentions": rollups[first][state][stance],
                    }
                )
    _write_csv(narrative_path, ["state", "stance", "mentions"], rows)
    return {"narrative": narrative_path, "detail": detail_path}


def load_trends(analytics_dir: Path) -> list[dict]:
    """Rows of trends.csv with native types; [] when absent."""
    path = analytics_dir / TRENDS_CSV
    if not path.exists():
        return []
    out = []
    with path.open(encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(
                {
                    "entity": row["entity"],
                    "scope": row["scope"],
                    "day": date.fromisoformat(row["day"]),
                    "pos": int(row["pos"]),
                    "neu": int(row["neu"]),
                    "neg": int(row["neg"]),
                    "score": float(row["score"]),
                }
            )
    return out


def load_leads(analytics_dir: Path) -> list[dict]:
    path = analytics_dir / LEADS_CSV
    if not path.exists():
        return []
    with path.open(encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def load_edges(analytics_dir: Path) -> list[tuple[str, str]]:
    path = analytics_dir / EDGES_CSV
    if not path.exists():
        return []
    with path.open(encoding="utf-8", newline="") as fh:
        return [(row["station_a"], row["station_b"]) for row in csv.DictReader(fh)]


def load_communities(analytics_dir: Path) -> dict[str, int]:
    path = analytics_dir / COMMUNITIES_CSV
    if not path.exists():
        return {}
    with path.open(encoding="utf-8", newline="") as fh:
        return {row["station"]: int(row["community_id"]) for row in csv.DictReader(fh)}


def load_narrative_detail(analytics_dir: Path) -> list[dict]:
    path = analytics_dir / NARRATIVE_DETAIL
    if not path.exists():
        return []
    out = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            out.append(json.loads(line))
    return out


def _write_csv(path: Path, fieldnames: list[str], rows: list[dict]) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    tmp.replace(path)
