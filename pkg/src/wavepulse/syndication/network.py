"""Station syndication graph: adjacency, subgroups, refinement, communities.

Transcript ids follow the chunk naming convention (``SS_CALL_yyyy_mm_dd_HH_MM``
with or without the ``.mp3`` suffix), which lets the refinement steps recover
each member's station and broadcast date.
"""

from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Mapping, Sequence

import networkx as nx

from ..errors import ConfigError, WavePulseError
from .lsh import DEFAULT_BANDS, DEFAULT_ROWS, lsh_candidates, ordered_pair
from .minhash import MinHashSignature, estimate_jaccard

logger = logging.getLogger(__name__)

DEFAULT_THETA = 0.8

_MEMBER_ID_RE = re.compile(
    r"^([A-Z]{2})_([A-Z]{2,4})_(\d{4})_(\d{2})_(\d{2})_(\d{2})_(\d{2})(?:\.mp3)?$"
)


@dataclass(frozen=True)
class NarrativeSubgroup:
    """Connected component of transcripts under the similarity threshold."""

    members: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(sorted(self.members)))


@dataclass(frozen=True, order=True)
class SyndicationEdge:
    """Undirected station pair, canonically ordered."""

    station_a: str
    station_b: str

    def __post_init__(self) -> None:
        if self.station_a == self.station_b:
            raise WavePulseError("self edges are excluded from the network")
        if self.station_a > self.station_b:
            a, b = self.station_b, self.station_a
            object.__setattr__(self, "station_a", a)
            object.__setattr__(self, "station_b", b)


def parse_member_id(member_id: str) -> tuple[str, date]:
    """Extract (station, broadcast date) from a transcript/chunk id."""
    m = _MEMBER_ID_RE.match(member_id)
    if m is None:
        raise ValueError(f"member id {member_id!r} does not follow the naming convention")
    _, call, y, mo, d, _, _ = m.groups()
    return call, date(int(y), int(mo), int(d))


def build_adjacency(
    signatures: Sequence[MinHashSignature],
    theta: float = DEFAULT_THETA,
    bands: int = DEFAULT_BANDS,
    rows: int = DEFAULT_ROWS,
) -> dict[str, list[str]]:
    """Symmetric adjacency over LSH candidates confirmed at the threshold.

    Only candidate pairs from the banded index are tested; a pair joins the
    adjacency when its signature-estimated Jaccard reaches ``theta``. Every
    input id appears as a key, matched or not.
    """
    by_id: dict[str, MinHashSignature] = {}
    for sig in signatures:
        if sig.transcript_id in by_id:
            raise ConfigError(f"duplicate transcript id {sig.transcript_id!r}")
        by_id[sig.transcript_id] = sig

    adjacency: dict[str, set[str]] = {tid: set() for tid in by_id}
    for left, right in lsh_candidates(signatures, bands=bands, rows=rows):
        if estimate_jaccard(by_id[left], by_id[right]) >= theta:
            adjacency[left].add(right)
            adjacency[right].add(left)
    return {tid: sorted(neighbors) for tid, neighbors in adjacency.items()}


def find_subgroups(adjacency: Mapping[str, Iterable[str]]) -> list[NarrativeSubgroup]:
    """Connected components by breadth-first search, smallest id first.

    The adjacency must be symmetric; isolated transcripts come back as
    singleton subgroups, so the result partitions the input.
    """
    neighbors = {tid: set(adj) for tid, adj in adjacency.items()}
    for tid, adj in neighbors.items():
        for other in adj:
            if tid not in neighbors.get(other, set()):
                raise WavePulseError(
                    f"adjacency is not symmetric: {tid} -> {other} has no reverse"
                )

    visited: set[str] = set()
    subgroups: list[NarrativeSubgroup] = []
    for start in sorted(neighbors):
        if start in visited:
            continue
        component: list[str] = []
        queue = deque([start])
        visited.add(start)
        while queue:
            node = queue.popleft()
            component.append(node)
            for nxt in sorted(neighbors[node]):
                if nxt not in visited:
                    visited.add(nxt)
                    queue.append(nxt)
        subgroups.append(NarrativeSubgroup(members=tuple(component)))
    subgroups.sort(key=lambda g: g.members[0])
    return subgroups


@dataclass(frozen=True)
class RefinementStats:
    """Per-step survivor counts, for observability."""

    input_subgroups: int
    after_consecutive_merge: int
    after_single_broadcaster_drop: int
    after_single_station_drop: int
    edges: int


def refine_network(
    subgroups: Sequence[NarrativeSubgroup],
    time_threshold_days: int | None = None,
) -> tuple[set[SyndicationEdge], RefinementStats]:
    """Reduce narrative subgroups to a deduplicated station edge set.

    Steps, in order: (1) merge a station's members on consecutive dates into
    one broadcast episode; (2) drop subgroups left with a single episode
    (same content on back-to-back days); (3) keep only station names;
    (4) drop single-station subgroups (self-repeats days apart); (5) connect
    every station pair within each surviving subgroup; (6) canonicalize and
    deduplicate globally; (7) never emit self edges.

    ``time_threshold_days`` is accepted for configuration compatibility but
    unused by the refinement itself.
    """
    if time_threshold_days is not None:
        logger.debug("time threshold %sd accepted but unused", time_threshold_days)

    merged_counts: list[list[tuple[str, tuple[date, ...]]]] = []
    for group in subgroups:
        episodes = _merge_consecutive_dates(group.members)
        merged_counts.append(episodes)

    multi_episode = [eps for eps in merged_counts if len(eps) >= 2]

    station_sets = [sorted({station for station, _ in eps}) for eps in multi_episode]
    multi_station = [stations for stations in station_sets if len(stations) >= 2]

    edges: set[SyndicationEdge] = set()
    for stations in multi_station:
        for i, a in enumerate(stations):
            for b in stations[i + 1 :]:
                if a != b:
                    edges.add(SyndicationEdge(*ordered_pair(a, b)))

    stats = RefinementStats(
        input_subgroups=len(subgroups),
        after_consecutive_merge=len(merged_counts),
        after_single_broadcaster_drop=len(multi_episode),
        after_single_station_drop=len(multi_station),
        edges=len(edges),
    )
    return edges, stats


def _merge_consecutive_dates(
    members: Iterable[str],
) -> list[tuple[str, tuple[date, ...]]]:
    """Collapse a station's consecutive-date members into broadcast episodes."""
    per_station: dict[str, list[date]] = {}
    for member in members:
        try:
            station, day = parse_member_id(member)
        except ValueError:
            logger.warning("dropping unparseable subgroup member %r", member)
            continue
        per_station.setdefault(station, []).append(day)

    episodes: list[tuple[str, tuple[date, ...]]] = []
    for station, days in per_station.items():
        days = sorted(set(days))
        run: list[date] = []
        for day in days:
            if run and (day - run[-1]).days == 1:
                run.append(day)
                continue
            if run:
                episodes.append((station, tuple(run)))
            run = [day]
        if run:
            episodes.append((station, tuple(run)))
    return episodes


def degree_stats(
    edges: Iterable[SyndicationEdge],
    roster: Iterable[str] | None = None,
) -> dict[str, int]:
    """Simple-graph degrees; roster stations missing from edges get zero."""
    degrees: dict[str, int] = {station: 0 for station in (roster or [])}
    for edge in set(edges):
        degrees[edge.station_a] = degrees.get(edge.station_a, 0) + 1
        degrees[edge.station_b] = degrees.get(edge.station_b, 0) + 1
    return degrees


def detect_communities(
    edges: Iterable[SyndicationEdge],
    roster: Iterable[str] | None = None,
    seed: int = 13,
    threshold: float = 1e-7,
) -> list[set[str]]:
    """Louvain communities of the syndication graph.

    Greedy modularity optimization with node-moving passes and graph
    aggregation, iterated until the modularity gain drops below the
    threshold. The partition covers every node (roster included).
    """
    graph = nx.Graph()
    for station in roster or []:
        graph.add_node(station)
    for edge in edges:
        graph.add_node(edge.station_a)
        graph.add_node(edge.station_b)
        graph.add_edge(edge.station_a, edge.station_b)
    if graph.number_of_nodes() == 0:
        return []
    communities = nx.community.louvain_communities(graph, seed=seed, threshold=threshold)
    return sorted((set(c) for c in communities), key=lambda c: sorted(c)[0])


def modularity(edges: Iterable[SyndicationEdge], partition: Sequence[set[str]]) -> float:
    """Newman modularity of a partition (validation helper)."""
    graph = nx.Graph()
    for edge in edges:
        graph.add_edge(edge.station_a, edge.station_b)
    for part in partition:
        for station in part:
            graph.add_node(station)
    return nx.community.modularity(graph, partition)


@dataclass(frozen=True)
class NetworkResult:
    edges: frozenset[SyndicationEdge]
    subgroups: tuple[NarrativeSubgroup, ...]
    communities: tuple[frozenset[str], ...]
    stats: RefinementStats
    skipped: tuple[str, ...]  # transcripts too short to shingle


def build_syndication_network(
    texts: Mapping[str, str],
    theta: float = DEFAULT_THETA,
    num_hashes: int = 256,
    bands: int = DEFAULT_BANDS,
    rows: int = DEFAULT_ROWS,
    shingle_width: int = 3,
    seed: int = 1,
) -> NetworkResult:
    """Texts keyed by chunk id -> deduplicated syndication edge set.

    Runs the whole chain: signatures, banded candidate generation, threshold
    confirmation, subgroup discovery, and refinement, deterministically for
    a fixed seed.
    """
    from .minhash import TextTooShort, minhash_signature

    signatures = []
    skipped = []
    for tid in sorted(texts):
        try:
            signatures.append(
                minhash_signature(
                    texts[tid],
                    transcript_id=tid,
                    num_hashes=num_hashes,
                    shingle_width=shingle_width,
                    seed=seed,
                )
            )
        except TextTooShort:
            logger.warning("transcript %s too short to shingle; excluded", tid)
            skipped.append(tid)

    adjacency = build_adjacency(signatures, theta=theta, bands=bands, rows=rows)
    subgroups = find_subgroups(adjacency)
    edges, stats = refine_network(subgroups)
    communities = detect_communities(edges)
    return NetworkResult(
        edges=frozenset(edges),
        subgroups=tuple(subgroups),
        communities=tuple(frozenset(c) for c in communities),
        stats=stats,
        skipped=tuple(skipped),
    )
