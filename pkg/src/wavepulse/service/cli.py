"""Command-line interface: record, process, network, trends, query, serve, status."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import date
from pathlib import Path

from ..errors import WavePulseError
from ..recording import HttpStreamSource, IngestLog, RecorderPolicy, record_stream
from ..scheduling import expand_windows, parse_schedule
from ..syndication import build_syndication_network
from ..transcripts import parse_segments
from .config import EngineConfig
from .journal import Journal
from .pipeline import PipelineRunner, distribute_recordings

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavepulse",
        description="Record web radio, build rich transcripts, run content analytics.",
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p_record = sub.add_parser("record", help="record all scheduled streams for a day")
    p_record.add_argument("--config", default="wavepulse.json")
    p_record.add_argument("--date", default=None, help="YYYY-MM-DD (default: today)")

    p_process = sub.add_parser("process", help="run buffered chunks through the pipeline")
    p_process.add_argument("--config", default="wavepulse.json")

    p_network = sub.add_parser("network", help="build the syndication network")
    p_network.add_argument("--config", default=None)
    p_network.add_argument("--transcripts", default=None, help="directory of transcripts")
    p_network.add_argument("--theta", type=float, default=0.8)
    p_network.add_argument("--hashes", type=int, default=256)
    p_network.add_argument("--bands", type=int, default=32)
    p_network.add_argument("--rows", type=int, default=8)
    p_network.add_argument("--out", default="edges.csv")
    p_network.add_argument("--subgroups", default=None, help="also dump subgroup JSON")
    p_network.add_argument("--communities", default=None, help="also dump communities CSV")

    p_trends = sub.add_parser("trends", help="emit trend, lead, and narrative analytics")
    p_trends.add_argument("--config", default="wavepulse.json")
    p_trends.add_argument("--from", dest="date_from", default=None)
    p_trends.add_argument("--to", dest="date_to", default=None)
    p_trends.add_argument("--window", type=int, default=None)
    p_trends.add_argument("--scope", choices=["national", "state", "both"], default="both")

    p_query = sub.add_parser("query", help="ask a question over the summary index")
    p_query.add_argument("question")
    p_query.add_argument("--config", default="wavepulse.json")
    p_query.add_argument("--state", default=None)
    p_query.add_argument("--k", type=int, default=8)

    p_serve = sub.add_parser("serve", help="serve the analytics API")
    p_serve.add_argument("--config", default="wavepulse.json")
    p_serve.add_argument("--host", default=None)
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--offline", action="store_true", help="force mock clients")

    p_status = sub.add_parser("status", help="pipeline stage counters")
    p_status.add_argument("--config", default="wavepulse.json")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        return _dispatch(args)
    except WavePulseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "record":
        return _cmd_record(args)
    if args.command == "process":
        return _cmd_process(args)
    if args.command == "network":
        return _cmd_network(args)
    if args.command == "trends":
        return _cmd_trends(args)
    if args.command == "query":
        return _cmd_query(args)
    if args.command == "serve":
        return _cmd_serve(args)
    if args.command == "status":
        return _cmd_status(args)
    raise AssertionError(args.command)


def _cmd_record(args) -> int:
    config = EngineConfig.from_file(args.config)
    if not config.schedule_path:
        print("error: config has no schedule_path", file=sys.stderr)
        return 1
    day = date.fromisoformat(args.date) if args.date else date.today()
    layout = config.layout
    layout.ensure()
    entries = parse_schedule(Path(config.schedule_path).read_text(encoding="utf-8"))
    ingest = IngestLog(layout.ingest_log_path)
    source = HttpStreamSource()
    policy = RecorderPolicy()

    def record_entry(entry):
        total = 0
        for window in expand_windows(entry, day):
            for _meta in record_stream(
                window,
                entry.url,
                state=entry.state,
                source=source,
                out_dir=layout.recordings,
                ingest=ingest,
                policy=policy,
            ):
                total += 1
        return total

    with ThreadPoolExecutor(max_workers=min(32, max(1, len(entries)))) as pool:
        counts = list(pool.map(record_entry, entries))
    moved = distribute_recordings(config)
    print(f"recorded {sum(counts)} chunks from {len(entries)} stations; buffered {moved}")
    return 0


def _cmd_process(args) -> int:
    config = EngineConfig.from_file(args.config)
    distribute_recordings(config)
    runner = PipelineRunner(config)
    counters = runner.run_until_settled()
    counters.pop("progressed", None)
    print(json.dumps(counters, indent=2))
    return 0


def _cmd_network(args) -> int:
    if args.transcripts:
        texts = _read_transcript_dir(Path(args.transcripts))
        out_path = Path(args.out)
        result = build_syndication_network(
            texts,
            theta=args.theta,
            num_hashes=args.hashes,
            bands=args.bands,
            rows=args.rows,
        )
        _write_edges_csv(out_path, result.edges)
        if args.subgroups:
            Path(args.subgroups).write_text(
                json.dumps([list(g.members) for g in result.subgroups], indent=2),
                encoding="utf-8",
            )
        if args.communities:
            _write_communities_csv(Path(args.communities), result.communities)
        print(
            f"{len(texts)} transcripts -> {len(result.subgroups)} subgroups, "
            f"{len(result.edges)} edges"
        )
        return 0

    if not args.config:
        print("error: provide --transcripts DIR or --config FILE", file=sys.stderr)
        return 1
    from .analytics import write_network_analytics

    config = EngineConfig.from_file(args.config)
    paths = write_network_analytics(config)
    print("\n".join(str(p) for p in paths.values()))
    return 0


def _cmd_trends(args) -> int:
    from .analytics import write_narrative_analytics, write_trend_analytics

    config = EngineConfig.from_file(args.config)
    if args.window:
        config.trend_window_days = args.window
    date_from = date.fromisoformat(args.date_from) if args.date_from else None
    date_to = date.fromisoformat(args.date_to) if args.date_to else None
    paths = write_trend_analytics(config, date_from=date_from, date_to=date_to)
    paths.update(write_narrative_analytics(config))
    print("\n".join(str(p) for p in paths.values()))
    return 0


def _cmd_query(args) -> int:
    from ..vectorstore import RagEngine, VectorIndex
    from .pipeline import build_clients

    config = EngineConfig.from_file(args.config)
    index_dir = config.layout.index
    if not (index_dir / "manifest.json").exists():
        print("no matching content")
        return 0
    index = VectorIndex.load(index_dir)
    clients = build_clients(config)

    def lookup(chunk: str) -> str:
        path = config.layout.summaries / f"{chunk}.txt"
        return path.read_text(encoding="utf-8") if path.exists() else ""

    engine = RagEngine(index, clients.embedder, clients.generator, lookup)
    flt = {"state": args.state} if args.state else None
    result = engine.answer_query(args.question, k=args.k, flt=flt)
    print(result["answer"])
    for hit in result["sources"]:
        meta = hit.metadata
        print(f"  [{meta.get('state')}] {meta.get('call_sign')} {meta.get('date')} {meta.get('time')}  ({hit.id})")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    config = EngineConfig.from_file(args.config)
    if args.offline:
        config.offline = True
    host = args.host or config.api_host
    port = args.port or config.api_port
    uvicorn.run(create_app(config), host=host, port=port, log_level="info")
    return 0


def _cmd_status(args) -> int:
    config = EngineConfig.from_file(args.config)
    journal = Journal(config.layout.journal_path)
    print(json.dumps({"stages": journal.stage_counters()}, indent=2))
    return 0


def _read_transcript_dir(directory: Path) -> dict[str, str]:
    if not directory.is_dir():
        raise WavePulseError(f"not a directory: {directory}")
    texts: dict[str, str] = {}
    for path in sorted(directory.iterdir()):
        if path.suffix == ".txt":
            texts[path.stem] = path.read_text(encoding="utf-8")
        elif path.suffix == ".json" and not path.name.endswith(".labels.json"):
            segments = parse_segments(path.read_text(encoding="utf-8"))
            texts[path.stem] = " ".join(s.text for s in segments)
    return texts


def _write_edges_csv(path: Path, edges) -> None:
    import csv

    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["station_a", "station_b"])
        for edge in sorted(edges):
            writer.writerow([edge.station_a, edge.station_b])


def _write_communities_csv(path: Path, communities) -> None:
    import csv

    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["station", "community_id"])
        for community_id, members in enumerate(communities):
            for station in sorted(members):
                writer.writerow([station, community_id])
