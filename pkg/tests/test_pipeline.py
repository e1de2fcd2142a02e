import itertools
import json
import random

import pytest

from conftest import FIXTURE_CHUNKS, make_engine_config, seed_buffers, tree_hash
from wavepulse.clients.mocks import CORRUPT_MARKER
from wavepulse.service import Journal, PipelineInterrupt, PipelineRunner, build_clients
from wavepulse.service.journal import STAGES
from wavepulse.vectorstore import VectorIndex


def settled_counters(config):
    runner = PipelineRunner(config)
    return runner.run_until_settled()


class TestColdStart:
    def test_fixture_chunks_reach_embedded(self, engine):
        counters = settled_counters(engine)
        assert counters["embedded"] == len(FIXTURE_CHUNKS)
        assert counters["failed"] == 0

    def test_artifacts_exist_per_chunk(self, engine):
        settled_counters(engine)
        layout = engine.layout
        for chunk in FIXTURE_CHUNKS:
            assert (layout.raw_transcripts / f"{chunk}.json").exists()
            assert (layout.raw_transcripts / f"{chunk}.labels.json").exists()
            for part in ("news", "ads", "apolitical"):
                assert (layout.part_dir(part) / f"{chunk}.txt").exists()

    def test_index_contains_embedded_chunks(self, engine):
        settled_counters(engine)
        index = VectorIndex.load(engine.layout.index)
        assert len(index) >= 1
        for record in index.records():
            assert record.id in FIXTURE_CHUNKS
            assert set(record.metadata) == {"state", "call_sign", "date", "time"}

    def test_partition_law_on_disk(self, engine):
        settled_counters(engine)
        layout = engine.layout
        for chunk in FIXTURE_CHUNKS:
            segments = json.loads(
                (layout.raw_transcripts / f"{chunk}.json").read_text()
            )
            labels = json.loads(
                (layout.raw_transcripts / f"{chunk}.labels.json").read_text()
            )
            assert len(segments) == len(labels)


class TestIdempotence:
    def test_second_run_is_a_no_op(self, engine):
        settled_counters(engine)
        before = tree_hash(engine.root)

        calls = []
        clients = build_clients(engine)
        original = clients.transcriber.transcribe
        clients.transcriber.transcribe = lambda b: (calls.append(1), original(b))[1]
        runner = PipelineRunner(engine, clients=clients)
        counters = runner.run_until_settled()

        assert calls == []  # no stage re-executed for completed chunks
        assert counters["embedded"] == len(FIXTURE_CHUNKS)
        assert tree_hash(engine.root) == before

    def test_restart_mid_run_no_duplicates(self, engine):
        # crash after the first chunk finishes, then resume
        seen = itertools.count()

        def crash_after(n):
            def hook(label):
                if next(seen) == n:
                    raise PipelineInterrupt(label)

            return hook

        runner = PipelineRunner(engine, checkpoint=crash_after(14))
        with pytest.raises(PipelineInterrupt):
            runner.run_until_settled()
        resumed = PipelineRunner(engine)
        counters = resumed.run_until_settled()
        assert counters["embedded"] == len(FIXTURE_CHUNKS)


class TestCrashResume:
    def test_output_tree_identical_across_random_kill_points(self, tmp_path):
        baseline_config = make_engine_config(tmp_path / "baseline")
        seed_buffers(baseline_config)
        PipelineRunner(baseline_config).run_until_settled()
        want = tree_hash(baseline_config.root)

        rng = random.Random(2024)
        kill_points = sorted(rng.sample(range(2, 60), 10))
        for kill_at in kill_points:
            config = make_engine_config(tmp_path / f"kill{kill_at}")
            seed_buffers(config)
            countdown = itertools.count()

            def hook(label):
                if next(countdown) == kill_at:
                    raise PipelineInterrupt(label)

            runner = PipelineRunner(config, checkpoint=hook)
            try:
                runner.run_until_settled()
            except PipelineInterrupt:
                pass
            PipelineRunner(config).run_until_settled()
            assert tree_hash(config.root) == want, f"kill point {kill_at}"


class TestAudioRetention:
    def test_release_audio_after_transcription(self, tmp_path):
        config = make_engine_config(tmp_path / "data", retain_audio=False)
        seed_buffers(config)
        counters = PipelineRunner(config).run_until_settled()
        assert counters["embedded"] == len(FIXTURE_CHUNKS)
        assert list(config.layout.buffers_root.glob("*/*.mp3")) == []

    def test_default_retains_audio(self, engine):
        PipelineRunner(engine).run_until_settled()
        remaining = list(engine.layout.buffers_root.glob("*/*.mp3"))
        assert len(remaining) == len(FIXTURE_CHUNKS)


class TestQuarantine:
    def test_corrupt_chunk_quarantined(self, tmp_path):
        config = make_engine_config(tmp_path / "data")
        chunks = dict(FIXTURE_CHUNKS)
        chunks["NV_KELY_2024_07_01_10_00"] = CORRUPT_MARKER + b"not really audio"
        seed_buffers(config, chunks)
        counters = PipelineRunner(config).run_until_settled()
        assert counters["failed"] == 1
        assert counters["embedded"] == len(FIXTURE_CHUNKS)
        quarantined = list(config.layout.failed.glob("*.mp3"))
        assert [p.name for p in quarantined] == ["NV_KELY_2024_07_01_10_00.mp3"]

    def test_quarantined_chunk_not_retried(self, tmp_path):
        config = make_engine_config(tmp_path / "data")
        seed_buffers(config, {"NV_KELY_2024_07_01_10_00": CORRUPT_MARKER + b"x"})
        PipelineRunner(config).run_until_settled()
        journal_len = len(Journal(config.layout.journal_path).read_lines())
        PipelineRunner(config).run_until_settled()
        assert len(Journal(config.layout.journal_path).read_lines()) == journal_len


class TestJournal:
    def test_replay_reconstructs_stages(self, tmp_path):
        journal = Journal(tmp_path / "j.ndjson")
        journal.record("c1", "recorded", "done")
        journal.record("c1", "transcribed", "done")
        journal.record("c1", "labeled", "failed", error="boom")
        states = journal.replay()
        assert states["c1"].done == {"recorded", "transcribed"}
        assert states["c1"].attempts("labeled") == 1
        assert states["c1"].stage == "transcribed"

    def test_torn_tail_tolerated(self, tmp_path):
        path = tmp_path / "j.ndjson"
        journal = Journal(path)
        journal.record("c1", "recorded", "done")
        with path.open("a", encoding="utf-8") as fh:
            fh.write('{"chunk": "c2", "stage": "recor')  # torn write, no newline
        reopened = Journal(path)
        reopened.record("c3", "recorded", "done")
        states = reopened.replay()
        assert set(states) == {"c1", "c3"}

    def test_stage_counters_ordering(self, tmp_path):
        journal = Journal(tmp_path / "j.ndjson")
        for stage in STAGES[:3]:
            journal.record("c1", stage, "done")
        counters = journal.stage_counters()
        assert counters["labeled"] == 1
        assert counters["embedded"] == 0
