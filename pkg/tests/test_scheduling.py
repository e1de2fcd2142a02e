import json
from datetime import date, datetime

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavepulse.errors import ConfigError, FilenameError, ScheduleError
from wavepulse.scheduling import (
    BROADCAST_TZ,
    AudioChunkMeta,
    chunk_filename,
    distribute_to_buffers,
    expand_windows,
    parse_filename,
    parse_schedule,
)

KENI = {
    "url": "https://stream.revma.ihrhls.com/zc3014",
    "radio_name": "KENI",
    "time": ["08:00", "14:00", "17:00", "21:30"],
    "state": "AK",
}


def dt(y, mo, d, h, mi):
    return datetime(y, mo, d, h, mi, tzinfo=BROADCAST_TZ)


class TestParseSchedule:
    def test_single_station_two_windows(self):
        entries = parse_schedule(json.dumps([KENI]))
        assert len(entries) == 1
        assert entries[0].radio_name == "KENI"
        assert entries[0].window_pairs() == [("08:00", "14:00"), ("17:00", "21:30")]

    def test_empty_array(self):
        assert parse_schedule("[]") == []

    def test_odd_times_rejected_with_station_name(self):
        bad = dict(KENI, time=["08:00"])
        with pytest.raises(ScheduleError, match="KENI"):
            parse_schedule([bad])

    def test_malformed_entry_names_index(self):
        with pytest.raises(ScheduleError, match="entry 1"):
            parse_schedule([KENI, {"radio_name": "WABC"}])

    def test_bad_call_sign(self):
        with pytest.raises(ScheduleError):
            parse_schedule([dict(KENI, radio_name="QQQ")])

    def test_order_preserved(self):
        other = dict(KENI, radio_name="WABC", state="NY")
        entries = parse_schedule([KENI, other])
        assert [e.radio_name for e in entries] == ["KENI", "WABC"]


class TestExpandWindows:
    def test_two_plain_windows(self):
        entry = parse_schedule([KENI])[0]
        windows = expand_windows(entry, date(2024, 7, 16))
        assert [(w.start, w.end) for w in windows] == [
            (dt(2024, 7, 16, 8, 0), dt(2024, 7, 16, 14, 0)),
            (dt(2024, 7, 16, 17, 0), dt(2024, 7, 16, 21, 30)),
        ]

    def test_midnight_rollover(self):
        entry = parse_schedule([dict(KENI, time=["23:00", "02:30"])])[0]
        (window,) = expand_windows(entry, date(2024, 7, 16))
        assert window.start == dt(2024, 7, 16, 23, 0)
        assert window.end == dt(2024, 7, 17, 2, 30)

    def test_outside_operating_span_is_dropped(self):
        entry = parse_schedule([dict(KENI, time=["03:30", "04:30"])])[0]
        assert expand_windows(entry, date(2024, 7, 16)) == []

    def test_clipped_to_span_tail(self):
        entry = parse_schedule([dict(KENI, time=["22:00", "03:45"])])[0]
        (window,) = expand_windows(entry, date(2024, 7, 16))
        assert window.end == dt(2024, 7, 17, 3, 0)

    def test_never_starts_before_span(self):
        entry = parse_schedule([dict(KENI, time=["04:00", "06:00"])])[0]
        (window,) = expand_windows(entry, date(2024, 7, 16))
        assert window.start == dt(2024, 7, 16, 5, 0)


class TestFilenames:
    def test_documented_example(self):
        meta = AudioChunkMeta(
            state="CA", call_sign="KAHI", start_instant=dt(2024, 7, 16, 13, 30)
        )
        assert chunk_filename(meta) == "CA_KAHI_2024_07_16_13_30.mp3"

    def test_documented_example_parses(self):
        meta = parse_filename("CA_KAHI_2024_07_16_13_30.mp3")
        assert meta.key_fields() == ("CA", "KAHI", dt(2024, 7, 16, 13, 30))

    def test_round_trip(self):
        meta = AudioChunkMeta(
            state="AK", call_sign="KENI", start_instant=dt(2024, 1, 2, 5, 0)
        )
        assert parse_filename(chunk_filename(meta)) == meta

    @pytest.mark.parametrize(
        "name", ["badname.mp3", "CA_KAHI_2024_07_16_13_30.wav", "ca_KAHI_2024_07_16_13_30.mp3"]
    )
    def test_non_matching_names_rejected(self, name):
        with pytest.raises(FilenameError):
            parse_filename(name)

    @given(
        state=st.from_regex(r"[A-Z]{2}", fullmatch=True),
        call=st.from_regex(r"[AKNW][A-Z]{2,3}", fullmatch=True),
        when=st.datetimes(
            min_value=datetime(2000, 1, 1),
            max_value=datetime(2099, 12, 31, 23, 59),
        ).map(lambda d: d.replace(second=0, microsecond=0, tzinfo=BROADCAST_TZ)),
    )
    @settings(max_examples=200)
    def test_round_trip_property(self, state, call, when):
        meta = AudioChunkMeta(state=state, call_sign=call, start_instant=when)
        assert parse_filename(chunk_filename(meta)) == meta


class TestBufferDistribution:
    def test_seven_chunks_three_buffers(self):
        chunks = _chunks(7)
        assigned = distribute_to_buffers(chunks, 3)
        loads = _loads(assigned, 3)
        assert loads == [3, 2, 2]

    def test_empty(self):
        assert distribute_to_buffers([], 4) == []

    def test_deployment_sizing(self):
        # pigeonhole: 396 daily recordings over 7 shards
        assigned = distribute_to_buffers(_chunks(396), 7)
        loads = _loads(assigned, 7)
        assert all(load in (56, 57) for load in loads)
        assert sum(loads) == 396

    def test_zero_buffers_rejected(self):
        with pytest.raises(ConfigError):
            distribute_to_buffers(_chunks(1), 0)

    def test_partition_every_chunk_once(self):
        assigned = distribute_to_buffers(_chunks(25), 4)
        assert len(assigned) == 25
        assert all(c.buffer_id is not None for c in assigned)

    def test_deterministic(self):
        chunks = _chunks(11)
        first = [c.buffer_id for c in distribute_to_buffers(chunks, 3)]
        second = [c.buffer_id for c in distribute_to_buffers(chunks, 3)]
        assert first == second


def _chunks(n):
    base = datetime(2024, 7, 16, 5, 0, tzinfo=BROADCAST_TZ)
    out = []
    for i in range(n):
        start = base.replace(hour=5 + (i // 60) % 12, minute=i % 60)
        out.append(AudioChunkMeta(state="CA", call_sign="KAHI", start_instant=start))
    return out


def _loads(assigned, n_buffers):
    counts = [0] * n_buffers
    for c in assigned:
        counts[c.buffer_id] += 1
    return counts
