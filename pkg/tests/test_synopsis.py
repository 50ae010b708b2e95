import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maritime_cer.engine import InputEvent
from maritime_cer.geo import GeoPoint
from maritime_cer.synopsis import (
    AisMessage,
    ParseStats,
    SynopsisConfig,
    angle_diff,
    compression_ratio,
    label_stream,
    read_ais_csv,
    velocity_events,
    write_ais_csv,
    write_critical_csv,
)


def msg(t, speed, cog=90.0, heading=None, vessel="v"):
    return AisMessage(vessel, t, GeoPoint(-4.5, 48.3), speed, cog, heading)


def names(res):
    return [(e.name, e.t) for e in res.events]


def test_constant_cruise_has_no_critical_points():
    res = label_stream([msg(60 * i, 10.0, 90.0, 90.0) for i in range(30)])
    assert res.events == [] and res.compressed == []
    assert res.ratio == 1.0


def test_gap_events():
    res = label_stream([msg(0, 10.0), msg(3600, 10.0)])
    assert names(res) == [("gap_start", 0), ("gap_end", 3600)]
    assert [m.t for m in res.compressed] == [0, 3600]
    assert names(label_stream([msg(0, 10.0), msg(1799, 10.0)])) == []
    assert names(label_stream([msg(0, 10.0), msg(1800, 10.0)])) == [("gap_start", 0), ("gap_end", 1800)]


def test_speed_bands():
    res = label_stream([msg(0, 10.0), msg(60, 0.4), msg(120, 0.3), msg(180, 3.0), msg(240, 3.1), msg(300, 10.0)])
    bands = [(n, t) for n, t in names(res) if "stop" in n or "slow" in n]
    assert sorted(bands, key=lambda b: b[1]) == [
        ("stop_start", 60), ("slow_motion_start", 180), ("stop_end", 180), ("slow_motion_end", 300)]
    # the band boundaries: 0.5 is already slow motion, 5.0 already moving
    assert names(label_stream([msg(0, 0.5)])) == [("slow_motion_start", 0)]
    assert names(label_stream([msg(0, 5.0)])) == []


def test_change_in_speed_needs_two_calm_deltas():
    speeds = [10.0, 10.0, 14.0, 14.2, 14.1, 14.0]
    res = label_stream([msg(60 * i, s) for i, s in enumerate(speeds)])
    assert names(res) == [("change_in_speed_start", 120), ("change_in_speed_end", 240)]
    # the 1 kn floor: 0.2 -> 0.45 kn is not a change
    res = label_stream([msg(0, 2.0), msg(60, 2.2), msg(120, 2.45)])
    assert [n for n, _ in names(res) if "speed" in n] == []


def test_change_in_heading_wraps_and_falls_back_to_cog():
    assert angle_diff(350, 10) == 20
    assert angle_diff(10, 350) == 20
    assert angle_diff(0, 180) == 180
    # 350 -> 5 is exactly the threshold (not a change), 5 -> 25 exceeds it
    res = label_stream([msg(0, 10.0, 90, 350.0), msg(60, 10.0, 90, 5.0), msg(120, 10.0, 90, 25.0)])
    assert names(res) == [("change_in_heading", 120)]
    res = label_stream([msg(0, 1.0, 90.0), msg(60, 1.0, 130.0)])
    assert ("change_in_heading", 60) in names(res)


def test_out_of_order_and_duplicates_are_dropped():
    res = label_stream([msg(0, 10.0), msg(60, 10.0), msg(30, 0.0), msg(60, 0.0), msg(120, 10.0)])
    assert res.dropped == 2
    assert res.total == 3
    assert names(res) == []


def test_compression_ratio():
    assert compression_ratio(100, 25) == 0.75
    assert compression_ratio(100, 100) == 0.0
    for bad in ((0, 0), (10, 11), (10, -1)):
        with pytest.raises(ValueError):
            compression_ratio(*bad)


def test_config_validation():
    with pytest.raises(ValueError):
        SynopsisConfig(stop_max_kn=5.0, slow_max_kn=1.0)
    with pytest.raises(ValueError):
        SynopsisConfig(gap_s=0)
    with pytest.raises(ValueError):
        msg(0, -1.0)


streams = st.lists(
    st.tuples(
        st.sampled_from("ab"),
        st.integers(1, 2500),
        st.sampled_from([0.0, 0.2, 0.49, 0.5, 1.0, 4.99, 5.0, 8.0, 12.0, 20.0]),
        st.integers(0, 359),
        st.one_of(st.none(), st.integers(0, 359)),
    ),
    max_size=40,
)


def build(rows):
    clock = {"a": 0, "b": 0}
    out = []
    for v, dt, speed, cog, heading in rows:
        clock[v] += dt
        out.append(AisMessage(v, clock[v], GeoPoint(0.0, 0.0), speed, float(cog),
                              None if heading is None else float(heading)))
    return out


PAIRS = [("gap_start", "gap_end"), ("stop_start", "stop_end"),
         ("slow_motion_start", "slow_motion_end"), ("change_in_speed_start", "change_in_speed_end")]


@settings(max_examples=300, deadline=None)
@given(streams)
def test_synopsis_invariants(rows):
    messages = build(rows)
    res = label_stream(messages)
    for v in "ab":
        mine = [e for e in res.events if e.args == (v,)]
        for start, end in PAIRS:
            seq = [e.name for e in mine if e.name in (start, end)]
            assert seq == [start, end] * (len(seq) // 2) + [start] * (len(seq) % 2)
        # stop band: no retained message inside a stop episode moves
        in_stop = False
        for m in (m for m in messages if m.vessel == v):
            names_at = {e.name for e in mine if e.t == m.t}
            if "stop_start" in names_at:
                in_stop = True
            if "stop_end" in names_at:
                in_stop = False
            if in_stop:
                assert m.speed < 0.5
    # critical events and retained messages correspond one-to-one by (vessel, time)
    assert {(e.args[0], e.t) for e in res.events} == {(m.vessel, m.t) for m in res.compressed}
    assert len(res.compressed) == len({(m.vessel, m.t) for m in res.compressed})


def test_csv_round_trip(tmp_path):
    messages = [
        AisMessage("227000001", 1443657600, GeoPoint(-4.4861234, 48.3812345), 8.76, 123.4, 120.0, 0, 0.0),
        AisMessage("227000001", 1443657660, GeoPoint(-4.4851234, 48.3822345), 13.82, 359.99, None, 7, -128.0),
    ]
    buf = io.StringIO()
    write_ais_csv(messages, buf)
    p = tmp_path / "ais.csv"
    p.write_text(buf.getvalue() + "227000001,0,0,abc,0,0,0,0,1443657720\n,,,,,,,\n")
    stats = ParseStats()
    assert read_ais_csv(p, stats) == messages
    assert (stats.rows, stats.skipped) == (4, 2)

    p.write_text("sourcemmsi,lon,lat\n1,2,3\n")
    with pytest.raises(ValueError, match="missing columns"):
        read_ais_csv(p)


def test_critical_csv_and_velocity_events():
    buf = io.StringIO()
    write_critical_csv([InputEvent("gap_start", ("227",), 5)], buf)
    assert buf.getvalue() == "t,event,vessel,aux\n5,gap_start,227,\n"
    assert velocity_events([msg(3, 4.0, 10.0, None)]) == [InputEvent("velocity", ("v",), 3, (4.0, 10.0, None))]
