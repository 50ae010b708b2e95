import random

import pytest

from maritime_cer import intervals as ia
from maritime_cer.engine import (
    ANY,
    DescriptionError,
    Engine,
    EventDescription,
    FluentId,
    InputEvent,
    InputFluent,
    Rule,
    SimpleFluent,
    StaticFluent,
    Window,
    holds_for,
    intersect_all,
    longer_than,
    relative_complement_all,
    run_batch,
    run_windows,
    sweep,
    union_all,
    window_schedule,
)
from maritime_cer.intervals import OPEN, Interval

from oracles import ANY_VALUE, ec_holds

I = Interval
INIT, TERM = 1, 0


def _init(ev, ctx):
    return [(ev.args, ev.data[0])]


def _term(ev, ctx):
    v = ev.data[0]
    return [(ev.args, ANY if v == ANY_VALUE else v)]


def toy_description(values=("a", "b", "c"), deadline=None, extra=()):
    fluents = [
        SimpleFluent("f", [Rule("i", _init)], [Rule("t", _term)], values=values, deadline=deadline),
        *extra,
    ]
    outputs = [f.name for f in fluents]
    return EventDescription({"i": 1, "t": 1, "u": 1}, fluents, outputs)


def random_scenario(rng, horizon=200):
    values = ("a", "b", "c") if rng.random() < 0.5 else (True,)
    deadline = rng.choice([None, None, rng.randint(1, 40)])
    points = []
    for _ in range(rng.randint(0, 14)):
        t = rng.randint(0, horizon)
        if rng.random() < 0.55:
            points.append((t, "init", rng.choice(values)))
        else:
            points.append((t, "term", rng.choice(values + (ANY_VALUE,))))
    return values, deadline, points


def scenario_events(points, vessel="x"):
    return [InputEvent("i" if k == "init" else "t", (vessel,), t, (v,)) for t, k, v in points]


def check_against_oracle(values, deadline, points, result, last_t):
    for t in range(0, last_t + 2):
        expect = ec_holds(points, values, deadline, t)
        for v in values:
            got = ia.holds_at(result.get(FluentId("f", ("x",), v), []), t)
            assert got == (expect == v), (t, v, expect, points, deadline, result)


# -- the sweep ------------------------------------------------------------


def test_sweep_initiation_holds_from_next_point():
    out, _ = sweep([(5, INIT, True), (9, TERM, True)])
    assert out == {True: [I(6, 10)]}


def test_sweep_open_and_reinitiation():
    out, _ = sweep([(5, INIT, True), (7, INIT, True)])
    assert out == {True: [I(6, OPEN)]}


def test_sweep_simultaneous_termination_and_initiation_is_one_interval():
    out, _ = sweep([(2, INIT, True), (5, TERM, True), (5, INIT, True), (8, TERM, True)])
    assert out == {True: [I(3, 9)]}


def test_sweep_deadline():
    out, _ = sweep([(10, INIT, True)], deadline=30, query_time=100)
    assert out == {True: [I(11, 41)]}
    out, _ = sweep([(10, INIT, True), (30, INIT, True)], deadline=30, query_time=100)
    assert out == {True: [I(11, 61)]}
    # still within its deadline at the query time: open
    out, _ = sweep([(90, INIT, True)], deadline=30, query_time=100)
    assert out == {True: [I(91, OPEN)]}


def test_sweep_multivalued():
    pts = [(1, INIT, "a"), (4, INIT, "b"), (6, TERM, ANY)]
    out, _ = sweep(pts, values=("a", "b"))
    assert out == {"a": [I(2, 5)], "b": [I(5, 7)]}
    # competing initiations at one point: the earlier declared value wins
    out, _ = sweep([(1, INIT, "b"), (1, INIT, "a")], values=("a", "b"))
    assert out == {"a": [I(2, OPEN)]}


# -- per-time-point oracle ---------------------------------------------------


def test_simple_fluents_match_event_calculus_oracle():
    rng = random.Random(2024)
    for _ in range(400):
        values, deadline, points = random_scenario(rng)
        desc = toy_description(values, deadline)
        size = rng.choice([10, 25, 60, 400])
        slide = rng.choice([s for s in (5, 10, 25, 60) if s <= size])
        result, engine = run_windows(desc, scenario_events(points), size=size, slide=slide, first=0, last=200)
        check_against_oracle(values, deadline, points, result, engine.stats[-1].query_time)


def test_batch_matches_oracle():
    rng = random.Random(99)
    for _ in range(200):
        values, deadline, points = random_scenario(rng)
        result = run_batch(toy_description(values, deadline), scenario_events(points), query_time=200, first=0)
        check_against_oracle(values, deadline, points, result, 200)


# -- windowing ---------------------------------------------------------------


def test_window_schedule_is_aligned():
    assert window_schedule(7, 25, 10) == [10, 20, 30]
    assert window_schedule(10, 10, 10) == [10]
    with pytest.raises(ValueError):
        Window(5, 10, 0)


def test_fluent_spanning_many_windows_keeps_its_start():
    desc = toy_description((True,))
    evs = scenario_events([(3, "init", True), (95, "term", True)])
    result, _ = run_windows(desc, evs, size=10, slide=10, first=0, last=100)
    assert result[FluentId("f", ("x",), True)] == [I(4, 96)]


def test_deadline_carried_across_windows():
    desc = toy_description((True,), deadline=25)
    evs = scenario_events([(8, "init", True), (18, "init", True)])
    result, _ = run_windows(desc, evs, size=10, slide=10, first=0, last=100)
    assert result[FluentId("f", ("x",), True)] == [I(9, 44)]


def test_start_end_triggers():
    shifted = SimpleFluent(
        "h",
        [Rule(("start", "f", "a"), lambda ev, ctx: [(ev.args, True)])],
        [Rule(("end", "f", "a"), lambda ev, ctx: [(ev.args, True)])],
        depends_on=("f",),
    )
    desc = toy_description(extra=(shifted,))
    evs = scenario_events([(10, "init", "a"), (20, "term", "a"), (50, "init", "a")])
    result = run_batch(desc, evs, query_time=100, first=0)
    assert result[FluentId("f", ("x",), "a")] == [I(11, 21), I(51, OPEN)]
    assert result[FluentId("h", ("x",), True)] == [I(12, 22), I(52, OPEN)]


def _static(name, body_fn, deps):
    return StaticFluent(name, lambda args, facts: body_fn(*args), deps, ("p", "q"))


def layered_description():
    """p, q simple; r = (p | q) - s longer than 15; s = p & q."""
    fl = [
        SimpleFluent("p", [Rule("i", lambda ev, ctx: [(ev.args, True)] if ev.data[0] == "p" else ())],
                     [Rule("t", lambda ev, ctx: [(ev.args, True)] if ev.data[0] == "p" else ())]),
        SimpleFluent("q", [Rule("i", lambda ev, ctx: [(ev.args, True)] if ev.data[0] == "q" else ())],
                     [Rule("t", lambda ev, ctx: [(ev.args, True)] if ev.data[0] == "q" else ())],
                     deadline=30),
        _static("s", lambda v: intersect_all(holds_for("p", v), holds_for("q", v)), ("p", "q")),
        _static("r", lambda v: longer_than(
            relative_complement_all(union_all(holds_for("p", v), holds_for("q", v)), holds_for("s", v)), 15),
            ("p", "q", "s")),
        StaticFluent("qq", lambda args, facts: longer_than(holds_for("q", *args), 20), ("q",), ("q",)),
    ]
    return EventDescription({"i": 1, "t": 1}, fl, ["p", "q", "r", "s", "qq"])


def random_layered_events(rng, horizon=300, vessels=("x", "y")):
    evs = []
    for v in vessels:
        for _ in range(rng.randint(0, 16)):
            evs.append(InputEvent(rng.choice("it"), (v,), rng.randint(0, horizon), (rng.choice("pq"),)))
    return evs


def test_windowed_equals_batch_for_static_fluents():
    rng = random.Random(5)
    desc = layered_description()
    for _ in range(300):
        evs = random_layered_events(rng)
        size = rng.choice([20, 40, 80, 120])
        slide = rng.choice([s for s in (10, 20, 40) if s <= size])
        windowed, engine = run_windows(desc, evs, size=size, slide=slide, first=0, last=300)
        batch = run_batch(desc, evs, query_time=engine.stats[-1].query_time, first=0)
        assert windowed == batch


def test_static_fluent_is_the_interval_algebra_of_its_parts():
    rng = random.Random(11)
    desc = layered_description()
    for _ in range(100):
        res = run_batch(desc, random_layered_events(rng), query_time=300, first=0)
        for v in ("x", "y"):
            p = res.get(FluentId("p", (v,), True), [])
            q = res.get(FluentId("q", (v,), True), [])
            s = ia.intersect_all([p, q])
            r = ia.intervals_longer_than(ia.relative_complement_all(ia.union_all([p, q]), [s]), 15)
            assert res.get(FluentId("s", (v,), True), []) == s
            assert res.get(FluentId("r", (v,), True), []) == r


# -- late events and partial recomputation ------------------------------------


def test_late_events_are_counted_and_dropped():
    desc = toy_description((True,))
    eng = Engine(desc, Window(10, 10, 20))
    ack = eng.assert_events(scenario_events([(5, "init", True), (15, "init", True)]))
    assert (ack.accepted, ack.late) == (1, 1)
    assert eng.late_events == 1
    assert eng.holds_for(FluentId("f", ("x",), True)) == [I(16, OPEN)]


def test_event_in_current_window_triggers_recompute():
    desc = toy_description((True,))
    eng = Engine(desc, Window(50, 10, 50))
    eng.assert_events([InputEvent("i", ("x",), 10, (True,)), InputEvent("i", ("y",), 12, (True,))])
    assert eng.holds_for(FluentId("f", ("x",), True)) == [I(11, OPEN)]
    eng.assert_events([InputEvent("t", ("x",), 30, (True,))])
    assert eng.holds_for(FluentId("f", ("x",), True)) == [I(11, 31)]
    assert eng.holds_for(FluentId("f", ("y",), True)) == [I(13, OPEN)]
    assert eng.holds_at(FluentId("f", ("y",), True), 40)


def test_out_of_order_delivery_matches_in_order():
    rng = random.Random(3)
    desc = layered_description()
    for _ in range(60):
        evs = random_layered_events(rng, horizon=100)
        ref = run_batch(desc, evs, query_time=100, first=0)
        eng = Engine(desc, Window(200, 100, 100))
        shuffled = evs[:]
        rng.shuffle(shuffled)
        half = len(shuffled) // 2
        eng.assert_events(shuffled[:half])
        eng.holds_for(FluentId("p", ("x",), True))  # force an evaluation in between
        eng.assert_events(shuffled[half:])
        got = {a.fluent: list(a.intervals) for a in eng.evaluate_window()}
        assert got == ref


def test_input_fluent_intervals():
    desc = EventDescription(
        {"i": 1},
        [InputFluent("near"),
         StaticFluent("both", lambda args, facts: holds_for("near", *args), ("near",), ("near",))],
        ["both"],
    )
    res = run_batch(desc, [], {FluentId("near", ("a", "b"), True): [I(5, 20), I(40, 45)]}, query_time=100, first=0)
    assert res[FluentId("both", ("a", "b"), True)] == [I(5, 20), I(40, 45)]


# -- declarations ----------------------------------------------------------------


def test_cycles_and_unknown_names_are_rejected():
    a = StaticFluent("a", lambda args, f: holds_for("b", *args), ("b",), ("b",))
    b = StaticFluent("b", lambda args, f: holds_for("a", *args), ("a",), ("a",))
    with pytest.raises(DescriptionError, match="cycle"):
        EventDescription({}, [a, b], ["a"])
    with pytest.raises(DescriptionError):
        EventDescription({}, [SimpleFluent("f", [Rule("nope", _init)])], ["f"])
    with pytest.raises(DescriptionError):
        toy_description().check_event(InputEvent("i", ("x", "y"), 1))
    with pytest.raises(DescriptionError):
        toy_description().check_event(InputEvent("zzz", ("x",), 1))
    with pytest.raises(KeyError):
        Engine(toy_description(), Window(10, 10, 10)).holds_for(FluentId("nope", ()))
