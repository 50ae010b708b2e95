"""Run-time Event Calculus evaluation over a sliding window.

An :class:`EventDescription` declares the fluents of an application:

* :class:`SimpleFluent`: maximal intervals derived from initiation and
  termination points.  Initiation at ``T`` makes the fluent hold from
  ``T + 1``; termination at ``T`` makes it stop holding from ``T + 1``.
  An optional deadline terminates the fluent ``deadline`` seconds after its
  latest initiation.
* :class:`StaticFluent`: statically determined, a composition tree of
  interval operations over other fluents.
* :class:`InputFluent`: durative input given directly as intervals
  (e.g. proximity between two vessels).

The :class:`Engine` evaluates a description over the window
``(query_time - size, query_time]``.  Events at or before the window start
are forgotten; a fluent that holds across the window start is carried into
the next window with its original start time and deadline clock, so that
bounded intervals reported by successive windows coincide with a batch
evaluation of the whole stream.

Rules are assumed to be entity-local: an event only affects groundings that
share at least one argument with it.  Late events therefore trigger the
recomputation of the groundings of the touched entities only.
"""

from __future__ import annotations

import time
from bisect import bisect_right
from collections import defaultdict
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence, Union

from . import intervals as ia
from .intervals import OPEN, Interval, IntervalList


class _Any:
    def __repr__(self) -> str:
        return "ANY"


ANY: Any = _Any()
"""Value wildcard for terminations ("terminated whatever its value")."""


@dataclass(frozen=True, slots=True)
class InputEvent:
    """An instantaneous occurrence ``happensAt(name(args), t)``.

    ``data`` carries non-entity payload, e.g. speed/course/heading of a
    ``velocity`` event.
    """

    name: str
    args: tuple
    t: int
    data: tuple = ()


@dataclass(frozen=True, slots=True)
class FluentId:
    name: str
    args: tuple
    value: Hashable = True


@dataclass(frozen=True)
class FluentAssertion:
    fluent: FluentId
    intervals: tuple[Interval, ...]

    def __post_init__(self) -> None:
        ia.check(self.intervals)


@dataclass
class Window:
    size: int
    slide: int
    query_time: int

    def __post_init__(self) -> None:
        if not self.size >= self.slide > 0:
            raise ValueError(f"window needs size >= slide > 0, got {self.size}/{self.slide}")

    @property
    def start(self) -> int:
        """Forgetting boundary: events at or before this point are discarded."""
        return self.query_time - self.size


# A trigger is an input event name, or a built-in ("start"|"end", fluent, value).
Trigger = Union[str, tuple]
Effect = Callable[[InputEvent, "EvalContext"], Iterable[tuple[tuple, Hashable]]]


@dataclass(frozen=True)
class Rule:
    """``effect(event, ctx)`` returns the ``(args, value)`` pairs the event
    initiates (or terminates), empty when the rule's conditions fail.

    ``applies(args, facts)``, when given, is an atemporal precondition on the
    triggering event's arguments; it is checked once per argument tuple.
    """

    trigger: Trigger
    effect: Effect
    applies: Callable[[tuple, Any], bool] | None = None


@dataclass(frozen=True)
class SimpleFluent:
    name: str
    initiated: Sequence[Rule]
    terminated: Sequence[Rule] = ()
    values: tuple = (True,)
    deadline: int | None = None
    depends_on: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.initiated:
            raise ValueError(f"{self.name}: a simple fluent needs an initiation rule")
        if self.deadline is not None and self.deadline <= 0:
            raise ValueError(f"{self.name}: deadline must be positive")


@dataclass(frozen=True)
class StaticFluent:
    """``body(args, facts)`` builds the composition tree for one grounding.

    Groundings are the argument tuples of the fluents in ``groundings_from``
    that have intervals in the window, filtered by ``guard``.
    """

    name: str
    body: Callable[[tuple, Any], "Node"]
    depends_on: tuple[str, ...]
    groundings_from: tuple[str, ...]
    guard: Callable[[tuple, Any], bool] | None = None


@dataclass(frozen=True)
class InputFluent:
    name: str
    values: tuple = (True,)


FluentDef = Union[SimpleFluent, StaticFluent, InputFluent]


# -- composition trees ------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Ref:
    name: str
    args: tuple
    value: Hashable = True


@dataclass(frozen=True, slots=True)
class Union_:
    children: tuple


@dataclass(frozen=True, slots=True)
class Intersect:
    children: tuple


@dataclass(frozen=True, slots=True)
class Complement:
    base: Any
    subtrahends: tuple


@dataclass(frozen=True, slots=True)
class LongerThan:
    child: Any
    min_duration: float


Node = Union[Ref, Union_, Intersect, Complement, LongerThan]


def holds_for(name: str, *args: Hashable, value: Hashable = True) -> Ref:
    return Ref(name, args, value)


def union_all(*children: Node) -> Union_:
    return Union_(children)


def intersect_all(*children: Node) -> Intersect:
    return Intersect(children)


def relative_complement_all(base: Node, *subtrahends: Node) -> Complement:
    return Complement(base, subtrahends)


def longer_than(child: Node, min_duration: float) -> LongerThan:
    return LongerThan(child, min_duration)


# -- declarations -----------------------------------------------------------


class DescriptionError(ValueError):
    pass


class EventDescription:
    """A validated set of fluent definitions in dependency order."""

    def __init__(
        self,
        input_events: Mapping[str, int],
        fluents: Sequence[FluentDef],
        outputs: Sequence[str],
    ):
        self.input_events = dict(input_events)
        self.fluents = {f.name: f for f in fluents}
        if len(self.fluents) != len(fluents):
            raise DescriptionError("duplicate fluent names")
        if not outputs:
            raise DescriptionError("at least one output fluent is required")
        for name in outputs:
            if name not in self.fluents:
                raise DescriptionError(f"unknown output fluent {name!r}")
        self.outputs = tuple(outputs)

        graph: dict[str, set[str]] = {}
        for f in fluents:
            deps: set[str] = set()
            if isinstance(f, SimpleFluent):
                deps.update(f.depends_on)
                for rule in (*f.initiated, *f.terminated):
                    if isinstance(rule.trigger, str):
                        if rule.trigger not in self.input_events:
                            raise DescriptionError(
                                f"{f.name}: undeclared input event {rule.trigger!r}"
                            )
                    else:
                        kind, dep = rule.trigger[0], rule.trigger[1]
                        if kind not in ("start", "end"):
                            raise DescriptionError(f"{f.name}: bad trigger {rule.trigger!r}")
                        deps.add(dep)
            elif isinstance(f, StaticFluent):
                deps.update(f.depends_on)
                deps.update(f.groundings_from)
            for dep in deps:
                if dep not in self.fluents:
                    raise DescriptionError(f"{f.name} depends on unknown fluent {dep!r}")
            graph[f.name] = deps
        try:
            self.order = tuple(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            raise DescriptionError(f"dependency cycle: {exc.args[1]}") from None

    def check_event(self, ev: InputEvent) -> None:
        arity = self.input_events.get(ev.name)
        if arity is None:
            raise DescriptionError(f"undeclared input event {ev.name!r}")
        if len(ev.args) != arity:
            raise DescriptionError(f"{ev.name} expects {arity} arguments, got {len(ev.args)}")


# -- simple fluent sweep ----------------------------------------------------

INIT, TERM = 1, 0


@dataclass(slots=True)
class _State:
    value: Hashable
    start: int
    last_init: int


def sweep(
    points: Sequence[tuple[int, int, Hashable]],
    *,
    values: Sequence[Hashable] = (True,),
    deadline: int | None = None,
    carried: _State | None = None,
    query_time: int | None = None,
    cut: int | None = None,
) -> tuple[dict[Hashable, IntervalList], _State | None]:
    """Maximal intervals of one grounded simple fluent.

    ``points`` are ``(t, INIT|TERM, value)`` sorted by ``t``; they must all
    lie at or before ``query_time``.  A termination with value :data:`ANY`
    ends whichever value holds.  Initiating another value of a multi-valued
    fluent implicitly terminates the current one.

    Returns the intervals per value and the state at ``cut + 1`` (the value
    holding just after the next window's start, with its interval start and
    latest initiation) for carrying into the next window.
    """
    out: dict[Hashable, IntervalList] = {}
    cur = None if carried is None else _State(carried.value, carried.start, carried.last_init)
    snap: _State | None = None
    snapped = cut is None

    def close(end: int) -> None:
        out.setdefault(cur.value, []).append(Interval(cur.start, end))

    def expire(at: int) -> None:
        nonlocal cur
        if cur is not None and deadline is not None and cur.last_init + deadline < at:
            close(cur.last_init + deadline + 1)
            cur = None

    i, n = 0, len(points)
    while i < n:
        t = points[i][0]
        if not snapped and t > cut:
            expire(cut + 1)
            snap = None if cur is None else _State(cur.value, cur.start, cur.last_init)
            snapped = True
        expire(t)
        inits: list = []
        term_any = False
        terms: set = set()
        while i < n and points[i][0] == t:
            _, kind, value = points[i]
            if kind == INIT:
                inits.append(value)
            elif value is ANY:
                term_any = True
            else:
                terms.add(value)
            i += 1
        if cur is not None and (term_any or cur.value in terms):
            close(t + 1)
            cur = None
        if inits:
            value = inits[0] if len(inits) == 1 else min(inits, key=_rank(values))
            if cur is not None and cur.value == value:
                cur.last_init = t
                continue
            if cur is not None:
                close(t + 1)
            prev = out.get(value)
            if prev and prev[-1].end == t + 1:
                # terminated and re-initiated at t: one maximal interval
                cur = _State(value, prev.pop().start, t)
            else:
                cur = _State(value, t + 1, t)
    if not snapped:
        expire(cut + 1)
        snap = None if cur is None else _State(cur.value, cur.start, cur.last_init)
    if query_time is not None:
        expire(query_time + 1)
    if cur is not None:
        out.setdefault(cur.value, []).append(Interval(cur.start, OPEN))
    return out, snap


def _rank(values: Sequence[Hashable]) -> Callable[[Hashable], int]:
    order = {v: i for i, v in enumerate(values)}
    return lambda v: order.get(v, len(order))


def maximal_intervals(
    initiations: Iterable[int],
    terminations: Iterable[int] = (),
    deadline: int | None = None,
    query_time: int | None = None,
) -> IntervalList:
    """Intervals of a Boolean simple fluent from raw initiation/termination points."""
    pts = [(t, INIT, True) for t in initiations] + [(t, TERM, True) for t in terminations]
    pts.sort(key=lambda p: p[0])
    out, _ = sweep(pts, deadline=deadline, query_time=query_time)
    return out.get(True, [])


# -- evaluation -------------------------------------------------------------

Key = tuple  # (fluent name, args)


class EvalContext:
    """What rule effects see: atemporal facts and fluents evaluated so far."""

    def __init__(self, facts: Any, results: dict, window_start: int, query_time: int):
        self.facts = facts
        self.results = results
        self.window_start = window_start
        self.query_time = query_time
        self.by_name: dict[str, list[tuple]] = defaultdict(list)
        for name, args in results:
            self.by_name[name].append(args)

    def store(self, name: str, args: tuple, by_value: dict) -> None:
        key = (name, args)
        if key not in self.results:
            self.by_name[name].append(args)
        self.results[key] = by_value

    def holds_for(self, name: str, args: tuple, value: Hashable = True) -> IntervalList:
        return self.results.get((name, args), {}).get(value, [])

    def holds_at(self, name: str, args: tuple, value: Hashable, t: int) -> bool:
        by_value = self.results.get((name, args))
        if not by_value:
            return False
        lst = by_value.get(value)
        return bool(lst) and ia.holds_at(lst, t)


@dataclass
class Ack:
    accepted: int = 0
    late: int = 0


@dataclass
class WindowStats:
    query_time: int
    window_start: int
    input_events: int
    seconds: float


@dataclass
class _Evaluation:
    results: dict  # (name, args) -> {value: IntervalList}
    carry: dict  # carry keys -> _State | int
    input_events: int = 0


def _touches(args: tuple, entities: set) -> bool:
    for a in args:
        if a in entities:
            return True
    return False


class Engine:
    """Single-writer sliding-window evaluator of an :class:`EventDescription`."""

    def __init__(self, description: EventDescription, window: Window, facts: Any = None):
        self.description = description
        self.window = window
        self.facts = facts
        self._events: dict[str, list[InputEvent]] = defaultdict(list)
        self._unsorted: set[str] = set()
        self._inputs: dict[Key, dict[Hashable, IntervalList]] = {}
        self._carry: dict = {}
        self._current: _Evaluation | None = None
        self._dirty: set = set()
        self._entities: set | None = None
        self.late_events = 0
        self.stats: list[WindowStats] = []

    # -- intake -------------------------------------------------------------

    def assert_events(self, batch: Iterable[InputEvent]) -> Ack:
        ack = Ack()
        boundary = self.window.start
        q = self.window.query_time
        for ev in batch:
            self.description.check_event(ev)
            if ev.t <= boundary:
                ack.late += 1
                continue
            self._events[ev.name].append(ev)
            self._unsorted.add(ev.name)
            ack.accepted += 1
            if self._current is not None and ev.t <= q:
                self._dirty.update(ev.args)
        self.late_events += ack.late
        return ack

    def assert_intervals(self, fluent: FluentId, items: Sequence[Interval]) -> None:
        """Add intervals of a durative input fluent."""
        if not isinstance(self.description.fluents.get(fluent.name), InputFluent):
            raise KeyError(f"{fluent.name!r} is not a declared input fluent")
        items = list(items)
        ia.check(items)
        key = (fluent.name, fluent.args)
        by_value = self._inputs.setdefault(key, {})
        by_value[fluent.value] = ia.union_all([by_value.get(fluent.value, []), items])
        if self._current is not None and any(
            s <= self.window.query_time + 1 and e > self.window.start + 1 for s, e in items
        ):
            self._dirty.update(fluent.args)

    # -- queries ------------------------------------------------------------

    def _evaluation(self) -> _Evaluation:
        if self._current is None:
            self._current = self._compute(None)
        elif self._dirty:
            dirty, self._dirty = self._dirty, set()
            cur = self._current
            base = {k: v for k, v in cur.results.items() if not _touches(k[1], dirty)}
            partial = self._compute(dirty, base)
            cur.results = partial.results
            cur.carry = {k: v for k, v in cur.carry.items() if not _touches(k[1], dirty)}
            cur.carry.update(partial.carry)
            cur.input_events = self._compute_count()
        return self._current

    def _compute_count(self) -> int:
        w, q = self.window.start, self.window.query_time
        return sum(1 for lst in self._events.values() for e in lst if w < e.t <= q)

    def _declared(self, fluent: FluentId) -> None:
        if fluent.name not in self.description.fluents:
            raise KeyError(f"unknown fluent {fluent.name!r}")

    def holds_for(self, fluent: FluentId) -> IntervalList:
        self._declared(fluent)
        res = self._evaluation().results
        return list(res.get((fluent.name, fluent.args), {}).get(fluent.value, []))

    def holds_at(self, fluent: FluentId, t: int) -> bool:
        return ia.holds_at(self.holds_for(fluent), t)

    def start_end_events(self, fluent: FluentId) -> list[InputEvent]:
        self._declared(fluent)
        return start_end_events(fluent, self.holds_for(fluent))

    def evaluate_window(self) -> list[FluentAssertion]:
        """Recognise the output fluents at the current query time, then slide."""
        t0 = time.perf_counter()
        ev = self._evaluation()
        out = []
        outputs = set(self.description.outputs)
        for (name, args), by_value in sorted(ev.results.items(), key=_result_order):
            if name not in outputs:
                continue
            for value, lst in by_value.items():
                if lst:
                    out.append(FluentAssertion(FluentId(name, args, value), tuple(lst)))
        self.stats.append(
            WindowStats(
                self.window.query_time,
                self.window.start,
                ev.input_events,
                time.perf_counter() - t0,
            )
        )
        self._advance(ev)
        return out

    def _advance(self, ev: _Evaluation) -> None:
        self._carry = ev.carry
        self.window.query_time += self.window.slide
        boundary = self.window.start
        for name, lst in self._events.items():
            if name in self._unsorted:
                lst.sort(key=_by_time)
            self._events[name] = lst[bisect_right(lst, boundary, key=_by_time) :]
        self._unsorted.clear()
        for key in list(self._inputs):
            by_value = self._inputs[key]
            for value in list(by_value):
                kept = [iv for iv in by_value[value] if iv.end > boundary + 1]
                if kept:
                    by_value[value] = kept
                else:
                    del by_value[value]
            if not by_value:
                del self._inputs[key]
        self._current = None
        self._dirty.clear()

    # -- the evaluation proper ----------------------------------------------

    def _window_events(self, entities: set | None) -> dict[str, list[InputEvent]]:
        w, q = self.window.start, self.window.query_time
        out = {}
        for name, lst in self._events.items():
            if name in self._unsorted:
                lst.sort(key=_by_time)
                self._unsorted.discard(name)
            lo = bisect_right(lst, w, key=_by_time)
            hi = bisect_right(lst, q, key=_by_time)
            sel = lst[lo:hi]
            if entities is not None:
                sel = [e for e in sel if _touches(e.args, entities)]
            out[name] = sel
        return out

    def _compute(self, entities: set | None, base: dict | None = None) -> _Evaluation:
        """Evaluate all fluents, or only the groundings touching ``entities``
        (reading the other groundings from ``base``)."""
        w, q = self.window.start, self.window.query_time
        cut = q + self.window.slide - self.window.size
        events = self._window_events(entities)
        results: dict = dict(base or {})
        carry_out: dict = {}
        ctx = EvalContext(self.facts, results, w, q)
        self._entities = entities
        n_inputs = sum(len(v) for v in events.values())
        carry_in = self._carry
        if entities is not None:
            carry_in = {k: v for k, v in carry_in.items() if _touches(k[1], entities)}
        carried_by_name: dict[str, list] = defaultdict(list)
        for k, v in carry_in.items():
            carried_by_name[k[0]].append(k)

        for name in self.description.order:
            fdef = self.description.fluents[name]
            if isinstance(fdef, SimpleFluent):
                self._eval_simple(fdef, events, ctx, carry_in, carry_out, carried_by_name, cut)
            elif isinstance(fdef, StaticFluent):
                self._eval_static(fdef, ctx, carry_in, carry_out, cut, entities)
            else:
                n_inputs += self._eval_input(fdef, ctx, entities)
        return _Evaluation(results, carry_out, n_inputs)

    def _trigger_events(self, trigger: Trigger, events, ctx) -> list[InputEvent]:
        if isinstance(trigger, str):
            return events.get(trigger, [])
        kind, dep, value = trigger
        w, q = self.window.start, self.window.query_time
        entities = self._entities
        out = []
        for args in ctx.by_name.get(dep, ()):
            if entities is not None and not _touches(args, entities):
                continue
            lst = ctx.results[(dep, args)].get(value)
            if not lst:
                continue
            for start, end in lst:
                t = start if kind == "start" else end
                if w < t <= q:
                    out.append(InputEvent(kind, args, t, (dep, value)))
        return out

    def _eval_simple(self, fdef, events, ctx, carry_in, carry_out, carried_by_name, cut) -> None:
        points: dict[tuple, list] = defaultdict(list)
        for kind, rules in ((INIT, fdef.initiated), (TERM, fdef.terminated)):
            for rule in rules:
                effect = rule.effect
                triggered = self._trigger_events(rule.trigger, events, ctx)
                if rule.applies is not None:
                    ok: dict = {}
                    facts = self.facts
                    for ev in triggered:
                        a = ev.args
                        if a not in ok:
                            ok[a] = rule.applies(a, facts)
                    triggered = [ev for ev in triggered if ok[ev.args]]
                for ev in triggered:
                    produced = effect(ev, ctx)
                    if produced:
                        t = ev.t
                        for args, value in produced:
                            points[args].append((t, kind, value))
        name = fdef.name
        for key in carried_by_name.get(name, ()):
            points.setdefault(key[1], [])
        q = self.window.query_time
        entities = self._entities
        for args, pts in points.items():
            key = (name, args)
            if not pts and key not in carry_in:
                continue
            if entities is not None and not _touches(args, entities):
                continue
            pts.sort(key=_by_first)
            by_value, snap = sweep(
                pts,
                values=fdef.values,
                deadline=fdef.deadline,
                carried=carry_in.get(key),
                query_time=q,
                cut=cut,
            )
            if by_value:
                ctx.store(name, args, by_value)
            if snap is not None:
                carry_out[key] = snap

    def _eval_static(self, fdef, ctx, carry_in, carry_out, cut, entities) -> None:
        results = ctx.results
        lo = self.window.start + 1
        groundings = sorted(
            {args for src in fdef.groundings_from for args in ctx.by_name.get(src, ())},
            key=repr,
        )
        clipped: dict = {}

        def leaf(ref: Ref) -> IntervalList:
            k = (ref.name, ref.args, ref.value)
            got = clipped.get(k)
            if got is None:
                if ref.name not in self.description.fluents:
                    raise KeyError(f"{fdef.name} refers to unknown fluent {ref.name!r}")
                full = results.get((ref.name, ref.args), {}).get(ref.value, [])
                got = clipped[k] = ia.clip_from(full, lo) if full else []
            return got

        def extend(lst: IntervalList, carry_key) -> IntervalList:
            start = carry_in.get(carry_key)
            if start is not None and lst and lst[0].start == lo:
                lst = [Interval(start, lst[0].end), *lst[1:]]
            if lst:
                run = _run_containing(lst, cut + 1)
                if run is not None:
                    carry_out[carry_key] = run.start
            return lst

        def ev(node, args, path) -> IntervalList:
            if isinstance(node, Ref):
                return leaf(node)
            if isinstance(node, Union_):
                return ia.union_all([ev(c, args, path + (i,)) for i, c in enumerate(node.children)])
            if isinstance(node, Intersect):
                acc = ev(node.children[0], args, path + (0,))
                for i, c in enumerate(node.children[1:], 1):
                    if not acc:
                        return acc
                    acc = ia.intersect_all([acc, ev(c, args, path + (i,))])
                return acc
            if isinstance(node, Complement):
                base = ev(node.base, args, path + (0,))
                if not base:
                    return base
                subs = [ev(c, args, path + (i,)) for i, c in enumerate(node.subtrahends, 1)]
                return ia.relative_complement_all(base, subs)
            if isinstance(node, LongerThan):
                inner = ev(node.child, args, path + (0,))
                if not inner:
                    return inner
                full = extend(inner, (fdef.name, args, path))
                return ia.clip_from(ia.intervals_longer_than(full, node.min_duration), lo)
            raise TypeError(f"not a composition node: {node!r}")

        for args in groundings:
            if entities is not None and not _touches(args, entities):
                continue
            if fdef.guard is not None and not fdef.guard(args, self.facts):
                continue
            lst = ev(fdef.body(args, self.facts), args, ())
            if lst:
                lst = extend(lst, (fdef.name, args))
                ctx.store(fdef.name, args, {True: lst})

    def _eval_input(self, fdef, ctx, entities) -> int:
        lo = self.window.start + 1
        hi = self.window.query_time + 1
        n = 0
        for (name, args), by_value in self._inputs.items():
            if name != fdef.name:
                continue
            if entities is not None and not _touches(args, entities):
                continue
            got = {}
            for value, lst in by_value.items():
                sel = []
                for s, e in lst:
                    if e <= lo or s > hi:
                        continue
                    sel.append(Interval(s, OPEN if e > hi else e))
                if sel:
                    got[value] = sel
                    n += len(sel)
            if got:
                ctx.store(name, args, got)
        return n


def _run_containing(lst: IntervalList, t: int) -> Interval | None:
    i = bisect_right(lst, (t, OPEN)) - 1
    if i >= 0 and t < lst[i].end:
        return lst[i]
    return None


def _by_time(ev: InputEvent) -> int:
    return ev.t


def _by_first(p: tuple) -> int:
    return p[0]


def _result_order(item) -> tuple:
    (name, args), _ = item
    return (name, tuple(map(str, args)))


def start_end_events(fluent: FluentId, items: Sequence[Interval]) -> list[InputEvent]:
    """Built-in ``start``/``end`` events of a fluent's maximal intervals."""
    out = []
    for s, e in items:
        out.append(InputEvent("start", fluent.args, s, (fluent.name, fluent.value)))
        if e != OPEN:
            out.append(InputEvent("end", fluent.args, e, (fluent.name, fluent.value)))
    return out


# -- windowed runs ----------------------------------------------------------


class ActivityCollector:
    """Concatenates per-window outputs into one deduplicated recognition.

    Bounded intervals are final once reported; open intervals are provisional
    and only the latest window's open intervals are kept.
    """

    def __init__(self) -> None:
        self._closed: dict[FluentId, list[IntervalList]] = defaultdict(list)
        self._open: dict[FluentId, Interval] = {}
        self.last_query_time: int | None = None

    def add(self, assertions: Iterable[FluentAssertion], query_time: int) -> None:
        self._open = {}
        for a in assertions:
            closed = [iv for iv in a.intervals if iv.end != OPEN]
            if closed:
                self._closed[a.fluent].append(closed)
            if a.intervals[-1].end == OPEN:
                self._open[a.fluent] = a.intervals[-1]
        self.last_query_time = query_time

    def result(self) -> dict[FluentId, IntervalList]:
        out = {}
        for fid in set(self._closed) | set(self._open):
            parts = list(self._closed.get(fid, []))
            if fid in self._open:
                parts.append([self._open[fid]])
            merged = ia.union_all(parts)
            if merged:
                out[fid] = merged
        return out


def window_schedule(first: int, last: int, slide: int) -> list[int]:
    """Query times ``q_0 < q_1 < ...`` aligned to ``slide`` covering ``[first, last]``."""
    q = -(-first // slide) * slide
    times = [q]
    while q < last:
        q += slide
        times.append(q)
    return times


def run_windows(
    description: EventDescription,
    events: Sequence[InputEvent],
    inputs: Mapping[FluentId, IntervalList] | None = None,
    *,
    size: int,
    slide: int,
    facts: Any = None,
    first: int | None = None,
    last: int | None = None,
) -> tuple[dict[FluentId, IntervalList], Engine]:
    """Stream ``events`` through successive windows; return the collected output.

    Events are asserted as their time-point enters a window, so none is late.
    """
    inputs = dict(inputs or {})
    times = [e.t for e in events]
    for lst in inputs.values():
        times.extend(iv.start for iv in lst)
    if first is None:
        first = min(times, default=0)
    if last is None:
        last = max(times, default=first)
    schedule = window_schedule(first, last, slide)
    engine = Engine(description, Window(size, slide, schedule[0]), facts)
    ordered = sorted(events, key=_by_time)
    for fid, lst in inputs.items():
        engine.assert_intervals(fid, lst)
    collector = ActivityCollector()
    i = 0
    for q in schedule:
        j = bisect_right(ordered, q, lo=i, key=_by_time)
        engine.assert_events(ordered[i:j])
        i = j
        collector.add(engine.evaluate_window(), q)
    return collector.result(), engine


def run_batch(
    description: EventDescription,
    events: Sequence[InputEvent],
    inputs: Mapping[FluentId, IntervalList] | None = None,
    *,
    query_time: int,
    facts: Any = None,
    first: int | None = None,
) -> dict[FluentId, IntervalList]:
    """Evaluate everything in one window ending at ``query_time``."""
    times = [e.t for e in events] + [iv.start for lst in (inputs or {}).values() for iv in lst]
    if first is None:
        first = min(times, default=query_time)
    size = max(query_time - first + 1, 1)
    engine = Engine(description, Window(size, size, query_time), facts)
    for fid, lst in (inputs or {}).items():
        engine.assert_intervals(fid, lst)
    engine.assert_events(events)
    collector = ActivityCollector()
    collector.add(engine.evaluate_window(), query_time)
    return collector.result()
