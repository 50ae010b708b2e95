"""Lists of maximal, half-open intervals over integer time-points.

An interval ``[start, end)`` holds at every ``t`` with ``start <= t < end``.
``end`` may be :data:`OPEN` for a fluent that has not been terminated yet;
only the last interval of a list may be open.

Interval lists are plain Python lists of :class:`Interval`, kept sorted,
disjoint and non-adjacent (adjacent pieces are coalesced), so every item is
a *maximal* interval.  All functions here are pure.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from itertools import chain
from typing import Iterable, List, NamedTuple, Sequence, Union

OPEN = math.inf
"""End marker of an interval that is still holding at the query time."""

TimePoint = int
End = Union[int, float]


class Interval(NamedTuple):
    start: TimePoint
    end: End

    @property
    def is_open(self) -> bool:
        return self.end == OPEN

    def duration(self) -> End:
        return self.end - self.start

    def __contains__(self, t: object) -> bool:
        return self.start <= t < self.end  # type: ignore[operator]


IntervalList = List[Interval]


class IntervalError(ValueError):
    """An interval list violates the ordering/disjointness invariants."""


def check(items: Sequence[Interval]) -> None:
    """Raise :class:`IntervalError` unless ``items`` is a valid maximal list."""
    prev_end: End | None = None
    for i, (start, end) in enumerate(items):
        if not start < end:
            raise IntervalError(f"empty or reversed interval {start, end}")
        if end == OPEN and i != len(items) - 1:
            raise IntervalError("only the last interval may be open")
        if prev_end is not None and not prev_end < start:
            raise IntervalError(f"intervals overlap or touch at {start}")
        prev_end = end


def normalize(pairs: Iterable[tuple[int, End]]) -> IntervalList:
    """Build a maximal interval list from arbitrary (possibly overlapping) pairs.

    Empty pairs (``start >= end``) are dropped.
    """
    out: IntervalList = []
    for start, end in sorted(p for p in pairs if p[0] < p[1]):
        if out and start <= out[-1].end:
            if end > out[-1].end:
                out[-1] = Interval(out[-1].start, end)
        else:
            out.append(Interval(start, end))
    return out


def holds_at(items: Sequence[Interval], t: int) -> bool:
    i = bisect_right(items, (t, OPEN)) - 1
    return i >= 0 and t < items[i].end


def union_all(lists: Sequence[Sequence[Interval]]) -> IntervalList:
    non_empty = [lst for lst in lists if lst]
    if not non_empty:
        return []
    if len(non_empty) == 1:
        return list(non_empty[0])
    return normalize(chain.from_iterable(non_empty))


def _intersect2(a: Sequence[Interval], b: Sequence[Interval]) -> IntervalList:
    out: IntervalList = []
    i = j = 0
    while i < len(a) and j < len(b):
        start = max(a[i].start, b[j].start)
        end = min(a[i].end, b[j].end)
        if start < end:
            out.append(Interval(start, end))
        if a[i].end < b[j].end:
            i += 1
        else:
            j += 1
    return out


def intersect_all(lists: Sequence[Sequence[Interval]]) -> IntervalList:
    """Points holding in every list.  An empty sequence is a caller bug."""
    if not lists:
        raise ValueError("intersect_all needs at least one interval list")
    acc = list(lists[0])
    for other in lists[1:]:
        if not acc:
            break
        acc = _intersect2(acc, other)
    return acc


def relative_complement_all(
    base: Sequence[Interval], subtrahends: Sequence[Sequence[Interval]]
) -> IntervalList:
    """Points of ``base`` that hold in none of ``subtrahends``."""
    if not base:
        return []
    cut = union_all(subtrahends)
    if not cut:
        return list(base)
    out: IntervalList = []
    j = 0
    for start, end in base:
        while j < len(cut) and cut[j].end <= start:
            j += 1
        k = j
        cur = start
        while k < len(cut) and cut[k].start < end:
            if cut[k].start > cur:
                out.append(Interval(cur, cut[k].start))
            cur = max(cur, cut[k].end)
            if cur >= end:
                break
            k += 1
        if cur < end:
            out.append(Interval(cur, end))
    return out


def intervals_longer_than(items: Sequence[Interval], min_duration: float) -> IntervalList:
    """Keep intervals strictly longer than ``min_duration``; open ones always stay."""
    if min_duration < 0:
        raise ValueError("min_duration must be non-negative")
    return [iv for iv in items if iv.end - iv.start > min_duration]


def clip_from(items: Sequence[Interval], lo: int) -> IntervalList:
    """Restrict to points ``t >= lo``."""
    out: IntervalList = []
    for start, end in items:
        if end <= lo:
            continue
        out.append(Interval(lo, end) if start < lo else Interval(start, end))
    return out


def close_open(items: Sequence[Interval], end: int) -> IntervalList:
    """Replace an open end with ``end`` (dropping the interval if it becomes empty)."""
    if not items or items[-1].end != OPEN:
        return list(items)
    last = items[-1]
    head = list(items[:-1])
    if last.start < end:
        head.append(Interval(last.start, end))
    return head


def total_duration(items: Iterable[Interval]) -> End:
    return sum(end - start for start, end in items)
