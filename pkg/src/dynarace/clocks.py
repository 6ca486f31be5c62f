"""Vector clock algebra: the happens-before partial order and concurrency.

Clocks are plain tuples of nonnegative integers, one entry per component
of the model, so they are immutable and hashable.
"""

from __future__ import annotations

from .domains import DynaraceError

VectorClock = tuple


class LengthMismatch(DynaraceError):
    """Compared clocks have different lengths."""


def _check_lengths(v: VectorClock, w: VectorClock) -> None:
    if len(v) != len(w):
        raise LengthMismatch(f"clock lengths differ: {len(v)} vs {len(w)}")


def clock_leq(v: VectorClock, w: VectorClock) -> bool:
    """Pointwise less-or-equal (happens-before-or-equal)."""
    _check_lengths(v, w)
    return all(a <= b for a, b in zip(v, w))


def clocks_concurrent(v: VectorClock, w: VectorClock) -> bool:
    """True iff the clocks are incomparable, witnessing concurrency."""
    return not clock_leq(v, w) and not clock_leq(w, v)


def clock_bump(v: VectorClock, index: int) -> VectorClock:
    """Increment one entry by exactly 1."""
    return v[:index] + (v[index] + 1,) + v[index + 1 :]


def clock_max(v: VectorClock, w: VectorClock) -> VectorClock:
    """Pointwise maximum (receiver-side merge)."""
    _check_lengths(v, w)
    return tuple(max(a, b) for a, b in zip(v, w))


def first_concurrent_pair(clocks) -> tuple | None:
    """Lexicographically smallest (i, j), i < j, with incomparable clocks."""
    n = len(clocks)
    for i in range(n):
        for j in range(i + 1, n):
            if clocks_concurrent(clocks[i], clocks[j]):
                return (i, j)
    return None
