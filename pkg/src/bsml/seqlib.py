"""Sequential list functions used by the parallel layers and their specs.

Functions never mutate their arguments; each returns a fresh list.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence, TypeVar

from .errors import require

A = TypeVar("A")
B = TypeVar("B")

__all__ = ["max2", "maximum", "nonempty", "map", "fold_left", "flatten", "from_to", "init", "nth"]


def max2(x: int, y: int) -> int:
    return x if x >= y else y


def nonempty(l: Sequence) -> bool:
    return len(l) > 0


def maximum(l: Sequence[int]) -> int:
    """Largest element of a non-empty list."""
    require(nonempty(l), "maximum is not defined on the empty list")
    best = l[0]
    for x in l[1:]:
        best = max2(best, x)
    return best


def nth(l: Sequence[A], i: int) -> A:
    require(0 <= i < len(l), f"index {i} outside a list of length {len(l)}")
    return l[i]


def map(f: Callable[[A], B], l: Iterable[A]) -> list[B]:  # noqa: A001
    return [f(x) for x in l]


def fold_left(op: Callable[[B, A], B], e: B, l: Iterable[A]) -> B:
    acc = e
    for x in l:
        acc = op(acc, x)
    return acc


def flatten(ll: Iterable[Iterable[A]]) -> list[A]:
    return [x for chunk in ll for x in chunk]


def init(n: int, f: Callable[[int], A]) -> list[A]:
    require(n >= 0, f"init expects a non-negative length, got {n}")
    return [f(i) for i in range(n)]


def from_to(lo: int, hi: int) -> list[int]:
    """``[lo, lo+1, ..., hi]``; empty when ``lo > hi``."""
    return init(max(hi - lo + 1, 0), lambda i: lo + i)
