import sys

import pytest
from hypothesis import given, strategies as st

from bsml import PreconditionError
from bsml.seqlib import flatten, fold_left, from_to, init, map, max2, maximum, nth

int_lists = st.lists(st.integers(-100, 100), max_size=30)


@pytest.mark.parametrize("x, y, expected", [(3, 5, 5), (4, 4, 4), (-2, -7, -2)])
def test_max2(x, y, expected):
    assert max2(x, y) == expected


@given(st.integers(), st.integers())
def test_max2_contract(x, y):
    r = max2(x, y)
    assert r >= x and r >= y and r in (x, y)


def test_maximum_examples():
    assert maximum([7]) == 7
    # Linear-scan oracle.
    best = None
    for x in [1, 5, 3]:
        best = x if best is None or x > best else best
    assert maximum([1, 5, 3]) == best == 5


def test_maximum_empty_is_precondition_error():
    with pytest.raises(PreconditionError):
        maximum([])


@given(int_lists.filter(bool))
def test_maximum_contract(l):
    r = maximum(l)
    assert all(r >= x for x in l) and r in l
    assert r == fold_left(max2, l[0], l[1:])


def test_map_examples():
    assert map(lambda x: x + 1, [0, 1]) == [1, 2]
    assert map(abs, []) == []
    l = [3, 1, 2]
    assert map(lambda x: x, l) == l
    assert map(lambda x: x, l) is not l


@given(int_lists, st.data())
def test_nth_map(l, data):
    if not l:
        return
    i = data.draw(st.integers(0, len(l) - 1))
    assert nth(map(lambda x: 2 * x - 1, l), i) == 2 * nth(l, i) - 1


def test_nth_outside_is_error():
    with pytest.raises(PreconditionError):
        nth([1], 1)


def test_fold_left_examples():
    assert fold_left(lambda a, x: a + x, 0, [1, 2, 3]) == 6
    assert fold_left(lambda a, x: a + x, "e", []) == "e"
    assert fold_left(max2, -sys.maxsize - 1, [1, 5, 3]) == 5
    assert fold_left(lambda a, x: f"({a}{x})", "", "abc") == "(((a)b)c)"


@given(int_lists, int_lists)
def test_fold_left_concatenation(l1, l2):
    op = lambda a, x: 3 * a - x  # noqa: E731  (neither associative nor commutative)
    assert fold_left(op, 1, l1 + l2) == fold_left(op, fold_left(op, 1, l1), l2)


def test_flatten_examples():
    assert flatten([[1, 2], [3]]) == [1, 2, 3]
    assert flatten([[], [], []]) == []


@given(int_lists)
def test_flatten_singleton_unit(l):
    assert flatten(map(lambda x: [x], l)) == l


@given(st.lists(int_lists, max_size=6))
def test_flatten_map(ll):
    f = lambda x: x * x - 3  # noqa: E731
    assert map(f, flatten(ll)) == flatten(map(lambda chunk: map(f, chunk), ll))


def test_from_to_and_init():
    assert from_to(0, 3) == [0, 1, 2, 3]
    assert from_to(2, 1) == []
    assert init(3, lambda i: i * i) == [0, 1, 4]
    assert init(0, lambda i: i) == []
    with pytest.raises(PreconditionError):
        init(-1, lambda i: i)


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_from_to_matches_range(lo, hi):
    assert from_to(lo, hi) == list(range(lo, hi + 1))
