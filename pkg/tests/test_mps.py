import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from bsml import Backend, ContractError
from bsml.mps import (
    NEUTRAL,
    MsPair,
    find_associativity_counterexample,
    find_neutrality_counterexample,
    inv,
    mps_algebra,
    mps_f,
    mps_op,
    mps_par,
    mps_seq,
    mps_spec,
    ms,
)
from bsml.skeletons import AlgebraSpec, Policy, distribute, from_chunks, reduce_par

PAPER_LIST = [1, 2, -1, 2, -1, 3, -4]
PROCS = (1, 2, 3, 4, 8)
int_lists = st.lists(st.integers(-20, 20), max_size=20)


def prefix_oracle(l):
    """Independent brute force: enumerate every prefix explicitly."""
    prefixes = [l[:k] for k in range(len(l) + 1)]
    best = None
    for q in prefixes:
        total = 0
        for x in q:
            total += x
        best = total if best is None or total > best else best
    return best


def test_mps_spec_examples():
    assert mps_spec([]) == 0
    assert mps_spec(PAPER_LIST) == 6
    assert mps_spec([-5, -1]) == 0


def test_ms_examples():
    assert ms([]) == (0, 0)
    assert ms(PAPER_LIST) == (6, sum(PAPER_LIST)) == (6, 2)
    for x in (-3, 0, 4):
        assert ms([x]) == (max(x, 0), x)


def test_mps_op_neutral_and_homomorphism_example():
    x = MsPair(3, -1)
    assert mps_op(NEUTRAL, x) == x == mps_op(x, NEUTRAL)
    # Both sides from the ms oracle.
    assert mps_op(ms([1, 2]), ms([-1, 2])) == ms([1, 2, -1, 2]) == (4, 4)


def test_mps_op_checked_mode():
    with pytest.raises(ContractError):
        mps_op(MsPair(-1, -1), NEUTRAL, checked=True)
    with pytest.raises(ContractError):
        mps_op(NEUTRAL, MsPair(1, 2), checked=True)
    assert mps_op(MsPair(1, 1), MsPair(2, -3), checked=True) == ms([1, 2, -5]) == (3, -2)


@pytest.mark.parametrize("x, expected", [(5, (5, 5)), (-3, (0, -3)), (0, (0, 0))])
def test_mps_f(x, expected):
    assert mps_f(x) == expected == ms([x])


def test_homomorphism_exhaustive_small():
    lists = [list(t) for n in range(5) for t in itertools.product(range(-2, 3), repeat=n)]
    for l1 in lists[:200]:
        for l2 in lists:
            assert ms(l1 + l2) == mps_op(ms(l1), ms(l2))


@given(int_lists, int_lists)
def test_homomorphism_random(l1, l2):
    assert ms(l1 + l2) == mps_op(ms(l1), ms(l2))


inv_pairs = st.tuples(st.integers(0, 30), st.integers(-30, 30)).map(lambda t: MsPair(t[0], min(t)))


@given(inv_pairs, inv_pairs, inv_pairs)
def test_algebra_on_invariant(x, y, z):
    assert inv(x) and inv(y) and inv(z)
    assert mps_op(mps_op(x, y), z) == mps_op(x, mps_op(y, z))
    assert mps_op(NEUTRAL, x) == x == mps_op(x, NEUTRAL)
    assert inv(mps_op(x, y))


@given(st.integers())
def test_f_satisfies_invariant(x):
    assert inv(mps_f(x))


@given(int_lists)
def test_spec_bounds(l):
    assert mps_spec(l) >= 0 and mps_spec(l) >= sum(l)
    assert mps_spec(l) == prefix_oracle(l)


def test_neutral_fails_outside_invariant():
    x = find_neutrality_counterexample(bound=2)
    assert x is not None and not inv(x)
    assert not (mps_op(NEUTRAL, x) == x == mps_op(x, NEUTRAL))


def test_counterexample_search_finds_planted_violation():
    def lopsided(a, b):
        # Associative everywhere except when the first argument has m < 0.
        return MsPair(max(a[0], a[1] + b[0]) if a[0] >= 0 else a[0] - b[0], a[1] + b[1])

    found = find_associativity_counterexample(lopsided, bound=1)
    assert found is not None
    x, y, z = found
    assert lopsided(lopsided(x, y), z) != lopsided(x, lopsided(y, z))
    assert not (inv(x) and inv(y) and inv(z))


def test_invariant_free_mps_algebra_is_rejected_deterministically():
    unguarded = AlgebraSpec(mps_op, NEUTRAL, samples=(MsPair(-1, -1),), name="mps_op")
    with pytest.raises(ContractError) as info:
        unguarded.validate()
    assert info.value.witness == MsPair(-1, -1)
    mps_algebra(samples=(MsPair(-1, -1), MsPair(3, 1))).validate()


def test_mps_seq_examples():
    assert mps_seq(PAPER_LIST) == 6
    assert mps_seq([]) == 0


@settings(max_examples=100)
@given(int_lists)
def test_mps_seq_matches_oracle(l):
    assert mps_seq(l) == prefix_oracle(l)


def test_mps_par_paper_example(machines, backend):
    m4 = machines(4, backend)
    dl = from_chunks(m4, [[1, 2], [-1, 2], [-1, 3], [-4]])
    with m4.recording() as recs:
        assert mps_par(dl) == 6
    assert len(recs) == 1
    assert mps_par(dl, checked=True) == 6
    assert mps_par(from_chunks(m4, [[]] * 4)) == 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PROCS), st.sampled_from(list(Backend)), int_lists, st.sampled_from(list(Policy)))
def test_mps_par_matches_oracle(machines, p, backend, l, policy):
    assert mps_par(distribute(machines(p, backend), l, policy)) == prefix_oracle(l)


def test_mps_par_checked_mode_catches_bad_input(machines):
    pairs = from_chunks(machines(2), [[MsPair(1, 1)], [MsPair(0, 5)]])
    with pytest.raises(ContractError):
        reduce_par(mps_algebra(), pairs, checked=True)


def test_broken_op_is_caught_by_seq_and_par(machines):
    def broken(a, b):
        return MsPair(max(a[0], b[0]), a[1] + b[1])

    algebra = mps_algebra(broken)
    rng = random.Random(3)
    mismatches = 0
    for _ in range(50):
        l = [rng.randint(-5, 5) for _ in range(rng.randint(0, 10))]
        if mps_seq(l, algebra) != mps_spec(l):
            mismatches += 1
            assert mps_par(distribute(machines(1), l), algebra) != mps_spec(l)
    assert mismatches > 0
