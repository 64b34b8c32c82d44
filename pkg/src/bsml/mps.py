"""Maximum prefix sum: brute-force specification, sequential and parallel versions.

The maximum prefix sum of a list is the largest sum of any of its
prefixes, the empty prefix included, so it is never negative. It is not a
list homomorphism by itself, but the pair (maximum prefix sum, sum) is:
``ms(l1 + l2) == mps_op(ms(l1), ms(l2))``. Both implementations are thus
a map of :func:`mps_f` followed by a reduction with :func:`mps_op`.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple, Sequence

from . import seqlib
from .errors import ContractError
from .skeletons import AlgebraSpec, DistList, map_par, reduce_par

__all__ = [
    "MsPair",
    "NEUTRAL",
    "inv",
    "mps_spec",
    "ms",
    "mps_op",
    "mps_f",
    "mps_algebra",
    "mps_seq",
    "mps_par",
    "find_associativity_counterexample",
    "find_neutrality_counterexample",
]


class MsPair(NamedTuple):
    m: int
    s: int


NEUTRAL = MsPair(0, 0)


def inv(x) -> bool:
    m, s = x
    return m >= 0 and s <= m


def mps_spec(l: Sequence[int]) -> int:
    """Maximum over every prefix ``l[:k]``, ``0 <= k <= len(l)``, of its sum."""
    return max(sum(l[:k]) for k in range(len(l) + 1))


def ms(l: Sequence[int]) -> MsPair:
    return MsPair(mps_spec(l), sum(l))


def mps_op(a, b, *, checked: bool = False) -> MsPair:
    if checked:
        for x in (a, b):
            if not inv(x):
                raise ContractError(f"mps_op argument {tuple(x)!r} violates m >= 0 and s <= m", x)
    m1, s1 = a
    m2, s2 = b
    return MsPair(max(m1, s1 + m2), s1 + s2)


def mps_f(x: int) -> MsPair:
    return MsPair(max(x, 0), x)


def mps_algebra(op=mps_op, **kwargs) -> AlgebraSpec:
    return AlgebraSpec(op, NEUTRAL, inv, name=getattr(op, "__name__", "mps_op"), **kwargs)


_DEFAULT = mps_algebra()


def mps_seq(l: Sequence[int], algebra: AlgebraSpec | None = None) -> int:
    algebra = algebra or _DEFAULT
    return seqlib.fold_left(algebra.op, algebra.e, seqlib.map(mps_f, l))[0]


def mps_par(dl: DistList, algebra: AlgebraSpec | None = None, *, checked: bool = False) -> int:
    algebra = algebra or _DEFAULT
    return reduce_par(algebra, map_par(mps_f, dl), checked=checked)[0]


def _pairs(bound: int, pred):
    rng = range(-bound, bound + 1)
    return [MsPair(m, s) for m, s in itertools.product(rng, rng) if pred((m, s))]


def find_associativity_counterexample(op=mps_op, bound: int = 3, outside_invariant: bool = True):
    """Brute-force search for ``x, y, z`` with ``op(op(x, y), z) != op(x, op(y, z))``.

    Components range over ``[-bound, bound]``. With ``outside_invariant``
    at least one of the three pairs must violate :func:`inv`.
    Returns the first triple found, or ``None``.
    """
    everything = _pairs(bound, lambda _: True)
    for x, y, z in itertools.product(everything, repeat=3):
        if outside_invariant and inv(x) and inv(y) and inv(z):
            continue
        if op(op(x, y), z) != op(x, op(y, z)):
            return (x, y, z)
    return None


def find_neutrality_counterexample(op=mps_op, bound: int = 3):
    """First pair ``x`` in the box for which ``NEUTRAL`` is not a two-sided unit."""
    for x in _pairs(bound, lambda _: True):
        if not (op(NEUTRAL, x) == x == op(x, NEUTRAL)):
            return x
    return None
