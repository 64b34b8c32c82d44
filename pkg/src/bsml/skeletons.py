"""Map and reduce over distributed lists.

A distributed list is a ``ParVector`` of lists: each processor holds a
local chunk, and the logical list is the concatenation of the chunks in
processor order (see :func:`to_list`).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Generic, Iterable, Sequence, TypeVar

from . import seqlib
from .core import Machine, ParVector, mkpar
from .errors import ContractError, PreconditionError
from .stdlib import list_of_par, parfun

T = TypeVar("T")
A = TypeVar("A")
B = TypeVar("B")

DistList = ParVector  # ParVector[list[T]]

__all__ = [
    "AlgebraSpec",
    "DistList",
    "Explicit",
    "Policy",
    "distribute",
    "from_chunks",
    "map_par",
    "reduce_par",
    "to_list",
]


def _always(_x) -> bool:
    return True


@dataclass(frozen=True)
class AlgebraSpec(Generic[T]):
    """Binary operation with a neutral element, valid on values satisfying ``inv``.

    ``samples`` are extra values fed to the law checks performed by
    :meth:`validate`; only those satisfying ``inv`` are used.
    """

    op: Callable[[T, T], T]
    e: T
    inv: Callable[[T], bool] = _always
    samples: tuple = field(default=(), compare=False)
    name: str = "op"

    def associativity_violation(self, values: Iterable[T]):
        vs = [x for x in values if self.inv(x)]
        op = self.op
        for x, y, z in itertools.product(vs, repeat=3):
            if op(op(x, y), z) != op(x, op(y, z)):
                return (x, y, z)
        return None

    def neutrality_violation(self, values: Iterable[T]):
        op, e = self.op, self.e
        for x in values:
            if self.inv(x) and not (op(e, x) == x == op(x, e)):
                return x
        return None

    def preservation_violation(self, values: Iterable[T]):
        vs = [x for x in values if self.inv(x)]
        for x, y in itertools.product(vs, repeat=2):
            if not self.inv(self.op(x, y)):
                return (x, y)
        return None

    def satisfies(self, values: Iterable[T]) -> bool:
        return all(self.inv(x) for x in values)

    def validate(self, values: Iterable[T] = (), *, include_samples: bool = True):
        """Check every law on ``values`` (plus ``samples``); raise on the first violation."""
        vs = (list(self.samples) if include_samples else []) + list(values)
        if not self.inv(self.e):
            raise ContractError(f"{self.name}: neutral element violates the invariant", self.e)
        vs.append(self.e)
        checks = (
            ("neutral", self.neutrality_violation),
            ("preserves", self.preservation_violation),
            ("associative", self.associativity_violation),
        )
        for law, check in checks:
            witness = check(vs)
            if witness is not None:
                raise ContractError(f"{self.name}: law '{law}' fails on {witness!r}", witness)


class Policy(enum.Enum):
    """How :func:`distribute` cuts a list into contiguous chunks.

    ``BLOCK`` gives the ``n mod p`` first processors ``ceil(n/p)``
    elements and the others ``floor(n/p)``. ``ROUND_ROBIN`` deals element
    counts round-robin from the last processor down, so the larger chunks
    sit on the high ranks.
    """

    BLOCK = "block"
    ROUND_ROBIN = "roundrobin"


@dataclass(frozen=True)
class Explicit:
    chunks: tuple

    def __init__(self, chunks):
        object.__setattr__(self, "chunks", tuple(tuple(c) for c in chunks))


def _chunk_sizes(n: int, p: int, policy: Policy) -> list[int]:
    q, r = divmod(n, p)
    sizes = [q + 1 if i < r else q for i in range(p)]
    if policy is Policy.ROUND_ROBIN:
        sizes.reverse()
    return sizes


def from_chunks(machine: Machine, chunks: Sequence[Sequence[T]]) -> DistList:
    if len(chunks) != machine.p:
        raise PreconditionError(f"{len(chunks)} chunks for a {machine.p}-processor machine")
    frozen = [list(c) for c in chunks]
    return mkpar(machine, lambda i: list(frozen[i]))


def distribute(machine: Machine, l: Sequence[T], policy: Policy | Explicit | str = Policy.BLOCK) -> DistList:
    """Cut ``l`` into ``p`` contiguous chunks so that ``to_list`` gives ``l`` back."""
    l = list(l)
    if isinstance(policy, Explicit):
        if seqlib.flatten(policy.chunks) != l:
            raise PreconditionError("explicit chunks do not concatenate to the input list")
        return from_chunks(machine, policy.chunks)
    sizes = _chunk_sizes(len(l), machine.p, Policy(policy))
    bounds = [0, *itertools.accumulate(sizes)]
    chunks = [l[bounds[i] : bounds[i + 1]] for i in range(machine.p)]
    return mkpar(machine, lambda i: list(chunks[i]))


def to_list(dl: DistList) -> list:
    return seqlib.flatten(list_of_par(dl))


def map_par(f: Callable[[A], B], dl: DistList) -> DistList:
    """Apply ``f`` to every element, locally on each processor."""
    return parfun(lambda chunk: seqlib.map(f, chunk), dl)


def _check_chunk(spec: AlgebraSpec, chunk):
    for x in chunk:
        if not spec.inv(x):
            raise ContractError(f"{spec.name}: element {x!r} violates the invariant", x)
    spec.validate(chunk[:8], include_samples=False)
    return chunk


def reduce_par(spec: AlgebraSpec[T], dl: DistList, *, checked: bool = False) -> T:
    """``fold_left(op, e, to_list(dl))`` computed as local folds then one exchange.

    Partial results are combined in processor order, so only associativity
    of ``op`` on invariant-satisfying values is required. With
    ``checked=True`` the invariant is verified on every element and the
    algebra laws on a bounded sample before reducing.
    """
    op, e = spec.op, spec.e
    if checked:
        spec.validate()
        dl = parfun(lambda chunk: _check_chunk(spec, chunk), dl)
    partial = parfun(lambda chunk: seqlib.fold_left(op, e, chunk), dl)
    return seqlib.fold_left(op, e, list_of_par(partial))
