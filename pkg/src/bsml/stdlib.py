"""Standard library built on the four primitives.

Cost of each function in communication supersteps:

=================  ==========
replicate, parfun  0
list_of_par        1
bcast_direct       1
shift and variants 1
=================  ==========
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Generic, TypeVar

from . import seqlib
from .core import Machine, ParVector, apply, bsp_p, mkpar, proj, put
from .errors import Bcast, PreconditionError

T = TypeVar("T")

__all__ = [
    "ABSENT",
    "Present",
    "unwrap",
    "replicate",
    "parfun",
    "parfun2",
    "parfun3",
    "procs",
    "list_of_par",
    "bcast_direct",
    "shift",
    "shift_right",
    "shift_left",
]


class _Absent:
    """The empty message. Use the module-level ``ABSENT`` singleton."""

    _bsml_empty_message = True
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (_Absent, ())

    def __deepcopy__(self, memo):
        return self

    def __repr__(self):
        return "ABSENT"

    def __bool__(self):
        return False


ABSENT = _Absent()


@dataclass(frozen=True)
class Present(Generic[T]):
    value: T


def unwrap(opt):
    if isinstance(opt, Present):
        return opt.value
    raise PreconditionError(f"cannot unwrap {opt!r}")


def replicate(machine: Machine, x: T) -> ParVector[T]:
    return mkpar(machine, lambda _: x)


def parfun(f: Callable, v: ParVector) -> ParVector:
    return apply(replicate(v.machine, f), v)


def parfun2(f: Callable, v1: ParVector, v2: ParVector) -> ParVector:
    return apply(parfun(lambda x: lambda y: f(x, y), v1), v2)


def parfun3(f: Callable, v1: ParVector, v2: ParVector, v3: ParVector) -> ParVector:
    return apply(parfun2(lambda x, y: lambda z: f(x, y, z), v1, v2), v3)


def procs(machine: Machine) -> list[int]:
    """``[0, 1, ..., p-1]``"""
    return seqlib.from_to(0, bsp_p(machine) - 1)


def list_of_par(v: ParVector[T]) -> list[T]:
    return seqlib.map(proj(v), procs(v.machine))


def bcast_direct(root: int, v: ParVector[T]) -> ParVector[T]:
    """Every processor ends up with the value held by ``root``.

    Only ``root`` sends data; everybody else sends the empty message.
    Raises :class:`Bcast` when ``root`` is not in ``[0, p-1]``.
    """
    m = v.machine
    if not 0 <= root < bsp_p(m):
        raise Bcast(f"root {root} is not a processor of a {bsp_p(m)}-processor machine")

    def make_msg(pid):
        def with_value(value):
            return lambda dst: Present(value) if pid == root else ABSENT

        return with_value

    to_send = apply(mkpar(m, make_msg), v)
    received = put(to_send)
    optional_result = apply(received, replicate(m, root))
    return parfun(unwrap, optional_result)


def shift(offset: int, v: ParVector[T], default: Callable[[int], T] | None = None) -> ParVector[T]:
    """Move every component ``offset`` processors to the right.

    With ``default=None`` the shift wraps around, so processor ``i``
    receives the value of ``(i - offset) mod p``. Otherwise nothing wraps
    and a processor with no sender gets ``default(i)``.
    """
    m = v.machine
    p = bsp_p(m)
    wrap = default is None

    def target(src):
        dst = src + offset
        if wrap:
            return dst % p
        return dst if 0 <= dst < p else None

    def make_msg(src):
        dst = target(src)
        return lambda value: lambda d: Present(value) if d == dst else ABSENT

    received = put(apply(mkpar(m, make_msg), v))

    def pick(i):
        src = i - offset
        if wrap:
            src %= p
        elif not 0 <= src < p:
            return lambda _recv: default(i)
        return lambda recv: unwrap(recv(src))

    return apply(mkpar(m, pick), received)


def shift_right(v: ParVector[T], default: Callable[[int], T] | None = None) -> ParVector[T]:
    return shift(1, v, default)


def shift_left(v: ParVector[T], default: Callable[[int], T] | None = None) -> ParVector[T]:
    return shift(-1, v, default)
