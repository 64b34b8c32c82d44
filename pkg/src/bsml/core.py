"""BSP machine, parallel vectors and the four primitives.

A :class:`Machine` fixes the number of processors ``p`` for its whole
lifetime. Parallel vectors are created with :func:`mkpar`, combined
pointwise with :func:`apply`, and turned back into global values with the
collective operations :func:`proj` and :func:`put`.

Two runtimes sit behind the same API:

* ``Backend.SEQUENTIAL`` evaluates every processor in turn on the calling
  thread. It is the reference semantics.
* ``Backend.CONCURRENT`` owns one worker thread per processor. Local
  primitives run on each worker with no synchronisation; collective ones
  deposit messages into per-destination mailboxes, wait on a barrier, and
  then read their own mailbox.

Every collective operation appends one :class:`SuperstepRecord` to the
machine trace, whatever the backend.
"""

from __future__ import annotations

import collections
import copy
import enum
import operator
import queue
import threading
from dataclasses import dataclass
from typing import Any, Callable, Generic, Iterator, TypeVar
from contextlib import contextmanager

from .errors import (
    CommunicationError,
    ConfigError,
    DomainError,
    MachineMismatchError,
    NestingError,
)

T = TypeVar("T")

__all__ = [
    "Backend",
    "Machine",
    "ParVector",
    "ProcFunction",
    "SuperstepRecord",
    "new_machine",
    "bsp_p",
    "mkpar",
    "apply",
    "proj",
    "put",
    "is_empty_message",
]


class Backend(enum.Enum):
    SEQUENTIAL = "seq"
    CONCURRENT = "threads"


@dataclass(frozen=True)
class SuperstepRecord:
    """One communication superstep.

    ``messages[src][dst]`` is 1 when ``src`` sent a non-empty message to
    ``dst`` and 0 otherwise.
    """

    index: int
    kind: str
    messages: tuple[tuple[int, ...], ...]

    @property
    def total(self) -> int:
        return sum(map(sum, self.messages))

    def as_dict(self) -> dict:
        return {"index": self.index, "kind": self.kind, "messages": [list(r) for r in self.messages]}


def is_empty_message(msg) -> bool:
    """``None`` and the stdlib ``ABSENT`` value travel as empty messages."""
    return msg is None or getattr(msg, "_bsml_empty_message", False)


def _check_pid(i, p) -> int:
    try:
        i = operator.index(i)
    except TypeError:
        raise DomainError(f"processor identifier must be an integer, got {i!r}") from None
    if not 0 <= i < p:
        raise DomainError(f"processor identifier {i} outside [0, {p - 1}]")
    return i


class ProcFunction:
    """Function defined only on processor identifiers ``[0, p-1]``.

    Results of :func:`proj` and the received functions produced by
    :func:`put` are instances of this class. Calling one outside its
    domain raises :class:`DomainError`.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        self._values = tuple(values)

    def __call__(self, i):
        return self._values[_check_pid(i, len(self._values))]

    def __eq__(self, other):
        if not isinstance(other, ProcFunction):
            return NotImplemented
        return self._values == other._values

    def __hash__(self):
        return hash(self._values)

    def __repr__(self):
        return f"ProcFunction(p={len(self._values)})"


_ATOMIC = (int, float, complex, str, bytes, bool, type(None))


def _transmit(msg, src, dst):
    """Copy of ``msg`` as seen by ``dst``: processors never share mutable data."""
    if src == dst or type(msg) in _ATOMIC:
        return msg
    try:
        return copy.deepcopy(msg)
    except Exception as exc:
        raise CommunicationError(f"message from {src} to {dst} cannot be sent: {exc}") from exc


class _SequentialRuntime:
    def __init__(self, p, copy_messages=True):
        self.p = p
        self.copy_messages = copy_messages

    def local(self, fn):
        return [fn(i) for i in range(self.p)]

    def exchange(self, outgoing):
        p = self.p
        out = [outgoing(src) for src in range(p)]
        if not self.copy_messages:
            return [[out[src][dst] for src in range(p)] for dst in range(p)]
        return [[_transmit(out[src][dst], src, dst) for src in range(p)] for dst in range(p)]

    def close(self):
        pass


_worker_state = threading.local()


class _ThreadRuntime:
    """Persistent pool of ``p`` workers executing SPMD jobs."""

    def __init__(self, p, copy_messages=True):
        self.p = p
        self.copy_messages = copy_messages
        self._barrier = threading.Barrier(p)
        self._inboxes = [queue.SimpleQueue() for _ in range(p)]
        self._done = queue.SimpleQueue()
        self._lock = threading.Lock()
        self._closed = False
        self._threads = [
            threading.Thread(target=self._loop, args=(pid,), name=f"bsp-worker-{pid}", daemon=True)
            for pid in range(p)
        ]
        for t in self._threads:
            t.start()

    def _loop(self, pid):
        _worker_state.runtime = self
        while True:
            job = self._inboxes[pid].get()
            if job is None:
                return
            try:
                self._done.put((pid, True, job(pid)))
            except BaseException as exc:  # noqa: BLE001 - re-raised on the caller thread
                self._barrier.abort()
                self._done.put((pid, False, exc))

    def _run(self, job):
        if getattr(_worker_state, "runtime", None) is self:
            raise NestingError("primitives cannot be called from inside a worker of the same machine")
        with self._lock:
            if self._closed:
                raise ConfigError("machine has been closed")
            for box in self._inboxes:
                box.put(job)
            results = [None] * self.p
            failures = {}
            for _ in range(self.p):
                pid, ok, value = self._done.get()
                if ok:
                    results[pid] = value
                else:
                    failures[pid] = value
            if self._barrier.broken:
                self._barrier.reset()
        if failures:
            # Prefer the root cause over the BrokenBarrierError it induced elsewhere.
            primary = [e for _, e in sorted(failures.items()) if not isinstance(e, threading.BrokenBarrierError)]
            raise (primary or [failures[min(failures)]])[0]
        return results

    def local(self, fn):
        return self._run(fn)

    def exchange(self, outgoing):
        p = self.p
        mailbox = [[None] * p for _ in range(p)]

        def step(pid):
            out = outgoing(pid)
            for dst in range(p):
                mailbox[dst][pid] = _transmit(out[dst], pid, dst) if self.copy_messages else out[dst]
            self._barrier.wait()
            return list(mailbox[pid])

        return self._run(step)

    def close(self):
        with self._lock:
            if self._closed:
                return
            self._closed = True
            for box in self._inboxes:
                box.put(None)
        for t in self._threads:
            t.join()


class Machine:
    """A BSP machine with a fixed number of processors.

    Use as a context manager (or call :meth:`close`) to stop the worker
    threads of a concurrent machine.
    """

    def __init__(
        self,
        p: int,
        backend: Backend = Backend.SEQUENTIAL,
        *,
        copy_messages: bool = True,
        trace_limit: int | None = 10_000,
    ):
        if isinstance(p, bool) or not isinstance(p, int):
            raise ConfigError(f"number of processors must be an integer, got {p!r}")
        if p < 1:
            raise ConfigError(f"number of processors must be positive, got {p}")
        backend = Backend(backend)
        self._p = p
        self.backend = backend
        # Only the most recent ``trace_limit`` records are kept; hooks see all of them.
        self.trace: collections.deque[SuperstepRecord] = collections.deque(maxlen=trace_limit)
        self._supersteps = 0
        self._hooks: list[Callable[[SuperstepRecord], Any]] = []
        self._trace_lock = threading.Lock()
        if backend is Backend.SEQUENTIAL:
            self._runtime = _SequentialRuntime(p, copy_messages=copy_messages)
        else:
            self._runtime = _ThreadRuntime(p, copy_messages=copy_messages)

    @property
    def p(self) -> int:
        return self._p

    def proc_id(self, i) -> int:
        """Validate ``i`` as a processor identifier of this machine."""
        return _check_pid(i, self._p)

    @property
    def superstep_count(self) -> int:
        return self._supersteps

    def add_hook(self, hook):
        self._hooks.append(hook)

    def remove_hook(self, hook):
        self._hooks.remove(hook)

    @contextmanager
    def recording(self) -> Iterator[list[SuperstepRecord]]:
        """Collect the superstep records emitted inside the block."""
        records: list[SuperstepRecord] = []
        self.add_hook(records.append)
        try:
            yield records
        finally:
            self.remove_hook(records.append)

    def _record(self, kind, inboxes):
        p = self._p
        counts = tuple(
            tuple(0 if is_empty_message(inboxes[dst][src]) else 1 for dst in range(p)) for src in range(p)
        )
        with self._trace_lock:
            rec = SuperstepRecord(self._supersteps, kind, counts)
            self._supersteps += 1
            self.trace.append(rec)
        for hook in list(self._hooks):
            hook(rec)
        return rec

    def close(self):
        self._runtime.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def __repr__(self):
        return f"Machine(p={self._p}, backend={self.backend.value})"


class ParVector(Generic[T]):
    """Immutable vector holding one value per processor.

    The held values are deliberately not reachable through the public
    surface; programs observe them with :func:`proj` or :func:`put`, and
    tests with :func:`bsml.testing.get`. Equality is extensional.
    """

    __slots__ = ("_machine", "_values")

    def __init__(self, machine: Machine, values):
        values = tuple(values)
        if len(values) != machine.p:
            raise ConfigError(f"vector of extent {len(values)} on a machine with p={machine.p}")
        object.__setattr__(self, "_machine", machine)
        object.__setattr__(self, "_values", values)

    def __setattr__(self, name, value):
        raise AttributeError("parallel vectors are immutable")

    @property
    def machine(self) -> Machine:
        return self._machine

    def __len__(self):
        return self._machine.p

    def __eq__(self, other):
        if not isinstance(other, ParVector):
            return NotImplemented
        return self._machine.p == other._machine.p and self._values == other._values

    def __hash__(self):
        return hash((self._machine.p, self._values))

    def __repr__(self):
        return f"<ParVector p={self._machine.p}>"


def new_machine(p: int, backend=Backend.SEQUENTIAL, **kwargs) -> Machine:
    return Machine(p, backend, **kwargs)


def bsp_p(machine: Machine) -> int:
    return machine.p


def mkpar(machine: Machine, f: Callable[[int], T]) -> ParVector[T]:
    """Vector whose component at processor ``i`` is ``f(i)``."""
    return ParVector(machine, machine._runtime.local(f))


def _same_machine(*vectors):
    m = vectors[0]._machine
    for v in vectors[1:]:
        if v._machine is not m:
            raise MachineMismatchError("parallel vectors belong to different machines")
    return m


def apply(fv: ParVector, vv: ParVector) -> ParVector:
    """Pointwise application: component ``i`` is ``fv[i](vv[i])``."""
    m = _same_machine(fv, vv)
    fs, xs = fv._values, vv._values
    return ParVector(m, m._runtime.local(lambda i: fs[i](xs[i])))


def proj(v: ParVector[T]) -> ProcFunction:
    """Collective conversion of a vector into a function on ``[0, p-1]``.

    Costs one superstep: every processor sends its value to every other.
    """
    m = v._machine
    xs = v._values
    p = m.p
    inboxes = m._runtime.exchange(lambda src: [xs[src]] * p)
    m._record("proj", inboxes)
    return ProcFunction(inboxes[0])


def put(tosend: ParVector) -> ParVector[ProcFunction]:
    """Total exchange.

    ``tosend`` holds, at each source processor, a function from destination
    identifiers to messages. In the result, the function held by ``dst``
    maps each ``src`` to the message ``src`` addressed to ``dst``.
    ``None`` and ``ABSENT`` messages are delivered but count as empty in
    the trace.
    """
    m = tosend._machine
    fs = tosend._values
    p = m.p
    inboxes = m._runtime.exchange(lambda src: [fs[src](dst) for dst in range(p)])
    m._record("put", inboxes)
    return ParVector(m, [ProcFunction(row) for row in inboxes])
