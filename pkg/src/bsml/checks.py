"""Property suites runnable outside pytest (``bsml check``).

Each suite is a list of :class:`Property`; every property draws its
inputs from a Hypothesis strategy and raises ``AssertionError`` on a
counterexample. :func:`run_suite` drives them with a fixed seed so a
failure is reproducible, and reports the shrunk witness.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from typing import Callable

from hypothesis import HealthCheck, given, seed as hseed, settings, strategies as st
from hypothesis.reporting import with_reporter

from . import mps, seqlib
from .core import Backend, Machine, apply, mkpar, proj, put
from .skeletons import AlgebraSpec, Policy, distribute, map_par, reduce_par, to_list
from .stdlib import bcast_direct, list_of_par, parfun, parfun2, replicate, shift
from .testing import get, values

PROCS = (1, 2, 3, 4, 8)

ints = st.integers(-1000, 1000)
small_lists = st.lists(st.integers(-50, 50), max_size=40)


@dataclass
class Property:
    name: str
    strategy: st.SearchStrategy
    check: Callable


class _Machines:
    """Machines shared by all properties of one run, closed at the end."""

    def __init__(self, backend):
        self.backend = backend
        self._cache: dict = {}

    def __call__(self, p, backend=None):
        key = (p, backend or self.backend)
        if key not in self._cache:
            self._cache[key] = Machine(p, key[1])
        return self._cache[key]

    def close(self):
        for m in self._cache.values():
            m.close()


def _table(p):
    return st.lists(ints, min_size=p, max_size=p)


procs_and_table = st.sampled_from(PROCS).flatmap(lambda p: st.tuples(st.just(p), _table(p)))


def _broken_mps_op(a, b):
    return mps.MsPair(max(a[0], b[0]), a[1] + b[1])


def core_laws(machine) -> list[Property]:
    def extensionality(args):
        p, t1, t2 = args
        m = machine(p)
        v, w = mkpar(m, t1.__getitem__), mkpar(m, t2.__getitem__)
        pointwise = all(get(v, i) == get(w, i) for i in range(p))
        assert (v == w) == pointwise

    def mkpar_get(args):
        p, t = args
        v = mkpar(machine(p), t.__getitem__)
        assert [get(v, i) for i in range(p)] == t

    def apply_pointwise(args):
        p, a, b = args
        m = machine(p)
        fv = mkpar(m, lambda i: lambda x, k=a[i]: k * x + i)
        vv = mkpar(m, b.__getitem__)
        r = apply(fv, vv)
        for i in range(p):
            assert get(r, i) == get(fv, i)(get(vv, i))

    def proj_inversion(args):
        p, t = args
        f = proj(mkpar(machine(p), t.__getitem__))
        assert [f(i) for i in range(p)] == t

    def put_exchange(args):
        p, t = args
        tosend = mkpar(machine(p), lambda src: lambda dst: (t[src], src, dst))
        r = put(tosend)
        for src, dst in itertools.product(range(p), repeat=2):
            assert get(r, dst)(src) == get(tosend, src)(dst)

    def put_involution(args):
        p, t = args
        tosend = mkpar(machine(p), lambda src: lambda dst: t[src] * (dst + 1))
        twice = put(put(tosend))
        for src, dst in itertools.product(range(p), repeat=2):
            assert get(twice, src)(dst) == get(tosend, src)(dst)

    def backend_equivalence(args):
        p, t = args
        seen = []
        for b in Backend:
            m = machine(p, b)
            v = mkpar(m, t.__getitem__)
            seen.append((list_of_par(v), values(bcast_direct(p - 1, v)), values(shift(1, v))))
        assert seen[0] == seen[1]

    two_tables = st.sampled_from(PROCS).flatmap(lambda p: st.tuples(st.just(p), _table(p), _table(p)))
    near_tables = st.sampled_from(PROCS).flatmap(
        lambda p: _table(p).flatmap(lambda t: st.tuples(st.just(p), st.just(t), st.sampled_from([t, [*t[:-1], t[-1] + 1]])))
    )
    return [
        Property("extensionality", near_tables, extensionality),
        Property("mkpar-get", procs_and_table, mkpar_get),
        Property("apply-pointwise", two_tables, apply_pointwise),
        Property("proj-inversion", procs_and_table, proj_inversion),
        Property("put-exchange", procs_and_table, put_exchange),
        Property("put-involution", procs_and_table, put_involution),
        Property("backend-equivalence", procs_and_table, backend_equivalence),
    ]


def stdlib_laws(machine) -> list[Property]:
    def replicate_everywhere(args):
        p, x = args
        assert values(replicate(machine(p), x)) == [x] * p

    def parfun_naturality(args):
        p, t, a, b = args
        v = mkpar(machine(p), t.__getitem__)
        f, g = (lambda x: x * a), (lambda x: x + b)
        assert parfun(lambda x: g(f(x)), v) == parfun(g, parfun(f, v))

    def parfun2_pointwise(args):
        p, t = args
        m = machine(p)
        v, w = mkpar(m, t.__getitem__), mkpar(m, lambda i: i)
        assert values(parfun2(lambda x, y: x - y, v, w)) == [t[i] - i for i in range(p)]

    def list_of_par_get(args):
        p, t = args
        v = mkpar(machine(p), t.__getitem__)
        assert list_of_par(v) == [get(v, i) for i in range(p)]

    def bcast_agreement(args):
        p, t, root = args
        v = mkpar(machine(p), t.__getitem__)
        root %= p
        assert values(bcast_direct(root, v)) == [t[root]] * p

    def shift_composition(args):
        p, t, a, b = args
        v = mkpar(machine(p), t.__getitem__)
        assert shift(a, shift(b, v)) == shift(a + b, v)
        assert values(shift(a, v)) == [t[(i - a) % p] for i in range(p)]

    def superstep_accounting(args):
        p, t = args
        m = machine(p)
        with m.recording() as recs:
            v = parfun(lambda x: x + 1, apply(replicate(m, abs), mkpar(m, t.__getitem__)))
        assert recs == []
        for op in (proj, list_of_par, lambda v: bcast_direct(0, v), lambda v: shift(1, v)):
            with m.recording() as recs:
                op(v)
            assert len(recs) == 1

    offsets = st.integers(-20, 20)
    with_ints = st.sampled_from(PROCS).flatmap(lambda p: st.tuples(st.just(p), _table(p), offsets, offsets))
    return [
        Property("replicate", st.tuples(st.sampled_from(PROCS), ints), replicate_everywhere),
        Property("parfun-naturality", with_ints, parfun_naturality),
        Property("parfun2-pointwise", procs_and_table, parfun2_pointwise),
        Property("list_of_par-get", procs_and_table, list_of_par_get),
        Property(
            "bcast-agreement",
            st.sampled_from(PROCS).flatmap(lambda p: st.tuples(st.just(p), _table(p), st.integers(0, 100))),
            bcast_agreement,
        ),
        Property("shift-composition", with_ints, shift_composition),
        Property("superstep-accounting", procs_and_table, superstep_accounting),
    ]


ALGEBRAS = (
    AlgebraSpec(lambda x, y: x + y, 0, name="sum"),
    AlgebraSpec(max, 0, lambda x: x >= 0, name="max-nonneg"),
    AlgebraSpec(lambda x, y: x * y, 1, name="product"),
)


def skeleton_laws(machine) -> list[Property]:
    policies = st.sampled_from(list(Policy))
    dl_args = st.tuples(st.sampled_from(PROCS), small_lists, policies)

    def distribute_roundtrip(args):
        p, l, policy = args
        assert to_list(distribute(machine(p), l, policy)) == l

    def map_par_correspondence(args):
        (p, l, policy), k = args
        dl = distribute(machine(p), l, policy)
        f = lambda x: x * k - 1  # noqa: E731
        assert to_list(map_par(f, dl)) == seqlib.map(f, to_list(dl))

    def reduce_par_correspondence(args):
        (p, l, policy), spec = args
        l = [abs(x) % 4 for x in l] if spec.name == "product" else [abs(x) for x in l]
        dl = distribute(machine(p), l, policy)
        assert reduce_par(spec, dl, checked=True) == seqlib.fold_left(spec.op, spec.e, to_list(dl))

    def ordered_reduction(args):
        p, l, policy = args
        words = [str(x) for x in l]
        spec = AlgebraSpec(lambda x, y: x + y, "", name="concat")
        assert reduce_par(spec, distribute(machine(p), words, policy)) == "".join(words)

    def distribution_independence(args):
        l = args
        results = {
            reduce_par(ALGEBRAS[0], distribute(machine(p), l, policy)) for p in PROCS for policy in Policy
        }
        assert results == {sum(l)}

    return [
        Property("distribute-roundtrip", dl_args, distribute_roundtrip),
        Property("map_par-correspondence", st.tuples(dl_args, ints), map_par_correspondence),
        Property("reduce_par-correspondence", st.tuples(dl_args, st.sampled_from(ALGEBRAS)), reduce_par_correspondence),
        Property("reduce_par-order", dl_args, ordered_reduction),
        Property("distribution-independence", small_lists, distribution_independence),
    ]


def mps_laws(machine, op=mps.mps_op) -> list[Property]:
    algebra = mps.mps_algebra(op)
    pairs = st.tuples(st.integers(0, 50), st.integers(-50, 50)).map(lambda t: mps.MsPair(t[0], min(t[0], t[1])))

    def homomorphism(args):
        l1, l2 = args
        assert mps.ms(l1 + l2) == op(mps.ms(l1), mps.ms(l2))

    def algebra_on_invariant(args):
        x, y, z = args
        assert op(op(x, y), z) == op(x, op(y, z))
        assert op(mps.NEUTRAL, x) == x == op(x, mps.NEUTRAL)
        assert mps.inv(op(x, y))

    def f_satisfies(x):
        assert mps.inv(mps.mps_f(x))

    def seq_matches_spec(l):
        assert mps.mps_seq(l, algebra) == mps.mps_spec(l)

    def par_matches_spec(args):
        p, l, policy = args
        assert mps.mps_par(distribute(machine(p), l, policy), algebra) == mps.mps_spec(l)

    def spec_bounds(l):
        r = mps.mps_spec(l)
        assert r >= 0 and r >= sum(l)

    return [
        Property("homomorphism", st.tuples(small_lists, small_lists), homomorphism),
        Property("algebra-on-invariant", st.tuples(pairs, pairs, pairs), algebra_on_invariant),
        Property("f-satisfies-invariant", ints, f_satisfies),
        Property("mps_seq=mps_spec", small_lists, seq_matches_spec),
        Property("mps_par=mps_spec", st.tuples(st.sampled_from(PROCS), small_lists, st.sampled_from(list(Policy))), par_matches_spec),
        Property("mps_spec-bounds", small_lists, spec_bounds),
    ]


SUITES = {
    "core-laws": core_laws,
    "stdlib": stdlib_laws,
    "skeletons": skeleton_laws,
    "mps": mps_laws,
}


@dataclass
class Outcome:
    name: str
    ok: bool
    witness: str = ""


def run_property(prop: Property, seed: int, cases: int) -> Outcome:
    lines: list[str] = []

    @settings(
        max_examples=cases,
        database=None,
        deadline=None,
        suppress_health_check=list(HealthCheck),
        print_blob=False,
    )
    @hseed(seed)
    @given(prop.strategy)
    def run(args):
        prop.check(args)

    try:
        with with_reporter(lines.append):
            run()
    except AssertionError as exc:
        notes = [n for n in getattr(exc, "__notes__", []) if "Falsifying" in n or n.startswith("  ")]
        return Outcome(prop.name, False, "\n".join(notes or lines) or repr(exc))
    return Outcome(prop.name, True)


def run_suite(name: str, seed: int = 0, cases: int = 100, backend=Backend.SEQUENTIAL, mutate: bool = False, out=None):
    """Run one named suite; return the list of outcomes."""
    if name not in SUITES:
        raise KeyError(name)
    out = out or sys.stdout
    machines = _Machines(Backend(backend))
    try:
        if name == "mps" and mutate:
            props = mps_laws(machines, op=_broken_mps_op)
        else:
            props = SUITES[name](machines)
        outcomes = []
        for prop in props:
            o = run_property(prop, seed, cases)
            outcomes.append(o)
            print(f"{'ok  ' if o.ok else 'FAIL'} {name}/{o.name}", file=out)
            if not o.ok:
                print(o.witness, file=out)
        return outcomes
    finally:
        machines.close()
