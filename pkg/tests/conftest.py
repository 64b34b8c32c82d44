import pytest

from bsml import Backend, Machine

PROCS = (1, 2, 3, 4, 8)

_machines = {}


def machine_for(p, backend=Backend.SEQUENTIAL):
    key = (p, Backend(backend))
    if key not in _machines:
        _machines[key] = Machine(p, key[1])
    return _machines[key]


@pytest.fixture(scope="session", autouse=True)
def _close_machines():
    yield
    for m in _machines.values():
        m.close()
    _machines.clear()


@pytest.fixture(params=list(Backend), ids=lambda b: b.value)
def backend(request):
    return request.param


@pytest.fixture(params=PROCS, ids=lambda p: f"p{p}")
def machine(request, backend):
    return machine_for(request.param, backend)


@pytest.fixture
def m4(backend):
    return machine_for(4, backend)


# Acceptance criteria report: one PASS/FAIL line per criterion at the end of the run.

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    name = marker.args[0]
    ok = call.excinfo is None
    _criteria[name] = _criteria.get(name, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in _criteria.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")


@pytest.fixture(scope="session")
def machines():
    """``machines(p, backend)`` returns a shared machine, closed at session end."""
    return machine_for
