import pytest

from primefree.ilrs import CompositionChain, IlrsSpec
from primefree.trace import MinPoly

_acceptance_lines = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("acceptance")
    if marker:
        number, title = marker
        status = "PASS" if report.outcome == "passed" else "FAIL"
        _acceptance_lines.append((number, f"criterion {number:>2}: {status}  {title}"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_acceptance_lines):
        terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _record_acceptance(request, record_property):
    marker = request.node.get_closest_marker("acceptance")
    if marker:
        record_property("acceptance", tuple(marker.args))


@pytest.fixture
def fib():
    return IlrsSpec((1, 1), 0, (1, 1), "F")


@pytest.fixture
def fib12():
    return IlrsSpec((1, 1), 0, (1, 2), "F12")


@pytest.fixture
def lucas():
    return IlrsSpec((1, 1), 0, (1, 3), "Lucas")


@pytest.fixture
def doubling():
    return IlrsSpec((2,), 0, (1,), "doubling")


@pytest.fixture
def ff(fib):
    return CompositionChain.of(fib, fib)


@pytest.fixture
def golden():
    return MinPoly.from_coefficients([1, -1, -1])


@pytest.fixture
def salem4():
    return MinPoly.from_coefficients([1, -1, -1, -1, 1])
