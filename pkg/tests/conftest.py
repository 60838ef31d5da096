from pathlib import Path

import pytest

from k3dyn import dynamics as dy
from k3dyn import fibration as fb
from k3dyn.curveconf import builtin, lattice_model
from k3dyn.scenarios import KUMMER_FIBRATIONS, MOST_ALGEBRAIC_FIBRATIONS, parse_divisor

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def kummer():
    return lattice_model(builtin("kummer_fig1"))


@pytest.fixture(scope="session")
def most_alg():
    return lattice_model(builtin("most_algebraic_fig2"))


@pytest.fixture(scope="session")
def e8():
    return lattice_model(builtin("e8_thm51"))


def _translations(model, fibs):
    out = {}
    for label, text, O, P in fibs:
        fd = fb.fiber_check(model, parse_divisor(text))
        out[label] = (fd, dy.translation_isometry(model, fd, O, P, label=label))
    return out


@pytest.fixture(scope="session")
def kummer_tr(kummer):
    """label -> (FiberData, Translation) for f1, f2, f3."""
    return _translations(kummer, KUMMER_FIBRATIONS)


@pytest.fixture(scope="session")
def most_alg_tr(most_alg):
    """label -> (FiberData, Translation) for h, f1, f2."""
    return _translations(most_alg, MOST_ALGEBRAIC_FIBRATIONS)


# --- acceptance reporting -------------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _ACCEPTANCE[number] = (title, "PASS" if rep.passed else "FAIL", call.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status, secs = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  ({secs:.2f} s)")
