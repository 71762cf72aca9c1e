import pytest

from nscm import catalog

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} {detail}")


@pytest.fixture
def lp():
    return catalog.late_preemption()


@pytest.fixture
def lp_world():
    return dict(catalog.LATE_PREEMPTION_WORLD)


@pytest.fixture
def ex2():
    return catalog.treatment()


@pytest.fixture
def accuracy():
    return catalog.suzy_accuracy()


@pytest.fixture
def thm1():
    return catalog.ancestor_counterexample()
