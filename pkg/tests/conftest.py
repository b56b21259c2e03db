import json
from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("isogeo", deadline=None, max_examples=60)
settings.load_profile("isogeo")

FROZEN = json.loads((Path(__file__).parent / "oracles" / "frozen.json").read_text())


@pytest.fixture(scope="session")
def frozen():
    return FROZEN


_ACCEPTANCE = []


class Criterion:
    """Records ``(number, title, measured, bound)`` lines for the summary."""

    def __init__(self):
        self.failed = []

    def __call__(self, number, title, measured, bound, ok=None):
        measured = float(measured)
        ok = bool(measured <= bound if ok is None else ok)
        _ACCEPTANCE.append((number, title, ok, measured, bound))
        if not ok:
            self.failed.append(f"{number}. {title}: measured {measured:.3e}, bound {bound}")
        return ok


@pytest.fixture
def criterion():
    rec = Criterion()
    yield rec
    assert not rec.failed, "; ".join(rec.failed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, measured, bound in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}: measured {measured:.3e}, bound {bound}")
