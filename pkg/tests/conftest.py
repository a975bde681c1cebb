from __future__ import annotations

import random

import pytest

from cuntzk.ringcore import RingElement, RingPresentation
from cuntzk.spaces import builtin

ACCEPTANCE_KEY = pytest.StashKey[dict]()

# spaces used across the suite; names are builtin specs
CORPUS = ("cp(1)", "cp(2)", "cp(3)", "rp2", "sphere(2)", "sphere(4)",
          "wedge(rp2,cp(2))", "suspension(0)", "suspension(0,3)", "point")


@pytest.fixture(scope="session")
def spaces():
    return {name: builtin(name) for name in CORPUS}


def random_element(R: RingPresentation, rng: random.Random, lo: int = -2, hi: int = 2) -> RingElement:
    """Small coefficients on free generators, any residue on torsion ones."""
    return R.element([rng.randrange(t) if t else rng.randint(lo, hi) for t in R.torsion_orders])


def related_pair(R: RingPresentation, m: int, rng: random.Random, lo: int = -2, hi: int = 2):
    """(a, b, h) with a = b + m h + b h by construction."""
    b = random_element(R, rng, lo, hi)
    h = random_element(R, rng, lo, hi)
    return b + h * m + b * h, b, h


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion; printed in the terminal summary."""
    store = request.config.stash.setdefault(ACCEPTANCE_KEY, {})

    def record(number: int, ok: bool, detail: str) -> None:
        store[number] = (ok, detail)
        assert ok, f"criterion {number}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(ACCEPTANCE_KEY, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 11):
        if number not in store:
            terminalreporter.write_line(f"criterion {number:2d}: NOT RUN")
            continue
        ok, detail = store[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
