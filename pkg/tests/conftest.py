import random

import pytest

from zchannel.codes import Code
from zchannel.constructions import BalancedParams, balanced_code
from zchannel.words import Word


@pytest.fixture
def bal2():
    """Balanced code m=2, w=1/2: rows 111000, 100110, 010101, 001011."""
    return balanced_code(BalancedParams(2, "1/2"))


def random_code(rng: random.Random, n: int, size: int) -> Code:
    if size > 1 << n:
        raise ValueError("more words requested than exist")
    picks: set[int] = set()
    while len(picks) < size:
        picks.add(rng.getrandbits(n))
    picks = sorted(picks)
    return Code([Word(n, b) for b in picks])


# --- acceptance reporting --------------------------------------------------------
#
# Each acceptance test records one verdict line.  The lines are echoed right
# away (visible with -s) and repeated in the terminal summary, so they show up
# in every run regardless of output capture.

_ACCEPTANCE: list[str] = []


@pytest.fixture
def verdict(request):
    def record(criterion: int, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
