from fractions import Fraction as F

import pytest
from hypothesis import settings

from msrlab.model import InformationStructure, Security
from msrlab.scoring import ScoringRule
from msrlab.signals import Signal

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def structure(*partitions):
    return InformationStructure(tuple(tuple(frozenset(c) for c in p) for p in partitions))


EX1_X = Security.of([0, 1, 2, 3])
EX1_PI = structure([{0, 2}, {1, 3}], [{0, 3}, {1, 2}])
EX1_PRIOR = (F(1, 8), F(3, 8), F(3, 8), F(1, 8))
EX2_X = Security.of([0, 1, 0, 1])
EX2_PI = structure([{0, 1}, {2, 3}], [{0, 3}, {1, 2}])
Z_SIGNAL = Signal.of("z", {"z": [1, F(1, 2), F(1, 2), F(1, 2)], "n": [0, F(1, 2), F(1, 2), F(1, 2)]})


def ex2_family(m):
    m = F(m)
    return ((1 - 2 * m) / 2, m, (1 - 2 * m) / 2, m)


@pytest.fixture
def quad():
    return ScoringRule.quadratic(EX1_X)


# acceptance lines are collected here and echoed in the terminal summary
ACCEPTANCE: list[str] = []
_T0 = [0.0]


def pytest_sessionstart(session):
    import time
    _T0[0] = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import time
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
    elapsed = time.perf_counter() - _T0[0]
    terminalreporter.write_line(f"session runtime {elapsed:.1f} s "
                                f"({'within' if elapsed < 120 else 'over'} the 120 s budget)")
