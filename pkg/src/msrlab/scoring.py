"""Strictly proper scoring rules and market-scoring-rule payoffs.

The quadratic rule stays exact on Fraction inputs, which keeps trace payoffs
checkable; the logarithmic rule always returns floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import Security, expectation, to_number

QUADRATIC = "quadratic"
LOGARITHMIC = "logarithmic"


class AnnouncementRangeError(ValueError):
    pass


@dataclass(frozen=True)
class ScoringRule:
    kind: str = QUADRATIC
    a: Fraction | float | None = None
    b: Fraction | float | None = None
    low: Fraction | float | None = None
    high: Fraction | float | None = None

    def __post_init__(self):
        if self.kind not in (QUADRATIC, LOGARITHMIC):
            raise ValueError(f"unknown scoring rule {self.kind!r}")
        if self.kind == LOGARITHMIC:
            if self.a is None or self.b is None:
                raise ValueError("logarithmic rule needs anchors a and b")
            if self.low is not None and not self.a < self.low:
                raise ValueError("anchor a must lie strictly below the payoff range")
            if self.high is not None and not self.b > self.high:
                raise ValueError("anchor b must lie strictly above the payoff range")

    @classmethod
    def quadratic(cls, x: Security | None = None) -> "ScoringRule":
        if x is None:
            return cls(QUADRATIC)
        return cls(QUADRATIC, low=x.low, high=x.high)

    @classmethod
    def logarithmic(cls, x: Security, a=None, b=None) -> "ScoringRule":
        a = x.low - 1 if a is None else to_number(a)
        b = x.high + 1 if b is None else to_number(b)
        return cls(LOGARITHMIC, a=a, b=b, low=x.low, high=x.high)

    def bind(self, x: Security) -> "ScoringRule":
        """Attach the announcement range of ``x`` (and default log anchors)."""
        if self.kind == QUADRATIC:
            return ScoringRule.quadratic(x)
        return ScoringRule.logarithmic(x, self.a, self.b)


def _check_range(rule: ScoringRule, y) -> None:
    if rule.low is not None and y < rule.low:
        raise AnnouncementRangeError(f"announcement {y} below range [{rule.low}, {rule.high}]")
    if rule.high is not None and y > rule.high:
        raise AnnouncementRangeError(f"announcement {y} above range [{rule.low}, {rule.high}]")


def score(rule: ScoringRule, y, x):
    _check_range(rule, y)
    if rule.kind == QUADRATIC:
        return -(x - y) ** 2
    a, b = rule.a, rule.b
    return float(x - a) * math.log(float(y - a)) + float(b - x) * math.log(float(b - y))


def msr_round_payoff(rule: ScoringRule, y_now, y_prev, x):
    if y_now == y_prev:
        _check_range(rule, y_now)
        return 0 * score(rule, y_now, x)
    return score(rule, y_now, x) - score(rule, y_prev, x)


def expected_score(b: Sequence, rule: ScoringRule, y, x: Security):
    return sum((p * score(rule, y, v) for p, v in zip(b, x.payoffs) if p),
               0 * score(rule, y, x.payoffs[0]))


def expected_gain(b: Sequence, rule: ScoringRule, y_new, y_old, x: Security):
    """E_b[s(y_new, X) - s(y_old, X)], exact for the quadratic rule.

    For the quadratic rule the difference collapses to
    (y_new - y_old) * (2 E_b[X] - y_new - y_old), which avoids cancellation.
    """
    if rule.kind == QUADRATIC:
        _check_range(rule, y_new)
        _check_range(rule, y_old)
        mean = expectation(b, x)
        return (y_new - y_old) * (2 * mean - y_new - y_old)
    return sum((p * (score(rule, y_new, v) - score(rule, y_old, v))
                for p, v in zip(b, x.payoffs) if p), 0.0)


def nearest_grid_point(value, grid: Sequence):
    """Grid point closest to ``value``; ties go to the lower point."""
    best = None
    for g in sorted(grid):
        d = abs(g - value)
        if best is None or d < best[0]:
            best = (d, g)
    if best is None:
        raise ValueError("empty announcement grid")
    return best[1]


def myopic_best(b: Sequence, x: Security, grid: Sequence | None = None):
    mean = expectation(b, x)
    return mean if grid is None else nearest_grid_point(mean, grid)
