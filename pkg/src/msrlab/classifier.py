"""Payoff-only classification of securities and the Case-2 adversarial construction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .model import Belief, InformationStructure, ModelError, Security

CASE0 = "Case0-Constant"
CASE1 = "Case1-AlwaysSeparable"
CASE2 = "Case2-KappaNonSepForAllKappa"
CASE3 = "Case3-KappaSepForSomeKappa"

AD = "A-D"
THREE_VALUE = "three-value"


class ConsistencyError(RuntimeError):
    """An internal construction produced something it provably should not."""


@dataclass(frozen=True)
class SecurityClass:
    case: str
    subkind: str | None = None
    evidence: dict = field(default_factory=dict)
    # Case 2 only: states carrying the pattern (a, d, b, d)
    states: tuple[int, int, int, int] | None = None

    @property
    def number(self) -> int:
        return int(self.case[4])


def _repeated_values(x: Security) -> list:
    counts: dict = {}
    for v in x.payoffs:
        counts[v] = counts.get(v, 0) + 1
    return sorted(v for v, k in counts.items() if k >= 2)


def classify(x: Security) -> SecurityClass:
    n = len(x)
    if n < 4:
        raise ModelError("classification needs at least four states")
    values = sorted(set(x.payoffs))
    if len(values) == 1:
        return SecurityClass(CASE0, evidence={"value": values[0]})
    if len(values) == n:
        return SecurityClass(CASE3, evidence={"distinct_values": n})
    # largest repeated value first, lower side first: (0,1,0,1) reads as (a,d,b,d)
    for m in reversed(_repeated_values(x)):
        inside = [s for s in range(n) if x[s] == m]
        for side in (-1, 1):
            same = [s for s in range(n) if x[s] != m and (x[s] > m) == (side > 0)]
            if len(same) >= 2:
                w1, w3 = same[0], same[1]
                w2, w4 = inside[0], inside[1]
                return SecurityClass(CASE2, evidence={
                    "repeated_value": m, "side": "below" if side < 0 else "above",
                    "pattern": (x[w1], m, x[w3], m)}, states=(w1, w2, w3, w4))
    # a single repeated value with at most two outside states, straddling it
    m = _repeated_values(x)[0]
    outside = [s for s in range(n) if x[s] != m]
    if len(outside) == 1:
        return SecurityClass(CASE1, AD, {"repeated_value": m, "distinct_state": outside[0]})
    lo, hi = sorted(outside, key=lambda s: x[s])
    return SecurityClass(CASE1, THREE_VALUE, {"a": x[lo], "b": m, "d": x[hi],
                                              "state_a": lo, "state_d": hi})


@dataclass(frozen=True)
class AdversarialConstruction:
    """Two-trader structure isolating the Case-2 states w1..w4, which carry
    payoffs (a, d, b, d): trader 1 sees {w1,w2},{w3,w4} and trader 2 sees
    {w1,w4},{w2,w3}; every other state is a singleton for both."""

    security: Security
    states: tuple[int, int, int, int]
    structure: InformationStructure

    @property
    def pattern(self):
        w1, w2, w3, _ = self.states
        return self.security[w1], self.security[w3], self.security[w2]  # a, b, d

    def _embed(self, p, m, r) -> Belief:
        w1, w2, w3, w4 = self.states
        out = [0 * p] * len(self.security)
        out[w1], out[w2], out[w3], out[w4] = p, m, r, m
        return tuple(out)

    def value_range(self) -> tuple:
        """Open interval of common values u reachable by the family."""
        a, b, d = self.pattern
        return (max(a, b), d) if d > max(a, b) else (d, min(a, b))

    def prior_at_value(self, u) -> Belief:
        """Exact family member whose cells all have expectation ``u``."""
        a, b, d = self.pattern
        u = Fraction(u)
        lo, hi = self.value_range()
        if not lo < u < hi:
            raise ValueError(f"common value must lie strictly between {lo} and {hi}")
        ra, rb = (d - u) / (u - a), (d - u) / (u - b)
        m = 1 / (2 + ra + rb)
        return self._embed(m * ra, m, m * rb)

    def value_at(self, prior: Belief):
        a, _, d = self.pattern
        w1, w2, _, _ = self.states
        p, m = prior[w1], prior[w2]
        return (p * a + m * d) / (p + m)

    def prior_at_m(self, m) -> Belief:
        """Member (p, m, 1 - p - 2m, m); exact when the root is rational,
        floating point otherwise."""
        a, b, d = self.pattern
        m = Fraction(m)
        if not 0 < m < Fraction(1, 2):
            raise ValueError("m must lie in (0, 1/2)")
        R = 1 - 2 * m
        # cell agreement (p a + m d)/(p + m) = (r b + m d)/(r + m), r = R - p
        qa = b - a
        qb = R * (a - b) + m * (a + b - 2 * d)
        qc = R * m * (d - b)
        roots = []
        if qa == 0:
            roots = [-qc / qb]
        else:
            disc = qb * qb - 4 * qa * qc
            if disc < 0:
                raise ConsistencyError("adversarial equation has no real root")
            sq = _rational_sqrt(disc)
            if sq is not None:
                roots = [(-qb + sq) / (2 * qa), (-qb - sq) / (2 * qa)]
            else:
                sf = math.sqrt(float(disc))
                roots = [(-float(qb) + sf) / (2 * float(qa)), (-float(qb) - sf) / (2 * float(qa))]
        inside = [p for p in roots if 0 < p < R]
        if not inside:
            raise ConsistencyError(f"no adversarial prior with m = {m}")
        p = inside[0]
        if isinstance(p, float):
            mf = float(m)
            return tuple(float(v) for v in self._embed(p, mf, 1 - p - 2 * mf))
        return self._embed(p, m, R - p)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def adversarial_structure(x: Security) -> AdversarialConstruction:
    cls = classify(x)
    if cls.case != CASE2:
        raise ValueError(f"security is {cls.case}, not Case 2")
    w1, w2, w3, w4 = cls.states
    rest = [frozenset({s}) for s in range(len(x)) if s not in cls.states]
    t1 = (frozenset({w1, w2}), frozenset({w3, w4}), *rest)
    t2 = (frozenset({w1, w4}), frozenset({w2, w3}), *rest)
    return AdversarialConstruction(x, cls.states, InformationStructure((t1, t2)))
