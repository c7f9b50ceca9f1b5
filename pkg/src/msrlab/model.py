"""Finite state spaces, securities, information structures and beliefs.

Beliefs are plain tuples indexed by state position.  Entries are
``fractions.Fraction`` in rational mode and ``float`` in float mode; every
function here works with either, and exact inputs give exact outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Iterable, Sequence

Number = Fraction | float
Belief = tuple

FLOAT_TOL = 1e-9


class ModelError(ValueError):
    """Malformed scenario data (bad partition, non-normalized prior, ...)."""


class ZeroProbabilityError(ValueError):
    """Conditioning on an event the belief assigns zero mass."""


def to_number(value, exact: bool = True) -> Number:
    """Parse ``value`` ("3/8", "0.25", 1, Fraction) into a Fraction or float."""
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if exact:
        if isinstance(value, float):
            return Fraction(value).limit_denominator(10**12)
        return Fraction(value)
    return float(Fraction(value)) if isinstance(value, str) else float(value)


def format_number(x) -> str:
    """Serialize a number as "p/q" (or "p" for integers); floats use repr."""
    if isinstance(x, Rational):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def is_close(a, b, tol: float = FLOAT_TOL) -> bool:
    if isinstance(a, Rational) and isinstance(b, Rational):
        return a == b
    return abs(float(a) - float(b)) <= tol


@dataclass(frozen=True)
class StateSpace:
    states: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(str(s) for s in self.states))
        if len(self.states) < 2:
            raise ModelError("a state space needs at least two states")
        if len(set(self.states)) != len(self.states):
            raise ModelError("state identifiers must be unique")

    def __len__(self) -> int:
        return len(self.states)

    def index(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise ModelError(f"unknown state {state!r}") from None

    @classmethod
    def of_size(cls, n: int) -> "StateSpace":
        return cls(tuple(f"w{k + 1}" for k in range(n)))


@dataclass(frozen=True)
class Security:
    payoffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "payoffs", tuple(self.payoffs))
        if not self.payoffs:
            raise ModelError("a security needs at least one payoff")

    def __len__(self) -> int:
        return len(self.payoffs)

    def __getitem__(self, k):
        return self.payoffs[k]

    @property
    def low(self):
        return min(self.payoffs)

    @property
    def high(self):
        return max(self.payoffs)

    @classmethod
    def of(cls, values: Iterable, exact: bool = True) -> "Security":
        return cls(tuple(to_number(v, exact) for v in values))


@dataclass(frozen=True)
class InformationStructure:
    """One partition per trader; each partition is a tuple of frozensets of
    state indices."""

    partitions: tuple[tuple[frozenset[int], ...], ...]

    def __post_init__(self):
        parts = tuple(tuple(frozenset(cell) for cell in p) for p in self.partitions)
        object.__setattr__(self, "partitions", parts)

    @property
    def n_traders(self) -> int:
        return len(self.partitions)

    def cell(self, trader: int, state: int) -> frozenset[int]:
        for c in self.partitions[trader]:
            if state in c:
                return c
        raise ModelError(f"state {state} not covered by trader {trader}'s partition")

    def cells(self, trader: int) -> tuple[frozenset[int], ...]:
        return self.partitions[trader]

    @classmethod
    def from_labels(cls, space: StateSpace, partitions: Sequence[Sequence[Sequence[str]]]):
        return cls(tuple(tuple(frozenset(space.index(s) for s in cell) for cell in p)
                         for p in partitions))

    def to_labels(self, space: StateSpace) -> list[list[list[str]]]:
        return [[[space.states[k] for k in sorted(cell)] for cell in p] for p in self.partitions]


@dataclass(frozen=True)
class StructureReport:
    ok: bool
    message: str = ""
    pair: tuple[int, int] | None = None
    trader: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_structure(space: StateSpace | int, structure: InformationStructure) -> StructureReport:
    """Check every partition covers the space disjointly and the join is all
    singletons.  Returns a falsy report naming the first offence."""
    n = space if isinstance(space, int) else len(space)
    universe = set(range(n))
    if structure.n_traders == 0:
        return StructureReport(False, "no traders")
    for i, partition in enumerate(structure.partitions):
        seen: set[int] = set()
        for cell in partition:
            if not cell:
                return StructureReport(False, f"trader {i} has an empty cell", trader=i)
            if not cell <= universe:
                return StructureReport(False, f"trader {i} has a cell outside the state space",
                                       trader=i)
            if seen & cell:
                return StructureReport(False, f"trader {i} has overlapping cells", trader=i)
            seen |= cell
        if seen != universe:
            return StructureReport(False, f"trader {i}'s partition does not cover the space",
                                   trader=i)
    for a, b in combinations(range(n), 2):
        if all(structure.cell(i, a) == structure.cell(i, b) for i in range(structure.n_traders)):
            return StructureReport(False, f"no trader separates states {a} and {b}", pair=(a, b))
    return StructureReport(True)


def check_belief(b: Sequence, n: int | None = None) -> Belief:
    """Validate a probability vector; exact vectors must sum to exactly 1."""
    b = tuple(b)
    if n is not None and len(b) != n:
        raise ModelError(f"belief has {len(b)} entries, expected {n}")
    if any(p < 0 for p in b):
        raise ModelError("belief has a negative entry")
    total = sum(b)
    if all(isinstance(p, Rational) for p in b):
        if total != 1:
            raise ModelError(f"belief sums to {total}, not 1")
    elif abs(total - 1.0) > FLOAT_TOL:
        raise ModelError(f"belief sums to {total}, not 1")
    return b


def support(b: Sequence) -> frozenset[int]:
    return frozenset(k for k, p in enumerate(b) if p > 0)


def uniform(n: int, exact: bool = True) -> Belief:
    return tuple(Fraction(1, n) if exact else 1.0 / n for _ in range(n))


def point_mass(n: int, state: int, exact: bool = True) -> Belief:
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    return tuple(one if k == state else zero for k in range(n))


def mass(b: Sequence, event: Iterable[int]):
    return sum((b[k] for k in event), 0 * b[0])


def condition(b: Sequence, event: Iterable[int]) -> Belief:
    event = frozenset(event)
    total = mass(b, event)
    if total <= 0:
        raise ZeroProbabilityError(f"event {sorted(event)} has zero probability")
    zero = 0 * b[0]
    return tuple(p / total if k in event else zero for k, p in enumerate(b))


def expectation(b: Sequence, x: Security | Sequence):
    payoffs = x.payoffs if isinstance(x, Security) else x
    return sum((p * v for p, v in zip(b, payoffs) if p), 0 * b[0])


def conditional_expectation(b: Sequence, x: Security | Sequence, event: Iterable[int]):
    return expectation(condition(b, event), x)


def is_value_degenerate(b: Sequence, x: Security | Sequence) -> bool:
    """True when ``b`` puts all its mass on a single payoff value."""
    payoffs = x.payoffs if isinstance(x, Security) else x
    return len({payoffs[k] for k in support(b)}) <= 1
