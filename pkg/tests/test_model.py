from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from msrlab.model import (ModelError, Security, StateSpace, ZeroProbabilityError, check_belief,
                          condition, conditional_expectation, expectation, uniform,
                          validate_structure)

from conftest import EX1_PI, EX1_PRIOR, EX1_X, EX2_X, structure


def test_example_structure_valid():
    assert validate_structure(4, EX1_PI)


def test_single_coarse_trader_rejected():
    rep = validate_structure(4, structure([{0, 1, 2, 3}]))
    assert not rep and rep.pair is not None


def test_identical_partitions_report_first_pair():
    rep = validate_structure(4, structure([{0, 1}, {2, 3}], [{0, 1}, {2, 3}]))
    assert not rep and rep.pair == (0, 1)


def test_malformed_cells():
    assert not validate_structure(4, structure([{0, 1}, {1, 2, 3}], [{0}, {1}, {2}, {3}]))
    assert not validate_structure(4, structure([{0, 1}], [{0}, {1}, {2}, {3}]))


def test_condition_examples():
    assert condition(EX1_PRIOR, {0, 2}) == (F(1, 4), 0, F(3, 4), 0)
    assert condition(EX1_PRIOR, range(4)) == EX1_PRIOR
    assert condition(uniform(4), {1, 3}) == (0, F(1, 2), 0, F(1, 2))


def test_condition_zero_event():
    with pytest.raises(ZeroProbabilityError):
        condition((F(1), F(0)), {1})


def test_conditional_expectation_examples():
    assert conditional_expectation(EX1_PRIOR, EX1_X, {0, 2}) == F(3, 2)
    assert conditional_expectation(uniform(4), Security.of([7, 7, 7, 7]), {1, 2}) == 7
    assert expectation(uniform(4), EX2_X) == F(1, 2)


def test_check_belief_rejects_unnormalized():
    with pytest.raises(ModelError):
        check_belief((F(1, 2), F(1, 3)))
    with pytest.raises(ModelError):
        StateSpace(("a", "a"))


beliefs = st.lists(st.integers(0, 9), min_size=4, max_size=4).filter(any).map(
    lambda w: tuple(F(v, sum(w)) for v in w))
events = st.sets(st.integers(0, 3), min_size=1)


@given(beliefs, events)
def test_condition_idempotent(b, e):
    if sum(b[k] for k in e) == 0:
        return
    once = condition(b, e)
    assert condition(once, e) == once


@given(beliefs, events)
def test_conditional_expectation_bounded(b, e):
    if sum(b[k] for k in e) == 0:
        return
    v = conditional_expectation(b, EX1_X, e)
    assert min(EX1_X[k] for k in e) <= v <= max(EX1_X[k] for k in e)


@given(beliefs)
def test_law_of_total_expectation(b):
    for partition in EX1_PI.partitions:
        total = sum(sum(b[k] for k in cell) * conditional_expectation(b, EX1_X, cell)
                    for cell in partition if sum(b[k] for k in cell))
        assert total == expectation(b, EX1_X)
