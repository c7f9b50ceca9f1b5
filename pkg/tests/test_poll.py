from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from msrlab.model import ModelError
from msrlab.poll import (cost_sweep, market_accuracy, market_value, parse_grid, poll_accuracy,
                         prior_grid, run_poll)
from msrlab.scenario import load


@pytest.fixture(scope="module")
def ex1():
    return load("example1")


def test_plateau(ex1):
    sc = ex1.with_cost(6)
    assert poll_accuracy(sc)[0] == F(1, 4)
    assert market_accuracy(sc).value == F(1, 4)


def test_poll_example(ex1):
    res = run_poll(ex1.with_cost(6), 0)
    assert res.announcements == (F(3, 2), F(3, 2))
    assert res.prediction == F(3, 2) and res.accuracy == F(-1, 2)


def test_market_full_accuracy_at_low_cost(ex1):
    m = market_accuracy(ex1.with_cost(F(1)))
    assert m.value == 1 and m.acquired and m.method == "exact"


def test_sweep_validation(ex1):
    with pytest.raises(ModelError):
        cost_sweep(ex1, [F(1), F(2)])
    with pytest.raises(ModelError):
        cost_sweep(ex1, [F(1), F(0)])


def test_sweep_threshold(ex1):
    res = cost_sweep(ex1, [F(5), F(9, 2), F(22, 5), F(4)])
    assert [r.A_market for r in res.records] == [F(1, 4), F(1, 4), 1, 1]
    assert res.threshold == F(22, 5)
    assert [res.jumped(r) for r in res.records] == [False, False, True, False]


def test_parse_grid():
    assert parse_grid("1:0.5:0.25") == [1, F(3, 4), F(1, 2)]
    assert parse_grid("3,2,1/2") == [3, 2, F(1, 2)]
    with pytest.raises(ModelError):
        parse_grid("1:0:0")


def test_prior_grid_count():
    priors = list(prior_grid(4))
    assert len(priors) == 455 and len(set(priors)) == 455
    assert all(sum(p) == 1 and min(p) > 0 for p in priors)
    assert len(list(prior_grid(3, F(1, 4), full_support=False))) == 15


def test_market_value_rejects_degenerate(ex1):
    with pytest.raises(ModelError):
        market_value(ex1, [(0, 0, 0, F(1))])


@given(st.sampled_from([F(k, 2) for k in range(1, 13)]), st.sampled_from([F(k, 2) for k in range(1, 13)]))
def test_poll_nondecreasing_as_cost_falls(c1, c2):
    sc = load("example1")
    hi, lo = max(c1, c2), min(c1, c2)
    assert poll_accuracy(sc.with_cost(lo))[0] >= poll_accuracy(sc.with_cost(hi))[0] - 1e-12
