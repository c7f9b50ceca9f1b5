from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from msrlab.market import (CONVERGED, STALLED, PublicBelief, detect_convergence,
                           enumerate_outcomes, infer_public_belief, initial_public, run_market)
from msrlab.model import StateSpace
from msrlab.scenario import Scenario, load
from msrlab.scoring import score
from msrlab.signals import CostStructure, Menu, Signal, default_menu

from conftest import EX1_PI, EX1_PRIOR, EX1_X, EX2_PI, EX2_X


def ex1(menu=Menu(), cost=CostStructure(F(1)), prior=EX1_PRIOR):
    return Scenario("ex1", StateSpace.of_size(4), EX1_X, EX1_PI, prior, cost=cost, menu=menu)


def assert_telescopes(sc, trace):
    x = sc.security[trace.true_state]
    total = sum(r.payoff for r in trace.records)
    assert total == score(sc.rule.bind(sc.security), trace.final, x) - \
        score(sc.rule.bind(sc.security), trace.start, x)


@pytest.mark.parametrize("state", range(4))
def test_empty_menu_stalls(state):
    tr = run_market(ex1(), state)
    assert tr.announcements == [F(3, 2), F(3, 2)]
    assert detect_convergence(tr) == (STALLED, F(3, 2))
    assert tr.martingale_ok


def test_z_signal_trace():
    sc = load("example1_signal")
    tr = run_market(sc, 0)
    assert tr.announcements == [F(6, 5), 0]
    assert detect_convergence(tr) == (CONVERGED, 0)
    assert tr.payoffs_by_trader() == {0: F(81, 100), 1: F(36, 25)}
    assert tr.martingale_ok
    assert_telescopes(sc, tr)


def test_z_signal_trace_at_top_state():
    tr = run_market(load("example1_signal"), 3)
    assert tr.announcements[:2] == [F(3, 2), 3]


def test_infer_public_belief_example():
    pub = initial_public(EX1_PRIOR, 2)
    assert pub.marginal(4) == EX1_PRIOR and pub.total() == 1
    blank = next(iter(pub.atoms))[1]
    joint = {((0, blank), F(6, 5)): F(1, 8), ((2, blank), F(6, 5)): F(3, 8),
             ((1, blank), 2): F(1, 2)}
    post = infer_public_belief(joint, F(6, 5))
    assert post.marginal(4) == (F(1, 4), 0, F(3, 4), 0)


def test_revealing_free_signal_converges():
    reveal = Signal.revealing(4)
    cost = CostStructure(F(1), "table", {"reveal": F(0)}, assumption2=False)
    sc = ex1(Menu((reveal,)), cost)
    for s in range(4):
        tr = run_market(sc, s)
        assert detect_convergence(tr) == (CONVERGED, EX1_X[s])
        assert tr.stop == "degenerate" and tr.martingale_ok


def test_witness_prior_stalls_in_one_round():
    prior = (F(63, 128), F(1, 128), F(63, 128), F(1, 128))
    sc = Scenario("ex2", StateSpace.of_size(4), EX2_X, EX2_PI, prior, menu=default_menu(4))
    for s in range(4):
        tr = run_market(sc, s)
        assert len({r.announcement for r in tr.records}) == 1
        assert all(r.signal is None for r in tr.records)
        assert detect_convergence(tr)[0] == STALLED


def test_enumerate_outcomes_probabilities():
    leaves = enumerate_outcomes(ex1(default_menu(4), CostStructure(F(1, 2))), 1, check=True)
    assert sum(p for p, _ in leaves) == 1
    assert all(t.martingale_ok for _, t in leaves)


def test_zero_prior_state_rejected():
    with pytest.raises(ValueError):
        run_market(ex1(prior=(F(1, 2), 0, F(1, 2), 0)), 1)


@given(st.integers(0, 3), st.integers(0, 10**6), st.sampled_from([F(1, 4), F(1, 2), F(1), F(2)]))
def test_traces_martingale_and_telescoping(state, seed, c):
    sc = ex1(default_menu(4), CostStructure(c))
    tr = run_market(sc, state, seed)
    assert tr.martingale_ok
    assert_telescopes(sc, tr)
    assert tr.stop in ("repeat", "degenerate")


@given(st.lists(st.integers(1, 6), min_size=4, max_size=4), st.integers(0, 3))
def test_random_prior_traces(w, state):
    prior = tuple(F(v, sum(w)) for v in w)
    sc = load("example1_signal").with_prior(prior)
    tr = run_market(sc, state)
    assert tr.martingale_ok
    assert_telescopes(sc, tr)
