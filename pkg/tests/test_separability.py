import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from msrlab.model import InformationStructure, Security
from msrlab.separability import (ADVERSARIAL_PARTITIONS, certificate_holds_at, check_witness,
                                 closed_form_four_state_witness, explicit_certificate,
                                 find_lambda_certificate, find_nonseparable_witness,
                                 verify_certificate, witness_at_value)

from conftest import EX1_PI, EX1_X, EX2_PI, EX2_X, structure


def random_partition(rng, n):
    labels = [rng.randrange(n) for _ in range(n)]
    cells = {}
    for s, l in enumerate(labels):
        cells.setdefault(l, set()).add(s)
    return tuple(frozenset(c) for c in cells.values())


def random_pair(rng):
    """A security and a structure whose partitions jointly reveal the state."""
    n = rng.choice((4, 5, 6))
    while True:
        parts = tuple(random_partition(rng, n) for _ in range(rng.choice((2, 3))))
        if all(len({next(c for c in p if s in c) for p in parts} and
                   {tuple(next(c for c in p if s in c) for p in parts)}) for s in range(n)):
            atoms = {tuple(next(c for c in p if s in c) for p in parts) for s in range(n)}
            if len(atoms) == n:
                break
    x = Security(tuple(F(rng.randrange(4)) for _ in range(n)))
    return x, InformationStructure(parts)


def test_example1_witness():
    w = find_nonseparable_witness(EX1_X, EX1_PI)
    assert w is not None and check_witness(EX1_X, EX1_PI, w)
    assert w.value == F(3, 2) and w.prior == (F(1, 8), F(3, 8), F(3, 8), F(1, 8))
    assert find_lambda_certificate(EX1_X, EX1_PI) is None


def test_example2_witness():
    w = find_nonseparable_witness(EX2_X, EX2_PI)
    assert w is not None and w.value == F(1, 2) and check_witness(EX2_X, EX2_PI, w)


def test_arrow_debreu_certificate():
    x = Security.of([0, 1, 1, 1])
    cert = find_lambda_certificate(x, EX1_PI)
    assert cert is not None and verify_certificate(x, EX1_PI, cert)
    assert verify_certificate(x, EX1_PI, explicit_certificate(x, EX1_PI))


def test_three_value_explicit_certificate():
    x = Security.of([0, 1, 1, 2])
    for pi in (EX1_PI, EX2_PI):
        assert verify_certificate(x, pi, explicit_certificate(x, pi))


@given(st.fractions(F(-1), F(4)))
def test_certificate_holds_at_random_values(v):
    x = Security.of([0, 1, 1, 2])
    cert = explicit_certificate(x, EX1_PI)
    assert certificate_holds_at(x, EX1_PI, cert.weights_at(v), v)


def test_closed_form_example():
    cf = closed_form_four_state_witness(0, 1, 2, 3)
    assert (cf.q1, cf.p1, cf.p2, cf.q2) == (F(1, 2), F(1, 2), F(1, 4), F(3, 4))
    assert cf.prior == (F(1, 8), F(3, 8), F(3, 8), F(1, 8)) and cf.value == F(3, 2)
    assert check_witness(Security.of([0, 1, 2, 3]), ADVERSARIAL_PARTITIONS, cf.witness)


def test_closed_form_rejects_bad_order():
    with pytest.raises(ValueError):
        closed_form_four_state_witness(2, 1, 0, 3)


quads = st.lists(st.integers(-5, 5), min_size=4, max_size=4).map(sorted).filter(
    lambda q: q[1] < q[2])


@given(quads)
def test_closed_form_matches_lp(q):
    cf = closed_form_four_state_witness(*q)
    x = Security.of(q)
    assert check_witness(x, ADVERSARIAL_PARTITIONS, cf.witness)
    lp_w = witness_at_value(x, ADVERSARIAL_PARTITIONS, cf.value)
    assert lp_w is not None and lp_w.value == cf.value
    assert check_witness(x, ADVERSARIAL_PARTITIONS, lp_w)


@pytest.mark.parametrize("seed", range(30))
def test_duality_random(seed):
    rng = random.Random(seed)
    x, pi = random_pair(rng)
    w = find_nonseparable_witness(x, pi)
    cert = find_lambda_certificate(x, pi)
    assert (w is None) != (cert is None)
    if w is not None:
        assert check_witness(x, pi, w)
    else:
        assert verify_certificate(x, pi, cert)


def test_constant_security_is_separable():
    x = Security.of([2, 2, 2, 2])
    assert find_nonseparable_witness(x, EX1_PI) is None
    assert verify_certificate(x, EX1_PI, find_lambda_certificate(x, EX1_PI))


def test_singleton_trader_always_separable():
    pi = structure([{0}, {1}, {2}, {3}], [{0, 1, 2, 3}])
    assert find_nonseparable_witness(EX1_X, pi) is None


@pytest.mark.parametrize("payoffs", [[0, 1, 1, 1], [0, 1, 1, 2], [2, 0, 2, 2]])
@given(v=st.fractions(F(-3), F(5)))
def test_lp_certificate_holds_at_random_values(payoffs, v):
    x = Security.of(payoffs)
    cert = find_lambda_certificate(x, EX1_PI)
    assert cert is not None
    assert certificate_holds_at(x, EX1_PI, cert.weights_at(v), v)
