"""Witnesses and certificates.

For every security and partition profile exactly one of two objects exists:
a prior on which all traders agree while the value stays uncertain, or a
set of cell weights proving no such prior can exist.  Both are found by
exact linear programs.
"""

from msrlab import (Security, check_witness, classify, closed_form_four_state_witness,
                    find_lambda_certificate, find_nonseparable_witness, load)
from msrlab.separability import ADVERSARIAL_PARTITIONS, verify_certificate

pi = load("example1").structure

for payoffs in ([0, 1, 2, 3], [0, 1, 1, 1], [0, 1, 1, 2], [0, 1, 0, 1]):
    x = Security.of(payoffs)
    w = find_nonseparable_witness(x, pi)
    if w is not None:
        print(payoffs, classify(x).case, "witness", [str(p) for p in w.prior],
              "v =", w.value, check_witness(x, pi, w))
    else:
        cert = find_lambda_certificate(x, pi)
        print(payoffs, classify(x).case, "certificate over", len(cert.regions), "regions",
              verify_certificate(x, pi, cert))

# %% (0, 1, 0, 1) is separable above, but not under its own adversarial partitions
x = Security.of([0, 1, 0, 1])
pi2 = load("example2").structure
w = find_nonseparable_witness(x, pi2)
print("(0, 1, 0, 1) under crossed pairs: witness", [str(p) for p in w.prior], "v =", w.value)

# %% the two-trader closed form
cf = closed_form_four_state_witness(0, 1, 2, 3)
print("closed form:", "q1", cf.q1, "p1", cf.p1, "p2", cf.p2, "q2", cf.q2)
print("prior", [str(p) for p in cf.prior], "value", cf.value,
      check_witness(Security.of([0, 1, 2, 3]), ADVERSARIAL_PARTITIONS, cf.witness))
