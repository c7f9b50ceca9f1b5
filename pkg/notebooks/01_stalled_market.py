"""A four-state market that cannot aggregate what its traders know.

Two traders, payoffs 0..3.  At the prior (1/8, 3/8, 3/8, 1/8) both traders
hold cells whose conditional mean is 3/2, so nobody moves and the market
sits at 3/2 whatever the true state.  Handing trader 1 a free signal that
separates w1 from the rest breaks the deadlock.
"""

from fractions import Fraction

from msrlab import detect_convergence, find_nonseparable_witness, load, run_market

# %% the information structure is not separable: a witness exists
sc = load("example1")
w = find_nonseparable_witness(sc.security, sc.structure)
print("witness prior:", [str(p) for p in w.prior], "common value:", w.value)

# %% without signals every state stalls at the witness value
quiet = sc.with_cost(Fraction(1))
quiet = type(quiet)(**{**quiet.__dict__, "menu": type(quiet.menu)()})
for s in range(4):
    tr = run_market(quiet, s)
    print(sc.space.states[s], [str(a) for a in tr.announcements], detect_convergence(tr))

# %% a free signal about w1 lets the market reach the truth
sig = load("example1_signal")
tr = run_market(sig, 0)
for r in tr.records:
    print(f"round {r.round}: trader {r.announcer} saw {r.realization}, "
          f"announced {r.announcement}, earned {r.payoff}")
print("verdict:", detect_convergence(tr), "martingale:", tr.martingale_ok)
