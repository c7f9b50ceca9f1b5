"""Markets against polls as information gets cheaper.

A poll asks every trader once and averages.  The market lets them revise
in turn.  Sweeping the marginal cost downward, the poll improves smoothly
while the market stays put and then jumps straight to full accuracy.
"""

from fractions import Fraction

from msrlab import cost_sweep, load, market_value
from msrlab.poll import parse_grid, prior_grid

sc = load("example1")
res = cost_sweep(sc, parse_grid("6:0.1:0.1"))
print(" c     A_market  A_poll")
for rec in res.records[::5] + [r for r in res.records if res.jumped(r)]:
    mark = "  <- jump" if res.jumped(rec) else ""
    print(f"{float(rec.c):4.1f}  {float(rec.A_market):8.5f}  {float(rec.A_poll):8.5f}{mark}")
print("market reaches full accuracy at c =", res.threshold)

# %% the market's edge over the poll, across priors, at a cost where it always learns
value, argmin, _ = market_value(sc.with_cost(1), prior_grid(4, Fraction(1, 8)))
print("smallest edge on the 1/8 grid:", float(value), "at", [str(p) for p in argmin])
