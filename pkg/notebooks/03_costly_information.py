"""When information costs something.

With entropy-priced signals the question becomes whether some witness
prior is also a dead zone where nobody buys.  The payoff pattern
(0, 1, 0, 1) has such priors at every cost; the pattern (0, 1, 2, 3) only
once the cost is high enough.  The scan below finds the switch point.
"""

from fractions import Fraction

from msrlab import CostStructure, ScanGrid, kappa_separability_scan, kappa_threshold, load
from msrlab.signals import default_menu

menu = default_menu(4)
ex2 = load("example2")
for c in ("1/100", "1/10", "1", "10"):
    v = kappa_separability_scan(ex2.security, ex2.structure, CostStructure(Fraction(c)), menu)
    print(f"example2 c={c}: {v.label}; witness {[str(p) for p in v.witness.prior]}")

ex1 = load("example1")
grid = ScanGrid(depth=40)
for c in (1, 3, 5):
    v = kappa_separability_scan(ex1.security, ex1.structure, CostStructure(Fraction(c)), menu,
                                grid=grid)
    print(f"example1 c={c}: {v.label} after {v.checked} priors")

c_bar = kappa_threshold(ex1.security, ex1.structure, CostStructure(Fraction(1)), menu, 1, 8,
                        grid=grid, rtol=1e-4)
print(f"example1 switches near c = {c_bar:.4f}")
