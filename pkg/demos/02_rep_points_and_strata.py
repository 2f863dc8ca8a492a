"""Points of the chart Rep(I, BR+) and its stratification.

A point is an exact cocycle on comparable pairs with values in
(-inf, inf]; the gaps between consecutive elements determine everything.
Finite-distance classes cut the chart into strata indexed by convex
equivalence relations.
"""

from fractions import Fraction

from brokenlines import (
    INF,
    LinOrder,
    chart_coordinates,
    enumerate_convex_equivalences,
    rep_from_gaps,
    stratum_of,
    stratum_samples,
    u_contains,
)

# a point on [2] = {0 < 1 < 2} with gaps 1 and 2: the cocycle forces
# alpha(0, 2) = 3
point = rep_from_gaps([1, 2])
print("alpha(0,2) =", point.alpha(0, 2))

# an infinite gap breaks the line into two pieces
broken = rep_from_gaps([INF, Fraction(1, 2), INF])
print("stratum classes:", stratum_of(broken).classes)

# chart coordinates invert rep_from_gaps, flagging slots whose finiteness
# is forced (consecutive elements that compare both ways)
gaps, forced = chart_coordinates(broken)
print("gaps:", [str(g) for g in gaps], "forced:", forced)

# the open sets U_E shrink as E coarsens; membership is a one-liner
base = LinOrder.standard(4)
for rel in enumerate_convex_equivalences(base):
    sample = stratum_samples(base, rel, 1)[0]
    finer = [e for e in enumerate_convex_equivalences(base) if e.refines(rel)]
    assert all(u_contains(sample, e) for e in finer)
    print(
        f"stratum {rel.classes}: dim "
        f"{sum(1 for g in sample.gaps() if g.is_finite)}"
    )
