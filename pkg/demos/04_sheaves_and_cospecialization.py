"""Sheaves as functors: generators, strata values, and the
cospecialization map A (x) A -> A at a degeneration.

A global sheaf assigns a space to each standard order and a matrix to
each adjacent merge, subject to the exchange relations; restricting to a
chart gives a functor on the stratum poset, and its stalk at a point is
the value on the point's stratum.
"""

from brokenlines import (
    GlobalSheaf,
    INF,
    LinOrder,
    build_family,
    evaluate_on_family,
    global_to_constructible,
    nilpotent_upper3,
    rep_from_gaps,
    stalk,
)
from brokenlines.extreal import ExtReal

algebra = nilpotent_upper3()
sheaf = GlobalSheaf.from_algebra(algebra, 3)
print("values by size:", [v.dim for v in sheaf.values])

# restricting to a 3-element chart: one value per convex equivalence
base = LinOrder.standard(3)
restricted = global_to_constructible(sheaf, base)
for rel, value in sorted(restricted.value.items(), key=lambda kv: len(kv[0].classes)):
    print(f"  stratum {[list(c) for c in rel.classes]}: dim {value.dim}")

# stalks: the all-finite point sees the coarsest stratum, the all-infinite
# point the finest (which recovers the sheaf's value on the whole order)
print("stalk at all-finite point:", stalk(restricted, rep_from_gaps([1, 2])).dim)
print("stalk at all-infinite point:", stalk(restricted, rep_from_gaps([INF, INF])).dim)

# the motivating family: constant stalk A until the line breaks, where the
# stalk jumps to A (x) A and the edge map is the multiplication
path_base = LinOrder.standard(2)
family, _ = build_family(
    path_base,
    [rep_from_gaps([g]) for g in (ExtReal(0), ExtReal(1), ExtReal(2), INF)],
    ids=["t=1", "t=1/2", "t=1/4", "t=0"],
    edges=[("t=1", "t=1/2"), ("t=1/2", "t=1/4"), ("t=1/4", "t=0")],
    limits=["t=0"],
)
ev = evaluate_on_family(sheaf, family)
print("\nstalk dims along the path:", [ev.stalks[s].dim for s, _ in family.samples])
edge = ev.edge_maps[("t=1/4", "t=0")]
print("degeneration edge map == multiplication:", edge == algebra.multiplication())
