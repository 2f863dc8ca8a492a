"""Linear preorders, convex equivalences, and amalgams.

A linear preorder is a total transitive relation; we store it as a rank
vector.  Everything here is small enough to enumerate outright, and the
enumeration filters double as the definitions.
"""

from brokenlines import (
    LinOrder,
    enumerate_amalgams,
    enumerate_convex_equivalences,
    enumerate_linear_preorders,
    enumerate_surjections,
    quotient,
)
from brokenlines.orders import LinPreorder

# all linear preorders on 3 labels: 13 of them (ordered set partitions)
preorders = enumerate_linear_preorders(3)
print(f"preorders on 3 labels: {len(preorders)}")
for p in preorders[:5]:
    print("  rank vector", p.ranks, "->", "order" if p.is_linear_order else "preorder")

# a preorder with a tie, and its quotient linear order
tied = LinPreorder([0, 0, 1])
order, projection = quotient(tied)
print(f"\nquotient of {tied.ranks}: {order.n} classes, projection {projection.mapping}")

# monotone surjections [3] -> [2]: the two ways to merge a consecutive pair
three, two = LinOrder.standard(3), LinOrder.standard(2)
for f in enumerate_surjections(three, two):
    print("surjection", f.mapping)

# convex equivalences on a 4-chain: interval partitions, 2^(4-1) = 8
rels = enumerate_convex_equivalences(LinOrder.standard(4))
print(f"\nconvex equivalences on a 4-chain: {len(rels)}")
print("finest:", rels[-1].classes, " coarsest:", rels[0].classes)

# amalgams of two chains: preorders on the disjoint union restricting to
# both, with every class meeting both sides; Amal(2,2) has exactly two
left = right = LinOrder.standard(2)
amalgams = enumerate_amalgams(left, right)
print(f"\namalgams of two 2-chains: {len(amalgams)}")
for a in amalgams:
    print("  ranks on I ⊔ J:", a.preorder.ranks)

# the join is the transitive closure of the union, and it is the least
# upper bound in the amalgam poset
a, b = amalgams
print("join of the two:", a.join(b).preorder.ranks)
