"""Finite linear preorders, linear orders, their morphisms, convex
equivalence relations, and amalgams.

A preorder on labels 0..n-1 is stored as a rank vector whose image is an
initial segment 0..k-1 of the naturals; i <= j holds iff rank(i) <= rank(j).
Enumeration is brute force with filtering throughout: sizes stay tiny
(n <= 6 or so) and the filters double as executable definitions.
"""

from __future__ import annotations

import itertools


class LinPreorder:
    """A total transitive relation on labels 0..n-1, encoded by ranks."""

    __slots__ = ("ranks",)

    def __init__(self, ranks):
        ranks = tuple(int(r) for r in ranks)
        if len(ranks) == 0:
            raise ValueError("preorders are nonempty")
        if any(r < 0 for r in ranks):
            raise ValueError("ranks must be nonnegative")
        image = set(ranks)
        if image != set(range(max(ranks) + 1)):
            raise ValueError("rank image must be an initial segment 0..k-1")
        object.__setattr__(self, "ranks", ranks)

    def __setattr__(self, name, value):
        raise AttributeError("LinPreorder is immutable")

    @property
    def n(self):
        return len(self.ranks)

    @property
    def num_classes(self):
        return max(self.ranks) + 1

    def leq(self, i, j):
        return self.ranks[i] <= self.ranks[j]

    def lt(self, i, j):
        return self.ranks[i] < self.ranks[j]

    def eq(self, i, j):
        return self.ranks[i] == self.ranks[j]

    @property
    def is_linear_order(self):
        return len(set(self.ranks)) == len(self.ranks)

    def classes(self):
        """The =-classes, as tuples of labels, in rank order."""
        out = [[] for _ in range(self.num_classes)]
        for i, r in enumerate(self.ranks):
            out[r].append(i)
        return tuple(tuple(c) for c in out)

    def enumeration(self):
        """Canonical nondecreasing listing: by (rank, label)."""
        return tuple(sorted(range(self.n), key=lambda i: (self.ranks[i], i)))

    def comparable_pairs(self):
        """All (i, j) with i <= j, including diagonal pairs."""
        return [
            (i, j)
            for i in range(self.n)
            for j in range(self.n)
            if self.leq(i, j)
        ]

    def __eq__(self, other):
        if not isinstance(other, LinPreorder):
            return NotImplemented
        return self.ranks == other.ranks

    def __hash__(self):
        return hash(self.ranks)

    def __repr__(self):
        return f"{type(self).__name__}({list(self.ranks)})"

    def to_json(self):
        return {"n": self.n, "rank": list(self.ranks)}

    @staticmethod
    def from_json(data):
        ranks = data["rank"]
        if len(ranks) != data["n"]:
            raise ValueError("rank vector length disagrees with n")
        p = LinPreorder(ranks)
        return LinOrder(ranks) if p.is_linear_order else p


class LinOrder(LinPreorder):
    """A linear preorder whose rank vector is a bijection onto 0..n-1."""

    __slots__ = ()

    def __init__(self, ranks):
        super().__init__(ranks)
        if not self.is_linear_order:
            raise ValueError("rank vector of a linear order must be injective")

    @staticmethod
    def standard(n):
        """The order 0 < 1 < ... < n-1."""
        return LinOrder(range(n))

    def position(self, i):
        return self.ranks[i]

    def by_position(self, p):
        """The label at position p (inverse of rank)."""
        return self.enumeration()[p]


def enumerate_linear_preorders(n) -> list:
    """All linear preorders on labels 0..n-1, one canonical representative
    each, sorted lexicographically by rank vector."""
    if n < 1:
        raise ValueError("preorders are nonempty; n must be >= 1")
    found = []
    for ranks in itertools.product(range(n), repeat=n):
        image = set(ranks)
        if image != set(range(max(ranks) + 1)):
            continue
        found.append(ranks)
    found.sort()
    return [
        LinOrder(r) if len(set(r)) == len(r) else LinPreorder(r) for r in found
    ]


class OrderMorphism:
    """A nondecreasing, essentially surjective map of linear preorders."""

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source, target, mapping):
        mapping = tuple(int(v) for v in mapping)
        if len(mapping) != source.n:
            raise ValueError("mapping length must equal source size")
        if any(not (0 <= v < target.n) for v in mapping):
            raise ValueError("mapping image must lie in the target labels")
        for i in range(source.n):
            for j in range(source.n):
                if source.leq(i, j) and not target.leq(mapping[i], mapping[j]):
                    raise ValueError(
                        f"not nondecreasing: {i} <= {j} but "
                        f"{mapping[i]} !<= {mapping[j]}"
                    )
        hit = {target.ranks[v] for v in mapping}
        if hit != set(range(target.num_classes)):
            raise ValueError("not essentially surjective")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "mapping", mapping)

    def __setattr__(self, name, value):
        raise AttributeError("OrderMorphism is immutable")

    def __call__(self, i):
        return self.mapping[i]

    @property
    def is_surjective(self):
        return set(self.mapping) == set(range(self.target.n))

    @staticmethod
    def identity(base):
        return OrderMorphism(base, base, range(base.n))

    def then(self, other):
        """other o self (apply self first)."""
        if other.source != self.target:
            raise ValueError("morphisms not composable")
        return OrderMorphism(
            self.source, other.target, [other.mapping[v] for v in self.mapping]
        )

    def fiber(self, j):
        return tuple(i for i in range(self.source.n) if self.mapping[i] == j)

    def __eq__(self, other):
        if not isinstance(other, OrderMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.mapping == other.mapping
        )

    def __hash__(self):
        return hash((self.source.ranks, self.target.ranks, self.mapping))

    def __repr__(self):
        return f"OrderMorphism({list(self.mapping)})"

    def to_json(self):
        return {"map": list(self.mapping)}


def compose(g, f):
    """g o f."""
    return f.then(g)


def quotient(p: LinPreorder):
    """The linear order on =-classes of p and the canonical projection."""
    q = LinOrder(range(p.num_classes))
    proj = OrderMorphism(p, q, p.ranks)
    return q, proj


def enumerate_surjections(source: LinOrder, target: LinOrder) -> list:
    """All monotone surjections source -> target (empty if |I| < |J|)."""
    if source.n < target.n:
        return []
    out = []
    for mapping in itertools.product(range(target.n), repeat=source.n):
        if set(mapping) != set(range(target.n)):
            continue
        ok = True
        for i in range(source.n):
            for j in range(source.n):
                if source.leq(i, j) and not target.leq(mapping[i], mapping[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(OrderMorphism(source, target, mapping))
    return out


class ConvexEquiv:
    """An equivalence relation on a preordered base whose classes are
    convex: i <= j <= k and i ~ k forces i ~ j ~ k."""

    __slots__ = ("base", "classes")

    def __init__(self, base, classes):
        seen = []
        for c in classes:
            seen.extend(c)
        if sorted(seen) != list(range(base.n)):
            raise ValueError("classes must partition the labels")
        index = {}
        for c in classes:
            for i in c:
                index[i] = frozenset(c)
        for i in range(base.n):
            for j in range(base.n):
                for k in range(base.n):
                    if base.leq(i, j) and base.leq(j, k) and index[i] == index[k]:
                        if index[j] != index[i]:
                            raise ValueError(
                                f"not convex at {i} <= {j} <= {k}"
                            )
        enum = base.enumeration()
        pos = {lab: p for p, lab in enumerate(enum)}
        norm = tuple(
            tuple(sorted(c, key=lambda i: pos[i]))
            for c in sorted((tuple(c) for c in classes), key=lambda c: min(pos[i] for i in c))
        )
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "classes", norm)

    def __setattr__(self, name, value):
        raise AttributeError("ConvexEquiv is immutable")

    @staticmethod
    def discrete(base):
        return ConvexEquiv(base, [(i,) for i in range(base.n)])

    @staticmethod
    def indiscrete(base):
        return ConvexEquiv(base, [tuple(range(base.n))])

    def class_index(self, i):
        for a, c in enumerate(self.classes):
            if i in c:
                return a
        raise KeyError(i)

    def relates(self, i, j):
        return self.class_index(i) == self.class_index(j)

    def refines(self, other):
        """self <= other in the refinement order: i ~self j => i ~other j."""
        if self.base != other.base:
            raise ValueError("refinement compares relations on one base")
        return all(
            set(c) <= set(other.classes[other.class_index(c[0])])
            for c in self.classes
        )

    def quotient(self):
        """The linear order on classes and the projection morphism."""
        q = LinOrder(range(len(self.classes)))
        mapping = [0] * self.base.n
        for a, c in enumerate(self.classes):
            for i in c:
                mapping[i] = a
        return q, OrderMorphism(self.base, q, mapping)

    def __eq__(self, other):
        if not isinstance(other, ConvexEquiv):
            return NotImplemented
        return self.base == other.base and self.classes == other.classes

    def __hash__(self):
        return hash((self.base.ranks, self.classes))

    def __repr__(self):
        return f"ConvexEquiv({[list(c) for c in self.classes]})"


def enumerate_convex_equivalences(base) -> list:
    """All convex equivalence relations on base, ordered from indiscrete
    (one class) to discrete (all singletons) by cut pattern.

    The refinement order is `ConvexEquiv.refines`; the discrete relation is
    the bottom, the indiscrete relation the top.
    """
    # Classes must be unions of =-classes cut along the quotient order, so
    # enumerate cut patterns between consecutive quotient classes.
    qclasses = base.classes()
    q = len(qclasses)
    out = []
    for mask in range(2 ** (q - 1)):
        blocks = []
        current = list(qclasses[0])
        for b in range(1, q):
            if mask & (1 << (b - 1)):
                blocks.append(tuple(current))
                current = list(qclasses[b])
            else:
                current.extend(qclasses[b])
        blocks.append(tuple(current))
        out.append(ConvexEquiv(base, blocks))
    return out


def preimage_equiv(f: OrderMorphism, rel: ConvexEquiv) -> ConvexEquiv:
    """Pull a convex relation on the target back along f."""
    if rel.base != f.target:
        raise ValueError("relation must live on the target of f")
    groups = {}
    for i in range(f.source.n):
        groups.setdefault(rel.class_index(f.mapping[i]), []).append(i)
    return ConvexEquiv(f.source, list(groups.values()))


def induced_quotient_map(fine: ConvexEquiv, coarse: ConvexEquiv) -> OrderMorphism:
    """For fine <= coarse, the surjection base/fine -> base/coarse."""
    if not fine.refines(coarse):
        raise ValueError("first relation must refine the second")
    qf = fine.quotient()[0]
    qc = coarse.quotient()[0]
    mapping = [coarse.class_index(c[0]) for c in fine.classes]
    return OrderMorphism(qf, qc, mapping)


def concatenate_orders(left: LinOrder, right: LinOrder) -> LinOrder:
    """Disjoint union with every element of left below every element of
    right; left keeps labels 0..|I|-1, right is shifted by |I|."""
    ranks = [left.ranks[i] for i in range(left.n)]
    ranks += [right.ranks[j] + left.n for j in range(right.n)]
    return LinOrder(ranks)


class Amalgam:
    """A linear preorder on I ⊔ J restricting nondecreasingly and
    essentially surjectively to both factors.

    Elements of I keep labels 0..|I|-1; elements of J get |I|..|I|+|J|-1.
    """

    __slots__ = ("left", "right", "preorder")

    def __init__(self, left: LinOrder, right: LinOrder, preorder: LinPreorder):
        if preorder.n != left.n + right.n:
            raise ValueError("amalgam must live on the disjoint union")
        for base, offset in ((left, 0), (right, left.n)):
            for i in range(base.n):
                for j in range(base.n):
                    if base.leq(i, j) and not preorder.leq(i + offset, j + offset):
                        raise ValueError("inclusion is not nondecreasing")
            hit = {preorder.ranks[i + offset] for i in range(base.n)}
            if hit != set(range(preorder.num_classes)):
                raise ValueError("inclusion is not essentially surjective")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "preorder", preorder)

    def __setattr__(self, name, value):
        raise AttributeError("Amalgam is immutable")

    @property
    def n(self):
        return self.preorder.n

    def leq_amalgam(self, other) -> bool:
        """self <= other iff the identity on I ⊔ J is nondecreasing from
        self.preorder to other.preorder."""
        a, b = self.preorder, other.preorder
        return all(
            b.leq(i, j)
            for i in range(a.n)
            for j in range(a.n)
            if a.leq(i, j)
        )

    def join(self, other) -> "Amalgam":
        """Least upper bound: transitive closure of the union relation."""
        n = self.n
        rel = [
            [
                self.preorder.leq(i, j) or other.preorder.leq(i, j)
                for j in range(n)
            ]
            for i in range(n)
        ]
        for k in range(n):
            for i in range(n):
                if rel[i][k]:
                    row_k = rel[k]
                    row_i = rel[i]
                    for j in range(n):
                        if row_k[j]:
                            row_i[j] = True
        return Amalgam(self.left, self.right, preorder_from_relation(rel))

    def __eq__(self, other):
        if not isinstance(other, Amalgam):
            return NotImplemented
        return (
            self.left == other.left
            and self.right == other.right
            and self.preorder == other.preorder
        )

    def __hash__(self):
        return hash((self.left.ranks, self.right.ranks, self.preorder.ranks))

    def __repr__(self):
        return f"Amalgam({list(self.preorder.ranks)})"

    def to_json(self):
        return {
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "preorder": self.preorder.to_json(),
        }


def preorder_from_relation(rel) -> LinPreorder:
    """Build a LinPreorder from a total transitive boolean matrix."""
    n = len(rel)
    for i in range(n):
        for j in range(n):
            if not (rel[i][j] or rel[j][i]):
                raise ValueError("relation is not total")
    # rank = number of strictly-below classes
    reps = []
    cls = [None] * n
    for i in range(n):
        for r in reps:
            if rel[i][r] and rel[r][i]:
                cls[i] = cls[r]
                break
        else:
            cls[i] = len(reps)
            reps.append(i)
    below = [0] * len(reps)
    for a, ra in enumerate(reps):
        below[a] = sum(
            1 for rb in reps if rel[rb][ra] and not rel[ra][rb]
        )
    return LinPreorder([below[cls[i]] for i in range(n)])


def enumerate_amalgams(left: LinOrder, right: LinOrder) -> list:
    """All amalgams of (left, right), sorted by rank vector.

    Brute force over linear preorders on the disjoint union, filtered by
    the two inclusion invariants.
    """
    out = []
    for p in enumerate_linear_preorders(left.n + right.n):
        try:
            out.append(Amalgam(left, right, p))
        except ValueError:
            continue
    return out
