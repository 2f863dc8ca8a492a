"""The twisted arrow category of linear orders and monotone surjections,
its concatenation product, truncated functors into exact vector spaces,
Day convolution, and the factorizable-sheaf / nonunital-algebra roundtrip.

Objects are pairs (I, ~) of a standard linear order with a convex
equivalence relation; a morphism is a monotone surjection that reflects
the target relation into the source relation.  Functors are truncated at
a size N; truncation is exact degree by degree.
"""

from __future__ import annotations

from functools import lru_cache

from .orders import (
    ConvexEquiv,
    LinOrder,
    OrderMorphism,
    enumerate_convex_equivalences,
    enumerate_surjections,
)
from .vect import LinMap, NonunitalAlgebra, VectObject, direct_sum, tensor, tensor_all

_ZERO_OBJ = VectObject(0)


class TwObject:
    """A pair (standard linear order, convex equivalence relation)."""

    __slots__ = ("order", "rel")

    def __init__(self, order: LinOrder, rel: ConvexEquiv):
        if order.ranks != tuple(range(order.n)):
            raise ValueError("twisted-arrow objects use standard orders")
        if rel.base != order:
            raise ValueError("relation must live on the given order")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "rel", rel)

    def __setattr__(self, name, value):
        raise AttributeError("TwObject is immutable")

    @property
    def n(self):
        return self.order.n

    def __eq__(self, other):
        if not isinstance(other, TwObject):
            return NotImplemented
        return self.order == other.order and self.rel == other.rel

    def __hash__(self):
        return hash((self.order.ranks, self.rel.classes))

    def __repr__(self):
        return f"TwObject(n={self.n}, classes={[list(c) for c in self.rel.classes]})"


def sharp(n) -> TwObject:
    """The order 0 < ... < n-1 with the indiscrete relation."""
    order = LinOrder.standard(n)
    return TwObject(order, ConvexEquiv.indiscrete(order))


def flat(n) -> TwObject:
    """The order 0 < ... < n-1 with the discrete relation."""
    order = LinOrder.standard(n)
    return TwObject(order, ConvexEquiv.discrete(order))


def point() -> TwObject:
    return sharp(1)


class TwMorphism:
    """A monotone surjection reflecting the target relation: if
    f(i) ~ f(i') in the target then i ~ i' in the source."""

    __slots__ = ("source", "target", "f")

    def __init__(self, source: TwObject, target: TwObject, mapping):
        f = OrderMorphism(source.order, target.order, mapping)
        if not f.is_surjective:
            raise ValueError("underlying map must be surjective")
        for i in range(source.n):
            for j in range(source.n):
                if target.rel.relates(f(i), f(j)) and not source.rel.relates(i, j):
                    raise ValueError(
                        f"relation not reflected at ({i},{j})"
                    )
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "f", f)

    def __setattr__(self, name, value):
        raise AttributeError("TwMorphism is immutable")

    @property
    def mapping(self):
        return self.f.mapping

    def __call__(self, i):
        return self.f.mapping[i]

    @staticmethod
    def identity(x: TwObject):
        return TwMorphism(x, x, range(x.n))

    def then(self, other: "TwMorphism") -> "TwMorphism":
        if other.source != self.target:
            raise ValueError("morphisms not composable")
        return TwMorphism(
            self.source, other.target, [other(v) for v in self.mapping]
        )

    def __eq__(self, other):
        if not isinstance(other, TwMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.mapping == other.mapping
        )

    def __hash__(self):
        return hash((hash(self.source), hash(self.target), self.mapping))

    def __repr__(self):
        return f"TwMorphism({list(self.mapping)})"


def tw_star(x: TwObject, y: TwObject) -> TwObject:
    """Concatenation: orders concatenate, relations union with no cross
    identifications."""
    order = LinOrder.standard(x.n + y.n)
    classes = [tuple(c) for c in x.rel.classes]
    classes += [tuple(i + x.n for i in c) for c in y.rel.classes]
    return TwObject(order, ConvexEquiv(order, classes))


def star_morphism(f: TwMorphism, g: TwMorphism) -> TwMorphism:
    mapping = list(f.mapping) + [v + f.target.n for v in g.mapping]
    return TwMorphism(tw_star(f.source, g.source), tw_star(f.target, g.target), mapping)


@lru_cache(maxsize=None)
def tw_enumerate(N):
    """All objects of size <= N and all morphisms between them (on
    canonical labels).  Returns (objects, morphisms)."""
    if N < 1:
        raise ValueError("truncation must be at least 1")
    objects = []
    for n in range(1, N + 1):
        order = LinOrder.standard(n)
        for rel in enumerate_convex_equivalences(order):
            objects.append(TwObject(order, rel))
    morphisms = []
    for x in objects:
        for y in objects:
            if x.n < y.n:
                continue
            for f in enumerate_surjections(x.order, y.order):
                try:
                    morphisms.append(TwMorphism(x, y, f.mapping))
                except ValueError:
                    continue
    return tuple(objects), tuple(morphisms)


def comparison_morphism(x: TwObject) -> TwMorphism:
    """The canonical map sharp(n) -> x over the identity."""
    return TwMorphism(sharp(x.n), x, range(x.n))


def tw_restrict(x: TwObject, lo, hi):
    """The sub-object on positions lo..hi-1, relabeled to 0..hi-lo-1."""
    order = LinOrder.standard(hi - lo)
    classes = []
    for c in x.rel.classes:
        part = tuple(i - lo for i in c if lo <= i < hi)
        if part:
            classes.append(part)
    return TwObject(order, ConvexEquiv(order, classes))


def valid_cuts(x: TwObject):
    """Positions k where I splits as (first k) ⊔ (rest) with both parts
    nonempty and no relation class straddling the cut."""
    cuts = []
    for k in range(1, x.n):
        if all(max(c) < k or min(c) >= k for c in x.rel.classes):
            cuts.append(k)
    return cuts


class TwFunctor:
    """A truncated functor on the twisted arrow category, with optional
    lax monoidal structure maps.

    value: TwObject -> VectObject for all objects of size <= N;
    action: TwMorphism -> LinMap for all enumerated morphisms;
    lax: (x, y) -> LinMap value(x) (x) value(y) -> value(x * y) for
    |x| + |y| <= N, or None for a bare functor.
    """

    __slots__ = ("N", "value", "action", "lax")

    def __init__(self, N, value, action, lax=None, check=True):
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "value", dict(value))
        object.__setattr__(self, "action", dict(action))
        object.__setattr__(self, "lax", None if lax is None else dict(lax))
        if check:
            problem = self.validate()
            if problem is not None:
                raise ValueError(problem)

    def __setattr__(self, name, value):
        raise AttributeError("TwFunctor is immutable")

    def act(self, f: TwMorphism) -> LinMap:
        return self.action[f]

    def validate(self):
        """None, or a message naming the first failed functor axiom."""
        objects, morphisms = tw_enumerate(self.N)
        for x in objects:
            if x not in self.value:
                return f"missing value at {x}"
            if TwMorphism.identity(x) not in self.action:
                return f"missing identity action at {x}"
            if self.action[TwMorphism.identity(x)] != LinMap.identity(self.value[x]):
                return f"identity acts non-identically at {x}"
        for f in morphisms:
            if f not in self.action:
                return f"missing action at {f}"
            m = self.action[f]
            if m.source != self.value[f.source] or m.target != self.value[f.target]:
                return f"action at {f} has wrong shape"
        for f in morphisms:
            for g in morphisms:
                if g.source == f.target:
                    if self.action[f.then(g)] != self.action[g] @ self.action[f]:
                        return f"functoriality fails at {g} o {f}"
        if self.lax is not None:
            problem = self._validate_lax(objects, morphisms)
            if problem is not None:
                return problem
        return None

    def _validate_lax(self, objects, morphisms):
        for x in objects:
            for y in objects:
                if x.n + y.n > self.N:
                    continue
                if (x, y) not in self.lax:
                    return f"missing lax map at ({x}, {y})"
                u = self.lax[(x, y)]
                want_src = tensor(self.value[x], self.value[y])
                if u.source != want_src or u.target != self.value[tw_star(x, y)]:
                    return f"lax map at ({x}, {y}) has wrong shape"
        # naturality of the structure maps
        for f in morphisms:
            for g in morphisms:
                if f.source.n + g.source.n > self.N:
                    continue
                lhs = self.lax[(f.target, g.target)] @ tensor(
                    self.action[f], self.action[g]
                )
                rhs = self.action[star_morphism(f, g)] @ self.lax[
                    (f.source, g.source)
                ]
                if lhs != rhs:
                    return f"lax naturality fails at ({f}, {g})"
        # associativity coherence of the structure maps
        for x in objects:
            for y in objects:
                for z in objects:
                    if x.n + y.n + z.n > self.N:
                        continue
                    left = self.lax[(tw_star(x, y), z)] @ tensor(
                        self.lax[(x, y)], LinMap.identity(self.value[z])
                    )
                    right = self.lax[(x, tw_star(y, z))] @ tensor(
                        LinMap.identity(self.value[x]), self.lax[(y, z)]
                    )
                    if left != right:
                        return f"lax associativity fails at ({x}, {y}, {z})"
        return None

    def comparison(self, x: TwObject) -> LinMap:
        """The Fun_0 comparison map F(sharp) -> F(x)."""
        return self.action[comparison_morphism(x)]

    def is_fun0(self) -> bool:
        objects, _ = tw_enumerate(self.N)
        return all(self.comparison(x).is_invertible() for x in objects)

    def is_monoidal(self) -> bool:
        if self.lax is None:
            return False
        return all(u.is_invertible() for u in self.lax.values())


def algebra_to_functor(algebra: NonunitalAlgebra, N) -> TwFunctor:
    """The strictly monoidal functor of an algebra: value A^(x)|I| on
    every relation, action multiplying each fiber in order, identity lax
    maps."""
    if algebra.validate() is not None:
        raise ValueError("structure constants are not associative")
    a = algebra.space
    objects, morphisms = tw_enumerate(N)
    value = {x: tensor_all([a] * x.n) for x in objects}
    action = {}
    for f in morphisms:
        factors = [
            _iterated_mult(algebra, len(f.f.fiber(j))) for j in range(f.target.n)
        ]
        action[f] = tensor_all(factors)
    lax = {}
    for x in objects:
        for y in objects:
            if x.n + y.n <= N:
                lax[(x, y)] = LinMap.identity(value[tw_star(x, y)])
    return TwFunctor(N, value, action, lax, check=False)


def _iterated_mult(algebra: NonunitalAlgebra, k) -> LinMap:
    """Left-fold multiplication A^(x)k -> A."""
    if k < 1:
        raise ValueError("fibers of a surjection are nonempty")
    out = LinMap.identity(algebra.space)
    for _ in range(k - 1):
        out = algebra.multiplication() @ tensor(out, LinMap.identity(algebra.space))
    return out


def functor_to_algebra(functor: TwFunctor) -> NonunitalAlgebra:
    """Recover the algebra of a monoidal Fun_0 functor from its value on
    the one-point object, certifying associativity via size-3 data."""
    if functor.N < 3:
        raise ValueError("truncation must be at least 3")
    if functor.lax is None or not functor.is_monoidal():
        raise ValueError("functor must be monoidal (invertible lax maps)")
    pt = point()
    cmp2 = functor.comparison(flat(2))
    if not cmp2.is_invertible():
        raise ValueError("Fun_0 comparison map is not invertible")
    merge2 = TwMorphism(sharp(2), pt, [0, 0])
    mult = functor.act(merge2) @ cmp2.inverse() @ functor.lax[(pt, pt)]

    # associativity certificate from size-3 functoriality
    cmp3 = functor.comparison(flat(3))
    if not cmp3.is_invertible():
        raise ValueError("Fun_0 comparison map is not invertible")
    merge3 = TwMorphism(sharp(3), pt, [0, 0, 0])
    fold3 = functor.lax[(flat(2), pt)] @ tensor(
        functor.lax[(pt, pt)], LinMap.identity(functor.value[pt])
    )
    mu3 = functor.act(merge3) @ cmp3.inverse() @ fold3
    ident = LinMap.identity(functor.value[pt])
    if mult @ tensor(mult, ident) != mu3 or mult @ tensor(ident, mult) != mu3:
        raise ValueError("functor data is not associative")

    d = functor.value[pt].dim
    c = [
        [[mult.rows[k][i * d + j] for j in range(d)] for i in range(d)]
        for k in range(d)
    ]
    algebra = NonunitalAlgebra(d, c)
    if algebra.validate() is not None:
        raise ValueError("recovered constants fail associativity")
    return algebra


def roundtrip_natural_iso(functor: TwFunctor) -> dict:
    """Explicit natural isomorphism algebra_to_functor(functor_to_algebra(F)) -> F.

    Returns {TwObject: invertible LinMap}; raises if any naturality
    square or monoidal compatibility fails.
    """
    algebra = functor_to_algebra(functor)
    rebuilt = algebra_to_functor(algebra, functor.N)
    objects, morphisms = tw_enumerate(functor.N)

    pt = point()
    folds = {1: LinMap.identity(functor.value[pt])}
    for n in range(2, functor.N + 1):
        folds[n] = functor.lax[(flat(n - 1), pt)] @ tensor(
            folds[n - 1], LinMap.identity(functor.value[pt])
        )
    eta = {}
    for x in objects:
        cmp_flat = functor.comparison(flat(x.n))
        eta[x] = functor.comparison(x) @ cmp_flat.inverse() @ folds[x.n]
        if not eta[x].is_invertible():
            raise ValueError(f"component at {x} is not invertible")
    for f in morphisms:
        if eta[f.target] @ rebuilt.act(f) != functor.act(f) @ eta[f.source]:
            raise ValueError(f"naturality fails at {f}")
    for x in objects:
        for y in objects:
            if x.n + y.n > functor.N:
                continue
            lhs = eta[tw_star(x, y)] @ rebuilt.lax[(x, y)]
            rhs = functor.lax[(x, y)] @ tensor(eta[x], eta[y])
            if lhs != rhs:
                raise ValueError(f"monoidal compatibility fails at ({x},{y})")
    return eta


def day_convolution(left: TwFunctor, right: TwFunctor, N=None) -> TwFunctor:
    """Day convolution by the decomposition formula: the value on (I, ~)
    is the direct sum over downward-closed ~-invariant proper cuts of
    left(first part) (x) right(second part)."""
    if N is None:
        N = min(left.N, right.N)
    objects, morphisms = tw_enumerate(N)
    value = {}
    for x in objects:
        summands = [
            tensor(left.value[tw_restrict(x, 0, k)], right.value[tw_restrict(x, k, x.n)])
            for k in valid_cuts(x)
        ]
        value[x] = direct_sum(summands) if summands else _ZERO_OBJ
    action = {}
    for f in morphisms:
        action[f] = _day_action(left, right, value, f)
    return TwFunctor(N, value, action, lax=None, check=False)


def _day_action(left, right, value, f: TwMorphism) -> LinMap:
    x, y = f.source, f.target
    cuts_x = valid_cuts(x)
    cuts_y = valid_cuts(y)
    col_obj = [
        tensor(left.value[tw_restrict(x, 0, k)], right.value[tw_restrict(x, k, x.n)])
        for k in cuts_x
    ]
    row_obj = [
        tensor(left.value[tw_restrict(y, 0, k)], right.value[tw_restrict(y, k, y.n)])
        for k in cuts_y
    ]
    row_offsets = _offsets(row_obj)
    col_offsets = _offsets(col_obj)
    from fractions import Fraction

    rows = [
        [Fraction(0)] * value[x].dim for _ in range(value[y].dim)
    ]
    for ci, k in enumerate(cuts_x):
        kk = f(k - 1) + 1  # image cut: one past the image of the first part
        ri = cuts_y.index(kk)
        f0 = TwMorphism(
            tw_restrict(x, 0, k),
            tw_restrict(y, 0, kk),
            [f(i) for i in range(k)],
        )
        f1 = TwMorphism(
            tw_restrict(x, k, x.n),
            tw_restrict(y, kk, y.n),
            [f(i) - kk for i in range(k, x.n)],
        )
        block = tensor(left.act(f0), right.act(f1))
        r0, c0 = row_offsets[ri], col_offsets[ci]
        for r, row in enumerate(block.rows):
            for c, v in enumerate(row):
                rows[r0 + r][c0 + c] = v
    return LinMap(value[x], value[y], rows)


def _offsets(objs):
    out = []
    acc = 0
    for o in objs:
        out.append(acc)
        acc += o.dim
    return out


def day_square(functor: TwFunctor, N=None) -> TwFunctor:
    """F ⊛ F with its canonical lax structure, folded from F's own
    structure maps across the cut."""
    if functor.lax is None:
        raise ValueError("day_square needs a lax functor")
    if N is None:
        N = functor.N
    bare = day_convolution(functor, functor, N)
    objects, _ = tw_enumerate(N)
    lax = {}
    for x in objects:
        for y in objects:
            if x.n + y.n > N:
                continue
            lax[(x, y)] = _day_square_lax(functor, bare, x, y)
    return TwFunctor(N, bare.value, bare.action, lax, check=False)


def _day_square_lax(F, bare, x, y) -> LinMap:
    """(F⊛F)(x) (x) (F⊛F)(y) -> (F⊛F)(x*y), sending the summand pair
    (x0|x1), (y0|y1) to the summand (x0 | x1*y) via F's lax maps."""
    from fractions import Fraction

    xy = tw_star(x, y)
    cuts_x = valid_cuts(x)
    cuts_y = valid_cuts(y)
    cuts_xy = valid_cuts(xy)
    tgt = bare.value[xy]
    src = tensor(bare.value[x], bare.value[y])
    rows = [[Fraction(0)] * src.dim for _ in range(tgt.dim)]
    if not cuts_x or not cuts_y:
        return LinMap(src, tgt, rows)

    x_parts = [
        (tw_restrict(x, 0, k), tw_restrict(x, k, x.n)) for k in cuts_x
    ]
    y_parts = [
        (tw_restrict(y, 0, l), tw_restrict(y, l, y.n)) for l in cuts_y
    ]
    xy_summand_obj = [
        tensor(F.value[tw_restrict(xy, 0, k)], F.value[tw_restrict(xy, k, xy.n)])
        for k in cuts_xy
    ]
    row_offsets = _offsets(xy_summand_obj)
    x_summand_dims = [
        tensor(F.value[a], F.value[b]).dim for a, b in x_parts
    ]
    y_summand_dims = [
        tensor(F.value[a], F.value[b]).dim for a, b in y_parts
    ]
    x_offsets = _offsets([VectObject(d) for d in x_summand_dims])
    y_offsets = _offsets([VectObject(d) for d in y_summand_dims])
    ydim = bare.value[y].dim

    for xi, (x0, x1) in enumerate(x_parts):
        k = cuts_x[xi]
        ri = cuts_xy.index(k)  # target summand: (x0 | x1 * y)
        for yi, (y0, y1) in enumerate(y_parts):
            # F(x1) (x) F(y0) (x) F(y1) -> F(x1 * y) by folding F's lax maps
            fold = F.lax[(tw_star(x1, y0), y1)] @ tensor(
                F.lax[(x1, y0)], LinMap.identity(F.value[y1])
            )
            block = tensor(LinMap.identity(F.value[x0]), fold)
            # source coordinates: summand xi of (F⊛F)(x) tensored with
            # summand yi of (F⊛F)(y); the global column index of basis
            # vector (p, q) is (x_offset + p) * ydim + (y_offset + q)
            r0 = row_offsets[ri]
            for r, row in enumerate(block.rows):
                for c, v in enumerate(row):
                    if not v:
                        continue
                    p, q = divmod(c, y_summand_dims[yi])
                    col = (x_offsets[xi] + p) * ydim + (y_offsets[yi] + q)
                    rows[r0 + r][col] = v
    return LinMap(src, tgt, rows)


def day_assoc_check(f1: TwFunctor, f2: TwFunctor, f3: TwFunctor, N) -> dict:
    """Compare ((f1⊛f2)⊛f3) and (f1⊛(f2⊛f3)) through the canonical
    summand reindexing; the permutation must intertwine all actions."""
    lhs = day_convolution(day_convolution(f1, f2, N), f3, N)
    rhs = day_convolution(f1, day_convolution(f2, f3, N), N)
    objects, morphisms = tw_enumerate(N)

    perms = {}
    mismatches = []
    for x in objects:
        perm = _assoc_permutation(f1, f2, f3, x)
        if perm.source != lhs.value[x] or perm.target != rhs.value[x]:
            mismatches.append(("shape", repr(x)))
            continue
        perms[x] = perm
    for f in morphisms:
        if f.source not in perms or f.target not in perms:
            continue
        if perms[f.target] @ lhs.act(f) != rhs.act(f) @ perms[f.source]:
            mismatches.append(("intertwine", repr(f)))
    return {
        "objects_checked": len(perms),
        "morphisms_checked": len(morphisms),
        "mismatches": mismatches,
        "ok": not mismatches,
    }


def _assoc_permutation(f1, f2, f3, x: TwObject) -> LinMap:
    """The canonical reindexing ((f1⊛f2)⊛f3)(x) -> (f1⊛(f2⊛f3))(x).

    Both sides decompose over double cuts l < k of x into summands
    f1[0:l] (x) f2[l:k] (x) f3[k:n], but lay them out differently: on the
    left the inner direct sum sits in the left tensor factor (triple
    blocks contiguous), on the right it sits in the right factor (triple
    blocks interleaved across the f1 index).  Map basis vectors by their
    (triple, i, j, t) coordinates.
    """
    from fractions import Fraction

    cuts = valid_cuts(x)
    triples = [(l, k) for k in cuts for l in cuts if l < k]

    def dims(l, k):
        return (
            f1.value[tw_restrict(x, 0, l)].dim,
            f2.value[tw_restrict(x, l, k)].dim,
            f3.value[tw_restrict(x, k, x.n)].dim,
        )

    # left-associated layout: outer blocks by cut k, each
    # (⊕_{l<k} f1 (x) f2) (x) f3 with the sum in the left factor
    lhs_outer_off = {}
    acc = 0
    for k in cuts:
        inner = [(l, kk) for (l, kk) in triples if kk == k]
        if not inner:
            continue
        lhs_outer_off[k] = acc
        acc += sum(d1 * d2 * d3 for d1, d2, d3 in (dims(l, k) for l, _ in inner))
    lhs_total = acc

    def lhs_pos(l, k, i, j, t):
        d1, d2, d3 = dims(l, k)
        inner_off = 0
        for l2 in cuts:
            if l2 >= k:
                break
            if l2 == l:
                break
            e1, e2, _ = dims(l2, k)
            inner_off += e1 * e2
        return lhs_outer_off[k] + (inner_off + i * d2 + j) * d3 + t

    # right-associated layout: outer blocks by cut l, each
    # f1 (x) (⊕_{k>l} f2 (x) f3) with the sum in the right factor
    rhs_outer_off = {}
    rhs_inner_total = {}
    acc = 0
    for l in cuts:
        inner = [(ll, k) for (ll, k) in triples if ll == l]
        if not inner:
            continue
        d1 = dims(inner[0][0], inner[0][1])[0]
        inner_total = sum(d2 * d3 for _, d2, d3 in (dims(l, k) for _, k in inner))
        rhs_outer_off[l] = acc
        rhs_inner_total[l] = inner_total
        acc += d1 * inner_total
    rhs_total = acc

    def rhs_pos(l, k, i, j, t):
        _, d2, d3 = dims(l, k)
        inner_off = 0
        for k2 in cuts:
            if k2 <= l:
                continue
            if k2 == k:
                break
            _, e2, e3 = dims(l, k2)
            inner_off += e2 * e3
        return rhs_outer_off[l] + i * rhs_inner_total[l] + inner_off + j * d3 + t

    rows = [[Fraction(0)] * lhs_total for _ in range(rhs_total)]
    for l, k in triples:
        d1, d2, d3 = dims(l, k)
        for i in range(d1):
            for j in range(d2):
                for t in range(d3):
                    rows[rhs_pos(l, k, i, j, t)][lhs_pos(l, k, i, j, t)] = Fraction(1)
    return LinMap(VectObject(lhs_total), VectObject(rhs_total), rows)


def factorizable_check(functor: TwFunctor) -> bool:
    """True iff every structure map between discrete objects within the
    truncation is invertible; by the reduction to the discrete case this
    decides factorizability for Fun_0 functors."""
    if functor.lax is None:
        raise ValueError("factorizability concerns lax functors")
    for n in range(1, functor.N):
        for m in range(1, functor.N - n + 1):
            if not functor.lax[(flat(n), flat(m))].is_invertible():
                return False
    return True
