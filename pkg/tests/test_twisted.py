import pytest

from brokenlines.orders import ConvexEquiv, LinOrder
from brokenlines.twisted import (
    TwFunctor,
    TwMorphism,
    TwObject,
    algebra_to_functor,
    comparison_morphism,
    day_assoc_check,
    day_convolution,
    day_square,
    factorizable_check,
    flat,
    functor_to_algebra,
    point,
    roundtrip_natural_iso,
    sharp,
    tw_enumerate,
    tw_restrict,
    tw_star,
    valid_cuts,
)
from brokenlines.vect import (
    LinMap,
    VectObject,
    matrix_algebra_2x2,
    nilpotent_upper3,
    rational_algebra,
    zero_algebra,
)


# ------------------------------------------------------------ enumeration


def test_enumerate_sizes():
    objects, _ = tw_enumerate(1)
    assert len(objects) == 1
    objects, _ = tw_enumerate(2)
    assert len(objects) == 3  # singleton, pair discrete, pair indiscrete
    for n in (3, 4):
        objects, _ = tw_enumerate(n)
        assert len(objects) == sum(2 ** (k - 1) for k in range(1, n + 1))


def test_composition_closed():
    objects, morphisms = tw_enumerate(3)
    pool = set(morphisms)
    for f in morphisms:
        for g in morphisms:
            if g.source == f.target:
                assert f.then(g) in pool


def test_comparison_morphism_exists_for_every_relation():
    objects, _ = tw_enumerate(3)
    for x in objects:
        cmp_map = comparison_morphism(x)
        assert cmp_map.source == sharp(x.n)
        assert cmp_map.target == x


def test_reflection_condition_enforced():
    two = LinOrder.standard(2)
    src = TwObject(two, ConvexEquiv.discrete(two))
    tgt = TwObject(two, ConvexEquiv.indiscrete(two))
    # target identifies 0 ~ 1 but the source does not: rejected
    with pytest.raises(ValueError):
        TwMorphism(src, tgt, [0, 1])
    # the other direction is fine
    TwMorphism(tgt, src, [0, 1])


# ------------------------------------------------------------------ star


def test_star_of_singletons_is_discrete_pair():
    assert tw_star(point(), point()) == flat(2)


def test_sharp_star_interaction():
    # (I*J)# has one class; I# * J# has two: the comparison is bijective
    # on labels but not an isomorphism
    lhs = sharp(3)  # (I*J)# for |I|=1, |J|=2
    rhs = tw_star(sharp(1), sharp(2))
    assert lhs.order == rhs.order
    assert len(lhs.rel.classes) == 1
    assert len(rhs.rel.classes) == 2
    assert lhs != rhs


def test_star_preserves_convexity_and_associates():
    objects, _ = tw_enumerate(2)
    for x in objects:
        for y in objects:
            glued = tw_star(x, y)
            ConvexEquiv(glued.order, glued.rel.classes)  # re-validate
            for z in objects:
                assert tw_star(tw_star(x, y), z) == tw_star(x, tw_star(y, z))


def test_valid_cuts_respect_classes():
    three = LinOrder.standard(3)
    x = TwObject(three, ConvexEquiv(three, [(0, 1), (2,)]))
    assert valid_cuts(x) == [2]
    assert valid_cuts(sharp(3)) == []
    assert valid_cuts(flat(3)) == [1, 2]


def test_restriction_relabels():
    three = LinOrder.standard(3)
    x = TwObject(three, ConvexEquiv(three, [(0,), (1, 2)]))
    sub = tw_restrict(x, 1, 3)
    assert sub.n == 2
    assert sub.rel.classes == ((0, 1),)


# ----------------------------------------------------- algebra functors


def test_zero_algebra_actions_vanish():
    functor = algebra_to_functor(zero_algebra(1), 3)
    _, morphisms = tw_enumerate(3)
    for f in morphisms:
        injective = len(set(f.mapping)) == f.source.n
        m = functor.act(f)
        if injective:
            assert m.is_identity()
        else:
            assert all(x == 0 for row in m.rows for x in row)


def test_rational_algebra_merge_is_multiplication():
    functor = algebra_to_functor(rational_algebra(), 2)
    merge = TwMorphism(sharp(2), point(), [0, 0])
    # dims are all 1; the merge is the 1x1 multiplication [q1 (x) q2 -> q1q2]
    assert functor.act(merge).rows == ((1,),)


def test_nilpotent_merge_action():
    functor = algebra_to_functor(nilpotent_upper3(), 2)
    merge = TwMorphism(sharp(2), point(), [0, 0])
    m = functor.act(merge)
    # basis order e12, e13, e23; column (0, 2) is e12 (x) e23 -> e13
    col_forward = 0 * 3 + 2
    assert [row[col_forward] for row in m.rows] == [0, 1, 0]
    # order-reversed factor e23 (x) e12 multiplies to zero
    col_reverse = 2 * 3 + 0
    assert [row[col_reverse] for row in m.rows] == [0, 0, 0]


def test_algebra_functors_validate():
    for make in (zero_algebra, nilpotent_upper3, rational_algebra):
        functor = algebra_to_functor(make(), 3)
        assert functor.validate() is None
        assert functor.is_fun0()
        assert functor.is_monoidal()


# -------------------------------------------------------------- roundtrip


def test_roundtrip_structure_constants():
    for make in (zero_algebra, nilpotent_upper3, matrix_algebra_2x2):
        algebra = make()
        functor = algebra_to_functor(algebra, 3)
        assert functor_to_algebra(functor) == algebra


def test_constant_dim1_functor_gives_rational_algebra():
    functor = algebra_to_functor(rational_algebra(), 3)
    back = functor_to_algebra(functor)
    assert back.dim == 1
    assert back.c[0][0][0] == 1


def test_reverse_roundtrip_natural_iso():
    for make in (zero_algebra, nilpotent_upper3):
        functor = algebra_to_functor(make(), 3)
        eta = roundtrip_natural_iso(functor)
        objects, _ = tw_enumerate(3)
        assert set(eta) == set(objects)
        assert all(m.is_invertible() for m in eta.values())


def test_functor_to_algebra_rejects_low_truncation():
    functor = algebra_to_functor(rational_algebra(), 2)
    with pytest.raises(ValueError):
        functor_to_algebra(functor)


def test_functor_to_algebra_requires_invertible_comparison():
    base = algebra_to_functor(zero_algebra(1), 3)
    # break the Fun_0 condition: zero out a comparison map
    action = dict(base.action)
    bad = comparison_morphism(flat(2))
    action[bad] = LinMap.zero(base.value[sharp(2)], base.value[flat(2)])
    # fix functoriality by zeroing everything out of flat(2) too; simpler:
    # construct without checks and confirm the error path fires
    broken = TwFunctor(3, base.value, action, base.lax, check=False)
    with pytest.raises(ValueError):
        functor_to_algebra(broken)


# --------------------------------------------------------- day convolution


@pytest.fixture(scope="module")
def const_functor():
    return algebra_to_functor(rational_algebra(), 4)


@pytest.fixture(scope="module")
def nil_functor():
    return algebra_to_functor(nilpotent_upper3(), 4)


def test_day_zero_on_indiscrete(const_functor):
    conv = day_convolution(const_functor, const_functor, 4)
    for n in (2, 3, 4):
        assert conv.value[sharp(n)] == VectObject(0)


def test_day_zero_on_singleton(const_functor):
    conv = day_convolution(const_functor, const_functor, 4)
    assert conv.value[point()] == VectObject(0)


def test_day_dims_constant_functor(const_functor):
    conv = day_convolution(const_functor, const_functor, 4)
    assert conv.value[flat(3)].dim == 2  # split after 1 or after 2
    assert conv.value[flat(4)].dim == 3


def test_day_dims_with_relations(nil_functor):
    conv = day_convolution(nil_functor, nil_functor, 4)
    three = LinOrder.standard(3)
    x = TwObject(three, ConvexEquiv(three, [(0, 1), (2,)]))
    # only the cut after position 2 survives: dim 9 * 3
    assert conv.value[x].dim == 27
    assert conv.value[flat(3)].dim == 3 * 9 + 9 * 3


def test_day_functor_is_a_functor(nil_functor):
    conv = day_convolution(nil_functor, nil_functor, 3)
    assert conv.validate() is None


def test_day_nonempty_on_discrete_fun0(nil_functor):
    conv = day_convolution(nil_functor, nil_functor, 4)
    for n in (2, 3, 4):
        assert conv.value[flat(n)].dim > 0


def test_day_assoc_zero_factor(const_functor):
    objects, _ = tw_enumerate(3)
    zero_values = {x: VectObject(0) for x in objects}
    _, morphisms = tw_enumerate(3)
    zero_actions = {
        f: LinMap.zero(VectObject(0), VectObject(0)) for f in morphisms
    }
    zero_f = TwFunctor(3, zero_values, zero_actions, check=False)
    lhs = day_convolution(day_convolution(zero_f, const_functor, 3), const_functor, 3)
    rhs = day_convolution(zero_f, day_convolution(const_functor, const_functor, 3), 3)
    for x in objects:
        assert lhs.value[x] == VectObject(0)
        assert rhs.value[x] == VectObject(0)


def test_day_assoc_constant(const_functor):
    report = day_assoc_check(const_functor, const_functor, const_functor, 4)
    assert report["ok"], report["mismatches"]
    # the unique 3-part decomposition of a discrete 3-element object
    conv2 = day_convolution(
        day_convolution(const_functor, const_functor, 4), const_functor, 4
    )
    assert conv2.value[flat(3)].dim == 1


def test_day_assoc_nilpotent(nil_functor):
    report = day_assoc_check(nil_functor, nil_functor, nil_functor, 4)
    assert report["ok"], report["mismatches"]


def test_day_assoc_mixed(const_functor, nil_functor):
    report = day_assoc_check(const_functor, nil_functor, const_functor, 3)
    assert report["ok"], report["mismatches"]


# ------------------------------------------------------- factorizability


def test_algebra_functor_is_factorizable(nil_functor):
    assert factorizable_check(nil_functor)


def test_planted_counterexample_fails():
    base = algebra_to_functor(zero_algebra(1), 3)
    lax = dict(base.lax)
    lax[(point(), point())] = LinMap.zero(
        VectObject(1), base.value[flat(2)]
    )
    planted = TwFunctor(3, base.value, base.action, lax, check=True)
    assert planted.validate() is None  # still a valid lax functor
    assert not factorizable_check(planted)


def test_day_square_not_factorizable(nil_functor):
    square = day_square(nil_functor, 4)
    assert square.validate() is None
    assert not factorizable_check(square)


def test_day_square_of_constant_not_factorizable(const_functor):
    square = day_square(const_functor, 3)
    assert square.validate() is None
    assert not factorizable_check(square)


# -------------------------------------------------------------- adjunction


def test_sharp_left_adjoint_to_forgetful():
    from brokenlines.orders import enumerate_surjections

    objects, morphisms = tw_enumerate(3)
    for x in objects:
        for n in (1, 2, 3):
            order = LinOrder.standard(n)
            hom_tw = [
                f
                for f in morphisms
                if f.source == sharp(n) and f.target == x
            ]
            hom_lin = enumerate_surjections(order, x.order)
            assert {f.mapping for f in hom_tw} == {g.mapping for g in hom_lin}
    # triangle identities as literal morphism equalities
    for n in (1, 2, 3):
        unit_sharp = TwMorphism.identity(sharp(n))  # unit's image under sharp
        counit = comparison_morphism(sharp(n))
        assert unit_sharp.then(counit) == TwMorphism.identity(sharp(n))
    for x in objects:
        counit = comparison_morphism(x)
        # underlying map of the counit composed with the unit is identity
        assert counit.mapping == tuple(range(x.n))
