import random

import pytest

from brokenlines.extreal import INF, ExtReal
from brokenlines.families import build_family
from brokenlines.orders import (
    ConvexEquiv,
    LinOrder,
    OrderMorphism,
    enumerate_convex_equivalences,
    enumerate_surjections,
    preimage_equiv,
)
from brokenlines.rep import rep_from_gaps, stratum_samples
from brokenlines.sheaves import (
    GlobalSheaf,
    apply_surjection,
    evaluate_on_family,
    global_to_constructible,
    merge_surjection,
    stalk,
)
from brokenlines.vect import (
    LinMap,
    VectObject,
    nilpotent_upper3,
    rational_algebra,
    zero_algebra,
)


@pytest.fixture(scope="module")
def nil_sheaf():
    return GlobalSheaf.from_algebra(nilpotent_upper3(), 3)


def test_exchange_relations_validated_at_construction(nil_sheaf):
    # also for the other generated sheaves
    GlobalSheaf.from_algebra(zero_algebra(2), 3)
    GlobalSheaf.from_algebra(rational_algebra(), 4)


def test_bad_generators_rejected():
    # a sheaf whose merges do not satisfy the exchange relations
    v = [VectObject(1), VectObject(2), VectObject(4)]
    gen = {
        (1, 0): LinMap(v[1], v[0], [[1, 0]]),
        (2, 0): LinMap(v[2], v[1], [[1, 0, 0, 0], [0, 0, 0, 1]]),
        (2, 1): LinMap(v[2], v[1], [[0, 1, 0, 0], [0, 0, 1, 0]]),
    }
    with pytest.raises(ValueError):
        GlobalSheaf(2, v, gen)


def test_apply_surjection_identity(nil_sheaf):
    base = LinOrder.standard(3)
    f = OrderMorphism.identity(base)
    assert apply_surjection(nil_sheaf, f).is_identity()


def test_apply_surjection_single_merge(nil_sheaf):
    f = merge_surjection(1, 0)  # [1] -> [0]
    assert apply_surjection(nil_sheaf, f) == nil_sheaf.gen[(1, 0)]


def test_two_factorizations_agree(nil_sheaf):
    # [2] -> [0] via s_0 o s_0 and s_0 o s_1
    lhs = nil_sheaf.gen[(1, 0)] @ nil_sheaf.gen[(2, 0)]
    rhs = nil_sheaf.gen[(1, 0)] @ nil_sheaf.gen[(2, 1)]
    assert lhs == rhs
    big = LinOrder.standard(3)
    small = LinOrder.standard(1)
    f = OrderMorphism(big, small, [0, 0, 0])
    assert apply_surjection(nil_sheaf, f) == lhs


def test_apply_surjection_is_functorial(nil_sheaf):
    sizes = [LinOrder.standard(n) for n in (1, 2, 3, 4)]
    maps = [
        f
        for a in sizes
        for b in sizes
        for f in enumerate_surjections(a, b)
    ]
    for f in maps:
        for g in maps:
            if g.source != f.target:
                continue
            assert apply_surjection(nil_sheaf, f.then(g)) == apply_surjection(
                nil_sheaf, g
            ) @ apply_surjection(nil_sheaf, f)


def test_apply_surjection_nonstandard_labels(nil_sheaf):
    # ranks permute the labels; positions drive the decomposition
    src = LinOrder([1, 0, 2])
    tgt = LinOrder([0, 1])
    f = OrderMorphism(src, tgt, [1, 0, 1])
    m = apply_surjection(nil_sheaf, f)
    std = OrderMorphism(
        LinOrder.standard(3), LinOrder.standard(2), [0, 1, 1]
    )
    assert m == apply_surjection(nil_sheaf, std)


# ------------------------------------------------- constructible sheaves


def test_global_to_constructible_extremes(nil_sheaf):
    base = LinOrder.standard(3)
    sheaf = global_to_constructible(nil_sheaf, base)
    assert sheaf.value[ConvexEquiv.discrete(base)] == nil_sheaf.value_at_size(3)
    assert sheaf.value[ConvexEquiv.indiscrete(base)] == nil_sheaf.value_at_size(1)


def test_two_element_restriction_is_the_merge(nil_sheaf):
    base = LinOrder.standard(2)
    sheaf = global_to_constructible(nil_sheaf, base)
    fine = ConvexEquiv.discrete(base)
    coarse = ConvexEquiv.indiscrete(base)
    assert sheaf.restriction[(fine, coarse)] == nil_sheaf.gen[(1, 0)]


def test_pullback_compatibility_exhaustive(nil_sheaf):
    for n_src in range(1, 5):
        for n_tgt in range(1, n_src + 1):
            src = LinOrder.standard(n_src)
            tgt = LinOrder.standard(n_tgt)
            sheaf_src = global_to_constructible(nil_sheaf, src)
            sheaf_tgt = global_to_constructible(nil_sheaf, tgt)
            rels = enumerate_convex_equivalences(tgt)
            for f in enumerate_surjections(src, tgt):
                for e in rels:
                    for e2 in rels:
                        if not e.refines(e2):
                            continue
                        eb, eb2 = preimage_equiv(f, e), preimage_equiv(f, e2)
                        assert sheaf_src.value[eb] == sheaf_tgt.value[e]
                        assert (
                            sheaf_src.restriction[(eb, eb2)]
                            == sheaf_tgt.restriction[(e, e2)]
                        )


# ------------------------------------------------------------------ stalks


def test_stalk_extremes(nil_sheaf):
    base = LinOrder.standard(3)
    sheaf = global_to_constructible(nil_sheaf, base)
    all_finite = rep_from_gaps([1, 2])
    assert stalk(sheaf, all_finite) == sheaf.value[ConvexEquiv.indiscrete(base)]
    all_inf = rep_from_gaps([INF, INF])
    assert stalk(sheaf, all_inf) == sheaf.value[ConvexEquiv.discrete(base)]


def test_all_infinite_stalk_determines_global_value(nil_sheaf):
    # stalk at the all-infinity point equals the sheaf's value on I
    for n in range(1, 5):
        base = LinOrder.standard(n)
        sheaf = global_to_constructible(nil_sheaf, base)
        point = rep_from_gaps([INF] * (n - 1))
        assert stalk(sheaf, point) == nil_sheaf.value_at_size(n)


def test_easybreak_evaluation(nil_sheaf):
    algebra = nilpotent_upper3()
    base = LinOrder.standard(2)
    points = [rep_from_gaps([g]) for g in (ExtReal(0), ExtReal(1), ExtReal(2), INF)]
    family, _ = build_family(
        base,
        points,
        ids=["t1", "t1/2", "t1/4", "t0"],
        edges=[("t1", "t1/2"), ("t1/2", "t1/4"), ("t1/4", "t0")],
        limits=["t0"],
    )
    ev = evaluate_on_family(nil_sheaf, family)
    dims = [ev.stalks[s].dim for s, _ in family.samples]
    assert dims == [3, 3, 3, 9]
    assert ev.edge_maps[("t1", "t1/2")].is_identity()
    assert ev.edge_maps[("t1/4", "t0")] == algebra.multiplication()
    assert ev.incomparable == ()


def test_constant_family_evaluation(nil_sheaf):
    base = LinOrder.standard(3)
    point = rep_from_gaps([1, INF])
    family, _ = build_family(
        base, [point, point], ids=["a", "b"], edges=[("a", "b")]
    )
    ev = evaluate_on_family(nil_sheaf, family)
    assert ev.stalks["a"] == ev.stalks["b"]
    assert ev.edge_maps[("a", "b")].is_identity()


def test_edge_maps_compose_on_random_families(nil_sheaf):
    rng = random.Random(5)
    base = LinOrder.standard(3)
    rels = enumerate_convex_equivalences(base)
    sheaf = global_to_constructible(nil_sheaf, base)
    for _ in range(25):
        chain = sorted(
            rng.sample(rels, 3), key=lambda r: len(r.classes), reverse=True
        )
        if not (chain[0].refines(chain[1]) and chain[1].refines(chain[2])):
            continue
        points = [stratum_samples(base, rel, 1)[0] for rel in chain]
        family, _ = build_family(
            base, points, ids=["a", "b", "c"], edges=[("a", "b"), ("b", "c")]
        )
        ev = evaluate_on_family(nil_sheaf, family)
        direct = sheaf.restriction[(chain[0], chain[2])]
        assert ev.edge_maps[("b", "c")] @ ev.edge_maps[("a", "b")] == direct


def test_truncation_enforced(nil_sheaf):
    base = LinOrder.standard(5)
    with pytest.raises(ValueError):
        global_to_constructible(nil_sheaf, base)


def test_constructible_functoriality_up_to_five_elements():
    # the ConstructibleSheaf constructor checks identity and composition
    # closure over the full Conv(I) poset; run it through |I| = 5
    sheaf = GlobalSheaf.from_algebra(rational_algebra(), 4)
    for n in range(1, 6):
        global_to_constructible(sheaf, LinOrder.standard(n))


def test_json_shape(nil_sheaf):
    data = nil_sheaf.to_json()
    assert data["N"] == 3
    assert data["V"] == [3, 9, 27, 81]
    assert "1,0" in data["gen"]


def test_json_roundtrip(nil_sheaf):
    again = GlobalSheaf.from_json(nil_sheaf.to_json())
    assert again.values == nil_sheaf.values
    assert again.gen == nil_sheaf.gen
