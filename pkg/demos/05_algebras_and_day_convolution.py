"""The main equivalence at desk scale: nonunital algebras are exactly the
monoidal Fun_0 functors on the twisted arrow category, and Day
convolution is the ambient tensor product on all functors.
"""

from brokenlines import (
    algebra_to_functor,
    day_assoc_check,
    day_convolution,
    day_square,
    factorizable_check,
    functor_to_algebra,
    matrix_algebra_2x2,
    nilpotent_upper3,
    rational_algebra,
    roundtrip_natural_iso,
    sharp,
)

# an algebra becomes a functor: value A^(x)n everywhere, actions multiply
# merged slots; the two constructions invert each other on the nose
for make in (rational_algebra, nilpotent_upper3, matrix_algebra_2x2):
    algebra = make()
    functor = algebra_to_functor(algebra, 3)
    back = functor_to_algebra(functor)
    print(f"dim {algebra.dim}: roundtrip exact: {back == algebra}")

# the reverse roundtrip is witnessed by an explicit natural isomorphism
functor = algebra_to_functor(nilpotent_upper3(), 3)
eta = roundtrip_natural_iso(functor)
print("natural iso components:", len(eta))

# Day convolution: a coproduct over downward-closed invariant cuts.
# Indiscrete objects of size >= 2 admit no invariant cut, so they get the
# zero object; discrete objects collect one summand per cut.
const = algebra_to_functor(rational_algebra(), 4)
conv = day_convolution(const, const, 4)
print("\n(1 ⊛ 1) dims:")
for x, v in sorted(conv.value.items(), key=lambda kv: (kv[0].n, len(kv[0].rel.classes))):
    print(f"  n={x.n} classes={len(x.rel.classes)}: dim {v.dim}")

# associativity of ⊛ holds through an explicit reindexing permutation
report = day_assoc_check(const, const, const, 4)
print("assoc reindexing ok:", report["ok"])

# factorizability: algebra functors pass, Day squares never do (the value
# on the one-point object is the empty coproduct)
print("\nfactorizable(algebra functor):", factorizable_check(functor))
square = day_square(functor, 3)
print("factorizable(F ⊛ F):", factorizable_check(square))
print("(F ⊛ F)(point) dim:", square.value[sharp(1)].dim)
