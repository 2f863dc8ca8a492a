import itertools
from fractions import Fraction

import pytest

from brokenlines.vect import (
    LinMap,
    NonunitalAlgebra,
    VectObject,
    direct_sum,
    matrix_algebra_2x2,
    nilpotent_upper3,
    rational_algebra,
    tensor,
    validate_algebra,
    zero_algebra,
)

# ------------------------------------------------------- matrix oracle
# structure constants recomputed here from literal matrix products


def mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][m] * b[m][j] for m in range(n)) for j in range(n))
        for i in range(n)
    )


def unit(n, i, j):
    return tuple(
        tuple(1 if (r, c) == (i, j) else 0 for c in range(n)) for r in range(n)
    )


def constants_from_basis(basis, n):
    d = len(basis)
    index = {b: k for k, b in enumerate(basis)}
    c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            prod = mat_mul(basis[i], basis[j])
            if any(any(row) for row in prod):
                c[index[prod]][i][j] = Fraction(1)
    return c


def test_nilpotent_constants_match_matrix_oracle():
    basis = [unit(3, 0, 1), unit(3, 0, 2), unit(3, 1, 2)]
    oracle = constants_from_basis(basis, 3)
    built = nilpotent_upper3()
    assert [[list(r) for r in p] for p in built.c] == [
        [list(r) for r in p] for p in oracle
    ]
    # e12 . e23 = e13
    assert built.c[1][0][2] == 1
    assert sum(x for p in built.c for r in p for x in r) == 1


def test_mat2_constants_match_matrix_oracle():
    basis = [unit(2, 0, 0), unit(2, 0, 1), unit(2, 1, 0), unit(2, 1, 1)]
    oracle = constants_from_basis(basis, 2)
    built = matrix_algebra_2x2()
    assert [[list(r) for r in p] for p in built.c] == [
        [list(r) for r in p] for p in oracle
    ]


def test_validate_algebra_examples():
    assert validate_algebra(zero_algebra(1)) is None
    assert validate_algebra(zero_algebra(4)) is None
    assert validate_algebra(nilpotent_upper3()) is None
    assert validate_algebra(matrix_algebra_2x2()) is None
    assert validate_algebra(rational_algebra()) is None


def test_validate_algebra_reports_triple():
    # a non-associative product: e0 . e0 = e1, e1 . e0 = e0, rest zero
    c = [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
    bad = NonunitalAlgebra(2, c)
    assert validate_algebra(bad) is not None


# ---------------------------------------------------------------- tensor


def test_tensor_objects():
    assert tensor(VectObject(2), VectObject(3)) == VectObject(6)
    assert tensor(VectObject(1), VectObject(5)) == VectObject(5)


def test_tensor_with_dim_one_is_plain_scaling():
    scalar = LinMap(VectObject(1), VectObject(1), [[Fraction(3)]])
    m = LinMap(VectObject(2), VectObject(2), [[1, 2], [0, 1]])
    out = tensor(scalar, m)
    assert out.rows == tuple(
        tuple(Fraction(3) * x for x in row) for row in m.rows
    )


def test_tensor_strictly_associative():
    a = LinMap(VectObject(2), VectObject(1), [[1, 2]])
    b = LinMap(VectObject(1), VectObject(2), [[3], [4]])
    c = LinMap(VectObject(2), VectObject(2), [[0, 1], [1, 0]])
    assert tensor(tensor(a, b), c) == tensor(a, tensor(b, c))
    # hence the associator permutation is literally the identity matrix
    for da, db, dc in itertools.product((1, 2, 3), repeat=3):
        ia = LinMap.identity(VectObject(da))
        ib = LinMap.identity(VectObject(db))
        ic = LinMap.identity(VectObject(dc))
        assoc = tensor(tensor(ia, ib), ic)
        assert assoc.is_identity()


def test_pentagon_identity_on_small_dims():
    # with identity associators the pentagon is a literal matrix equation
    for dims in itertools.product((1, 2, 3), repeat=4):
        idents = [LinMap.identity(VectObject(d)) for d in dims]
        lhs = tensor(tensor(tensor(*idents[:2]), idents[2]), idents[3])
        rhs = tensor(idents[0], tensor(idents[1], tensor(*idents[2:])))
        assert lhs == rhs


def test_interchange_law():
    f = LinMap(VectObject(2), VectObject(2), [[1, 1], [0, 1]])
    f2 = LinMap(VectObject(2), VectObject(2), [[2, 0], [1, 1]])
    g = LinMap(VectObject(2), VectObject(2), [[0, 1], [1, 0]])
    g2 = LinMap(VectObject(2), VectObject(2), [[1, 2], [3, 4]])
    assert tensor(f, g) @ tensor(f2, g2) == tensor(f @ f2, g @ g2)


# ------------------------------------------------------------ direct sum


def test_empty_sum_is_zero_object():
    assert direct_sum([]) == VectObject(0)


def test_block_sum():
    a = LinMap(VectObject(2), VectObject(2), [[1, 2], [3, 4]])
    b = LinMap(VectObject(3), VectObject(3), [[5, 0, 0], [0, 6, 0], [0, 0, 7]])
    s = direct_sum([a, b])
    assert s.source == VectObject(5)
    assert s.rows[0][:2] == (1, 2)
    assert s.rows[2][2] == 5
    assert s.rows[4][4] == 7
    assert s.rows[0][2:] == (0, 0, 0)


def test_tensor_distributes_over_direct_sum():
    a = LinMap(VectObject(1), VectObject(1), [[2]])
    b = LinMap(VectObject(2), VectObject(2), [[0, 1], [1, 0]])
    c = LinMap(VectObject(1), VectObject(2), [[1], [1]])
    lhs = tensor(a, direct_sum([b, c]))
    # dims add then multiply
    assert lhs.source == VectObject(3)
    assert lhs.target == VectObject(4)
    rhs = direct_sum([tensor(a, b), tensor(a, c)])
    assert lhs == rhs


# ------------------------------------------------------------- inverses


def test_inverse_exact():
    m = LinMap(VectObject(2), VectObject(2), [[1, Fraction(1, 2)], [0, 2]])
    inv = m.inverse()
    assert (m @ inv).is_identity()
    assert (inv @ m).is_identity()


def test_singular_rejected():
    m = LinMap(VectObject(2), VectObject(2), [[1, 1], [1, 1]])
    assert not m.is_invertible()
    with pytest.raises(ValueError):
        m.inverse()


def test_non_square_not_invertible():
    m = LinMap(VectObject(1), VectObject(2), [[1], [0]])
    assert not m.is_invertible()


def test_multiplication_map_shape():
    alg = nilpotent_upper3()
    m = alg.multiplication()
    assert m.source == VectObject(9)
    assert m.target == VectObject(3)
    # e12 (index 0) tensor e23 (index 2) goes to e13 (index 1)
    col = 0 * 3 + 2
    assert [row[col] for row in m.rows] == [0, 1, 0]


def test_algebra_json_roundtrip():
    alg = nilpotent_upper3()
    assert NonunitalAlgebra.from_json(alg.to_json()) == alg
