"""Finite-dimensional exact-rational vector spaces, tensor products,
direct sums, and nonunital associative algebras by structure constants.

The model is strictly skeletal: an object is its dimension, and the basis
of V (x) W is ordered with the second index fastest, so iterated tensor
products literally agree and the associator is the identity permutation.
All arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class VectObject:
    """A vector space, recorded by its dimension (dim 0 is the zero
    object, the empty coproduct)."""

    __slots__ = ("dim",)

    def __init__(self, dim):
        dim = int(dim)
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, name, value):
        raise AttributeError("VectObject is immutable")

    def __eq__(self, other):
        if not isinstance(other, VectObject):
            return NotImplemented
        return self.dim == other.dim

    def __hash__(self):
        return hash(("VectObject", self.dim))

    def __repr__(self):
        return f"VectObject({self.dim})"


class LinMap:
    """An exact matrix source -> target (rows x cols = target.dim x
    source.dim)."""

    __slots__ = ("source", "target", "rows", "_nnz", "_ident")

    def __init__(self, source: VectObject, target: VectObject, rows):
        rows = tuple(
            row
            if type(row) is tuple and all(type(x) is Fraction for x in row)
            else tuple(x if type(x) is Fraction else Fraction(x) for x in row)
            for row in rows
        )
        if len(rows) != target.dim or any(len(r) != source.dim for r in rows):
            raise ValueError("matrix shape must be target.dim x source.dim")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_nnz", None)
        object.__setattr__(self, "_ident", None)

    def __setattr__(self, name, value):
        raise AttributeError("LinMap is immutable")

    def nnz_rows(self):
        """Per-row nonzero (col, value) lists, memoized; structure-constant
        matrices are very sparse and composition walks only these."""
        if self._nnz is None:
            nnz = tuple(
                tuple((c, x) for c, x in enumerate(row) if x)
                for row in self.rows
            )
            object.__setattr__(self, "_nnz", nnz)
        return self._nnz

    def is_identity(self) -> bool:
        if self._ident is None:
            ok = self.source.dim == self.target.dim
            if ok:
                for i, row in enumerate(self.rows):
                    for j, x in enumerate(row):
                        if x != (_ONE if i == j else _ZERO):
                            ok = False
                            break
                    if not ok:
                        break
            object.__setattr__(self, "_ident", ok)
        return self._ident

    @staticmethod
    def identity(obj: VectObject) -> "LinMap":
        return LinMap(
            obj,
            obj,
            [[_ONE if i == j else _ZERO for j in range(obj.dim)] for i in range(obj.dim)],
        )

    @staticmethod
    def zero(source: VectObject, target: VectObject) -> "LinMap":
        return LinMap(source, target, [[_ZERO] * source.dim for _ in range(target.dim)])

    def __matmul__(self, other: "LinMap") -> "LinMap":
        """self o other (apply other first)."""
        if other.target != self.source:
            raise ValueError("maps not composable")
        if self.is_identity():
            return other
        if other.is_identity():
            return self
        cols = other.source.dim
        self_nnz = self.nnz_rows()
        other_nnz = other.nnz_rows()
        out = []
        for r in range(self.target.dim):
            new_row = [_ZERO] * cols
            for m, coef in self_nnz[r]:
                for c, val in other_nnz[m]:
                    new_row[c] += coef * val
            out.append(new_row)
        return LinMap(other.source, self.target, out)

    def __add__(self, other: "LinMap") -> "LinMap":
        if self.source != other.source or self.target != other.target:
            raise ValueError("maps must be parallel to add")
        return LinMap(
            self.source,
            self.target,
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    @property
    def is_square(self):
        return self.source.dim == self.target.dim

    def is_invertible(self) -> bool:
        if not self.is_square:
            return False
        if self.is_identity():
            return True
        try:
            self.inverse()
            return True
        except ValueError:
            return False

    def inverse(self) -> "LinMap":
        """Exact inverse by Gauss-Jordan elimination."""
        if not self.is_square:
            raise ValueError("only square maps can be inverted")
        if self.is_identity():
            return LinMap(self.target, self.source, self.rows)
        n = self.source.dim
        aug = [list(row) + [_ONE if i == j else _ZERO for j in range(n)]
               for i, row in enumerate(self.rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if aug[r][col]), None)
            if pivot is None:
                raise ValueError("map is singular")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            if aug[col][col] != _ONE:
                inv = _ONE / aug[col][col]
                aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    factor = aug[r][col]
                    aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
        return LinMap(self.target, self.source, [row[n:] for row in aug])

    def __eq__(self, other):
        if not isinstance(other, LinMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.source.dim, self.target.dim, self.rows))

    def __repr__(self):
        return f"LinMap({self.target.dim}x{self.source.dim})"


def tensor(a, b):
    """Tensor product of two objects or two maps (Kronecker, second
    factor fastest)."""
    if isinstance(a, VectObject) and isinstance(b, VectObject):
        return VectObject(a.dim * b.dim)
    if isinstance(a, LinMap) and isinstance(b, LinMap):
        src = tensor(a.source, b.source)
        tgt = tensor(a.target, b.target)
        zeros = (_ZERO,) * b.source.dim
        rows = []
        for i in range(a.target.dim):
            a_row = a.rows[i]
            for k in range(b.target.dim):
                b_row = b.rows[k]
                row = []
                for j in range(a.source.dim):
                    aij = a_row[j]
                    if not aij:
                        row.extend(zeros)
                    elif aij == _ONE:
                        row.extend(b_row)
                    else:
                        row.extend(aij * x for x in b_row)
                rows.append(row)
        return LinMap(src, tgt, rows)
    raise TypeError("tensor takes two objects or two maps")


def tensor_all(items):
    """Left-to-right tensor of a nonempty list (strictly associative)."""
    items = list(items)
    if not items:
        raise ValueError("tensor of an empty list is not defined here")
    out = items[0]
    for x in items[1:]:
        out = tensor(out, x)
    return out


def direct_sum(items):
    """Direct sum of objects or maps; the empty sum is the zero object
    (or the unique map between zero objects)."""
    items = list(items)
    if all(isinstance(x, VectObject) for x in items):
        return VectObject(sum(x.dim for x in items))
    if all(isinstance(x, LinMap) for x in items):
        src = VectObject(sum(m.source.dim for m in items))
        tgt = VectObject(sum(m.target.dim for m in items))
        rows = [[_ZERO] * src.dim for _ in range(tgt.dim)]
        r0 = c0 = 0
        for m in items:
            for i, row in enumerate(m.rows):
                for j, x in enumerate(row):
                    rows[r0 + i][c0 + j] = x
            r0 += m.target.dim
            c0 += m.source.dim
        return LinMap(src, tgt, rows)
    raise TypeError("direct_sum takes objects or maps, not a mixture")


class NonunitalAlgebra:
    """A nonunital associative algebra by structure constants:
    e_i . e_j = sum_k c[k][i][j] e_k."""

    __slots__ = ("dim", "c")

    def __init__(self, dim, c):
        dim = int(dim)
        c = tuple(
            tuple(tuple(Fraction(x) for x in row) for row in plane) for plane in c
        )
        if len(c) != dim or any(
            len(plane) != dim or any(len(row) != dim for row in plane)
            for plane in c
        ):
            raise ValueError("structure constants must be dim x dim x dim")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "c", c)

    def __setattr__(self, name, value):
        raise AttributeError("NonunitalAlgebra is immutable")

    @property
    def space(self):
        return VectObject(self.dim)

    def multiplication(self) -> LinMap:
        """The multiplication as a map A (x) A -> A (columns i*dim+j)."""
        d = self.dim
        rows = [
            [self.c[k][i][j] for i in range(d) for j in range(d)]
            for k in range(d)
        ]
        return LinMap(tensor(self.space, self.space), self.space, rows)

    def validate(self):
        """None if associative, else the first violating basis triple."""
        d = self.dim
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    for l in range(d):
                        lhs = sum(
                            (self.c[m][i][j] * self.c[l][m][k] for m in range(d)),
                            _ZERO,
                        )
                        rhs = sum(
                            (self.c[m][j][k] * self.c[l][i][m] for m in range(d)),
                            _ZERO,
                        )
                        if lhs != rhs:
                            return (i, j, k)
        return None

    def __eq__(self, other):
        if not isinstance(other, NonunitalAlgebra):
            return NotImplemented
        return self.dim == other.dim and self.c == other.c

    def __hash__(self):
        return hash((self.dim, self.c))

    def __repr__(self):
        return f"NonunitalAlgebra(dim={self.dim})"

    def to_json(self):
        return {
            "dim": self.dim,
            "c": [
                [[str(x) for x in row] for row in plane] for plane in self.c
            ],
        }

    @staticmethod
    def from_json(data):
        return NonunitalAlgebra(data["dim"], [
            [[Fraction(x) for x in row] for row in plane]
            for plane in data["c"]
        ])


def validate_algebra(algebra: NonunitalAlgebra):
    return algebra.validate()


def zero_algebra(dim=1) -> NonunitalAlgebra:
    """Every product is zero."""
    z = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    return NonunitalAlgebra(dim, z)


def rational_algebra() -> NonunitalAlgebra:
    """The rationals with their product, viewed nonunitally (dim 1)."""
    return NonunitalAlgebra(1, [[[1]]])


def _algebra_from_matrix_basis(basis, size) -> NonunitalAlgebra:
    """Structure constants read off from products of basis matrices."""
    d = len(basis)

    def mat_mul(a, b):
        return tuple(
            tuple(
                sum((a[i][m] * b[m][j] for m in range(size)), _ZERO)
                for j in range(size)
            )
            for i in range(size)
        )

    index = {m: k for k, m in enumerate(basis)}
    c = [[[_ZERO] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            prod = mat_mul(basis[i], basis[j])
            if any(any(row) for row in prod):
                # products of matrix units land on a single basis element
                k = index[prod]
                c[k][i][j] = _ONE
    return NonunitalAlgebra(d, c)


def _matrix_unit(size, a, b):
    return tuple(
        tuple(_ONE if (i, j) == (a, b) else _ZERO for j in range(size))
        for i in range(size)
    )


def nilpotent_upper3() -> NonunitalAlgebra:
    """Strictly upper triangular 3x3 matrices; basis e12, e13, e23."""
    basis = [_matrix_unit(3, 0, 1), _matrix_unit(3, 0, 2), _matrix_unit(3, 1, 2)]
    return _algebra_from_matrix_basis(basis, 3)


def matrix_algebra_2x2() -> NonunitalAlgebra:
    """Full 2x2 matrix algebra, viewed nonunitally; basis e11, e12, e21,
    e22."""
    basis = [
        _matrix_unit(2, 0, 0),
        _matrix_unit(2, 0, 1),
        _matrix_unit(2, 1, 0),
        _matrix_unit(2, 1, 1),
    ]
    return _algebra_from_matrix_basis(basis, 2)


BUILTIN_ALGEBRAS = {
    "zero1": zero_algebra,
    "rational": rational_algebra,
    "nilpotent3": nilpotent_upper3,
    "mat2": matrix_algebra_2x2,
}
