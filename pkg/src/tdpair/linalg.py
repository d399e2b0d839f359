"""Dense exact linear algebra: matrices over a field and subspaces with
canonical reduced-row-echelon bases.

Subspace equality is pure data comparison: two subspaces of the same
ambient space are equal iff their RREF bases are identical, which turns
every subspace identity in the analysis layers into an exact assertion.
Matrices of size 0x0 are rejected; the vector spaces acted on always
have positive dimension.
"""

from __future__ import annotations

from .errors import FieldError, ShapeError, SingularMatrixError
from .fields import Field


def _check_same_field(a, b):
    if a.field != b.field:
        raise FieldError("operands live in different fields")


class Matrix:
    """Immutable dense matrix over a field."""

    __slots__ = ("field", "rows", "n_rows", "n_cols")

    def __init__(self, field: Field, rows):
        rows = tuple(tuple(r) for r in rows)
        if not rows or not rows[0]:
            raise ShapeError("matrices must have positive dimensions")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        self.field = field
        self.rows = rows
        self.n_rows = len(rows)
        self.n_cols = width

    @classmethod
    def from_ints(cls, field: Field, rows) -> "Matrix":
        return cls(field, [[field.from_int(v) for v in row] for row in rows])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        one, zero = field.one(), field.zero()
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: Field, n: int, m: int | None = None) -> "Matrix":
        zero = field.zero()
        m = n if m is None else m
        return cls(field, [[zero] * m for _ in range(n)])

    @classmethod
    def diagonal(cls, field: Field, values) -> "Matrix":
        values = list(values)
        zero = field.zero()
        n = len(values)
        return cls(field, [[values[i] if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.rows == self.rows
        )

    def __hash__(self):
        return hash((self.field, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(v) for v in row) for row in self.rows)
        return f"Matrix[{body}]"

    def add(self, other: "Matrix") -> "Matrix":
        _check_same_field(self, other)
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols):
            raise ShapeError("size mismatch in addition")
        add = self.field.add
        return Matrix(
            self.field,
            [
                [add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def sub(self, other: "Matrix") -> "Matrix":
        return self.add(other.neg())

    def neg(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, [[neg(v) for v in row] for row in self.rows])

    def scale(self, c) -> "Matrix":
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, v) for v in row] for row in self.rows])

    def mul(self, other: "Matrix") -> "Matrix":
        _check_same_field(self, other)
        if self.n_cols != other.n_rows:
            raise ShapeError("size mismatch in multiplication")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero()
        cols = [tuple(col) for col in zip(*other.rows)]
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    acc = add(acc, mul(a, b))
                out_row.append(acc)
            out.append(out_row)
        return Matrix(f, out)

    def power(self, k: int) -> "Matrix":
        if not self.is_square:
            raise ShapeError("powers need a square matrix")
        if k < 0:
            raise ValueError("negative matrix powers are not used here")
        result = Matrix.identity(self.field, self.n_rows)
        base = self
        while k:
            if k & 1:
                result = result.mul(base)
            base = base.mul(base) if k > 1 else base
            k >>= 1
        return result

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [list(col) for col in zip(*self.rows)])

    def trace(self):
        if not self.is_square:
            raise ShapeError("trace needs a square matrix")
        acc = self.field.zero()
        for i in range(self.n_rows):
            acc = self.field.add(acc, self.rows[i][i])
        return acc

    def is_zero(self) -> bool:
        zero = self.field.zero()
        return all(v == zero for row in self.rows for v in row)

    def apply(self, vector):
        """Matrix times column vector, returned as a tuple."""
        if len(vector) != self.n_cols:
            raise ShapeError("vector length mismatch")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero()
        out = []
        for row in self.rows:
            acc = zero
            for a, b in zip(row, vector):
                acc = add(acc, mul(a, b))
            out.append(acc)
        return tuple(out)

    def commutator(self, other: "Matrix") -> "Matrix":
        return self.mul(other).sub(other.mul(self))


def _rref_rows(field: Field, rows):
    """In-place style RREF on a list of row lists.  Returns (rows, pivots)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    n_cols = len(rows[0])
    zero = field.zero()
    inv, mul, sub = field.inv, field.mul, field.sub
    pivots = []
    lead = 0
    for col in range(n_cols):
        pivot_row = None
        for i in range(lead, len(rows)):
            if rows[i][col] != zero:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[lead], rows[pivot_row] = rows[pivot_row], rows[lead]
        pivot = rows[lead][col]
        if pivot != field.one():
            scale = inv(pivot)
            row = rows[lead]
            for j in range(col, n_cols):
                if row[j] != zero:
                    row[j] = mul(scale, row[j])
        lead_row = rows[lead]
        for i in range(len(rows)):
            if i == lead:
                continue
            factor = rows[i][col]
            if factor != zero:
                row = rows[i]
                for j in range(col, n_cols):
                    if lead_row[j] != zero:
                        row[j] = sub(row[j], mul(factor, lead_row[j]))
        pivots.append(col)
        lead += 1
        if lead == len(rows):
            break
    return rows, pivots


def rref(m: Matrix):
    """Reduced row echelon form.  Returns (rref_matrix, pivot_columns, rank)."""
    rows, pivots = _rref_rows(m.field, m.rows)
    return Matrix(m.field, rows), pivots, len(pivots)


def rank(m: Matrix) -> int:
    _, pivots = _rref_rows(m.field, m.rows)
    return len(pivots)


def kernel(m: Matrix) -> "Subspace":
    """Null space of m, as a canonical subspace of F^(n_cols)."""
    field = m.field
    rows, pivots = _rref_rows(field, m.rows)
    n = m.n_cols
    zero, one = field.zero(), field.one()
    pivot_set = set(pivots)
    free_cols = [j for j in range(n) if j not in pivot_set]
    basis = []
    for free in free_cols:
        v = [zero] * n
        v[free] = one
        for k, col in enumerate(pivots):
            v[col] = field.neg(rows[k][free])
        basis.append(v)
    return Subspace.from_vectors(field, n, basis)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise ShapeError("inverse needs a square matrix")
    n = m.n_rows
    field = m.field
    aug = [list(row) + [field.one() if i == j else field.zero() for j in range(n)] for i, row in enumerate(m.rows)]
    rows, pivots = _rref_rows(field, aug)
    if pivots != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return Matrix(field, [row[n:] for row in rows])


class Subspace:
    """Subspace of F^n with a canonical RREF basis (rows are basis
    vectors, no zero rows).  The zero subspace has an empty basis."""

    __slots__ = ("field", "ambient_dim", "rows")

    def __init__(self, field: Field, ambient_dim: int, rows):
        if ambient_dim <= 0:
            raise ShapeError("ambient dimension must be positive")
        self.field = field
        self.ambient_dim = ambient_dim
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def from_vectors(cls, field: Field, ambient_dim: int, vectors) -> "Subspace":
        vectors = [list(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise ShapeError("vector length mismatch")
        if not vectors:
            return cls(field, ambient_dim, [])
        rows, pivots = _rref_rows(field, vectors)
        return cls(field, ambient_dim, rows[: len(pivots)])

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, [])

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, Matrix.identity(field, ambient_dim).rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def is_full(self) -> bool:
        return len(self.rows) == self.ambient_dim

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and other.field == self.field
            and other.ambient_dim == self.ambient_dim
            and other.rows == self.rows
        )

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.rows))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of F^{self.ambient_dim})"

    def _check_compatible(self, other: "Subspace"):
        if self.field != other.field:
            raise FieldError("subspaces live in different fields")
        if self.ambient_dim != other.ambient_dim:
            raise ShapeError("subspaces live in different ambient spaces")

    def add(self, other: "Subspace") -> "Subspace":
        """Canonical basis of the subspace sum."""
        self._check_compatible(other)
        return Subspace.from_vectors(self.field, self.ambient_dim, list(self.rows) + list(other.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: RREF the block matrix [[U U], [W 0]]; rows whose
        left half vanished carry the intersection in their right half."""
        self._check_compatible(other)
        field, n = self.field, self.ambient_dim
        zero = field.zero()
        zeros = [zero] * n
        block = [list(r) + list(r) for r in self.rows]
        block += [list(r) + zeros for r in other.rows]
        if not block:
            return Subspace.zero(field, n)
        rows, pivots = _rref_rows(field, block)
        carried = [row[n:] for row in rows[: len(pivots)] if all(v == zero for v in row[:n])]
        return Subspace.from_vectors(field, n, carried)

    def contains_vector(self, vector) -> bool:
        if len(vector) != self.ambient_dim:
            raise ShapeError("vector length mismatch")
        field = self.field
        zero = field.zero()
        v = list(vector)
        for row in self.rows:
            lead = next(j for j, x in enumerate(row) if x != zero)
            c = v[lead]
            if c != zero:
                for j in range(lead, self.ambient_dim):
                    if row[j] != zero:
                        v[j] = field.sub(v[j], field.mul(c, row[j]))
        return all(x == zero for x in v)

    def contains(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return all(self.contains_vector(v) for v in other.rows)

    def image_under(self, m: Matrix) -> "Subspace":
        """Span of m*v over basis vectors v (vectors as columns)."""
        if m.n_cols != self.ambient_dim:
            raise ShapeError("operator does not act on this space")
        return Subspace.from_vectors(self.field, m.n_rows, [m.apply(v) for v in self.rows])

    def basis_matrix(self) -> Matrix:
        if not self.rows:
            raise ShapeError("the zero subspace has no basis matrix")
        return Matrix(self.field, self.rows)


def solve_affine_system(field: Field, rows, rhs):
    """Solve rows * x = rhs exactly.  Returns (solvable, particular, unique)
    where `particular` sets all free unknowns to zero."""
    if len(rows) != len(rhs):
        raise ShapeError("row / right-hand-side count mismatch")
    if not rows:
        raise ShapeError("empty system")
    n_unknowns = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = _rref_rows(field, aug)
    if n_unknowns in pivots:
        return False, None, False
    solution = [field.zero()] * n_unknowns
    for k, col in enumerate(pivots):
        solution[col] = reduced[k][n_unknowns]
    return True, tuple(solution), len(pivots) == n_unknowns


def stack_bases(field: Field, subspaces, ambient_dim: int) -> Matrix:
    """Matrix whose rows are the concatenated bases of the given subspaces."""
    rows = []
    for s in subspaces:
        rows.extend(s.rows)
    if not rows:
        raise ShapeError("no basis vectors to stack")
    if any(len(r) != ambient_dim for r in rows):
        raise ShapeError("ambient dimension mismatch")
    return Matrix(field, rows)
