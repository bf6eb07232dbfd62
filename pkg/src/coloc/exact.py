"""Exact scalar fields and dense linear algebra.

Everything downstream compares matrices with ``==``; there is no tolerance
anywhere.  Two fields are provided: the rationals (backed by ``gmpy2.mpq``)
and prime fields GF(p).

Tensor convention: the basis of V (x) W is ordered lexicographically with the
V index major, i.e. ``e_i (x) f_j`` sits at position ``i * dim(W) + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from gmpy2 import mpq


class FieldError(ArithmeticError):
    pass


class DimensionError(ValueError):
    pass


# --------------------------------------------------------------------------
# fields
# --------------------------------------------------------------------------


class Field:
    """A field of scalars: converts, formats and parses elements."""

    name: str
    characteristic: int

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def fmt(self, x) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            return self(int(num)) / self(int(den))
        return self(int(text))

    def __repr__(self):
        return self.name


class RationalField(Field):
    name = "Q"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, ModP):
            raise FieldError("cannot coerce a residue class into Q")
        if isinstance(x, Fraction):
            return mpq(x.numerator, x.denominator)
        if isinstance(x, str):
            return self.parse(x)
        return mpq(x)

    def fmt(self, x) -> str:
        x = mpq(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


class ModP:
    """Residue class modulo a prime."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise FieldError("mixing residues of different primes")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, (Fraction, type(mpq(0)))):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ModP(o, self.p) / self

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pow__(self, n: int):
        if n < 0:
            return (ModP(1, self.p) / self) ** (-n)
        return ModP(pow(self.v, n, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return str(self.v)


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.characteristic = p

    def __call__(self, x):
        if isinstance(x, ModP):
            if x.p != self.p:
                raise FieldError("mixing residues of different primes")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, int):
            return ModP(x, self.p)
        x = mpq(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
        return ModP(int(x.numerator) * pow(int(x.denominator), -1, self.p), self.p)

    def fmt(self, x) -> str:
        return str(self(x).v)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> Field:
    """``"Q"`` or ``"F<p>"`` (e.g. ``"F7"``)."""
    if name == "Q":
        return QQ
    if name.startswith("F") and name[1:].isdigit():
        return GF(int(name[1:]))
    raise FieldError(f"unknown field {name!r}")


# --------------------------------------------------------------------------
# matrices
# --------------------------------------------------------------------------


class Matrix:
    """Immutable dense matrix over an exact field.

    A matrix with ``rows`` x ``cols`` entries represents a linear map from a
    ``cols``-dimensional space to a ``rows``-dimensional one; ``A @ B`` is
    composition ``A o B``.
    """

    __slots__ = ("rows", "cols", "data", "field", "_hash")

    def __init__(self, data: Sequence[Sequence], field: Field = QQ, cols: int | None = None):
        self.field = field
        self.data = tuple(tuple(field(x) for x in row) for row in data)
        self.rows = len(self.data)
        if cols is None:
            cols = len(self.data[0]) if self.data else 0
        self.cols = cols
        for row in self.data:
            if len(row) != cols:
                raise DimensionError("ragged matrix")
        self._hash = None

    @classmethod
    def _raw(cls, data, rows: int, cols: int, field: Field) -> "Matrix":
        m = object.__new__(cls)
        m.data = data
        m.rows = rows
        m.cols = cols
        m.field = field
        m._hash = None
        return m

    @classmethod
    def zero(cls, rows: int, cols: int, field: Field = QQ) -> "Matrix":
        z = field.zero
        return cls._raw(tuple((z,) * cols for _ in range(rows)), rows, cols, field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        z, o = field.zero, field.one
        data = tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))
        return cls._raw(data, n, n, field)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int, field: Field = QQ) -> "Matrix":
        cols = len(columns)
        data = [[field.zero] * cols for _ in range(rows)]
        for j, c in enumerate(columns):
            if len(c) != rows:
                raise DimensionError("column length mismatch")
            for i, x in enumerate(c):
                if x:
                    data[i][j] = field(x)
        return cls._raw(tuple(tuple(r) for r in data), rows, cols, field)

    @classmethod
    def from_sparse_columns(cls, columns: Sequence[dict], rows: int, field: Field = QQ) -> "Matrix":
        cols = len(columns)
        data = [[field.zero] * cols for _ in range(rows)]
        for j, c in enumerate(columns):
            for i, x in c.items():
                if x:
                    data[i][j] = x
        return cls._raw(tuple(tuple(r) for r in data), rows, cols, field)

    @classmethod
    def permutation(cls, images: Sequence[int], field: Field = QQ) -> "Matrix":
        """Matrix sending basis vector j to basis vector images[j]."""
        n = len(images)
        data = [[field.zero] * n for _ in range(n)]
        for j, i in enumerate(images):
            data[i][j] = field.one
        return cls._raw(tuple(tuple(r) for r in data), n, n, field)

    # -- access --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for a map with {self.cols} columns")
        z = self.field.zero
        nz = [(j, x) for j, x in enumerate(v) if x]
        out = []
        for row in self.data:
            s = z
            for j, x in nz:
                a = row[j]
                if a:
                    s = s + a * x
            out.append(s)
        return tuple(out)

    # -- arithmetic ----------------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot compose {self.shape} after {other.shape}")
        z = self.field.zero
        n = other.cols
        odata = other.data
        out = []
        for row in self.data:
            acc = [z] * n
            for k, a in enumerate(row):
                if a:
                    for j, b in enumerate(odata[k]):
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(tuple(acc))
        return Matrix._raw(tuple(out), self.rows, n, self.field)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        data = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data))
        return Matrix._raw(data, self.rows, self.cols, self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        data = tuple(tuple(c * a for a in r) for r in self.data)
        return Matrix._raw(data, self.rows, self.cols, self.field)

    def transpose(self) -> "Matrix":
        data = tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols))
        return Matrix._raw(tuple(tuple(r) for r in data), self.cols, self.rows, self.field)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def with_entry(self, i: int, j: int, value) -> "Matrix":
        data = [list(r) for r in self.data]
        data[i][j] = self.field(value)
        return Matrix._raw(tuple(tuple(r) for r in data), self.rows, self.cols, self.field)

    def is_zero(self) -> bool:
        return not any(x for row in self.data for x in row)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.data))
        return self._hash

    def __repr__(self):
        f = self.field.fmt
        body = "; ".join(" ".join(f(x) for x in r) for r in self.data)
        return f"Matrix<{self.rows}x{self.cols}>[{body}]"

    # -- elimination ---------------------------------------------------------

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and pivot columns."""
        rows = [list(r) for r in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if rows[i][c]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = self.field.one / rows[r][c]
            rows[r] = [inv * x for x in rows[r]]
            for i in range(self.rows):
                if i != r and rows[i][c]:
                    a = rows[i][c]
                    rows[i] = [x - a * y for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix._raw(tuple(tuple(x) for x in rows), self.rows, self.cols, self.field), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        aug = Matrix._raw(
            tuple(r + Matrix.identity(n, self.field).data[i] for i, r in enumerate(self.data)),
            n, 2 * n, self.field,
        )
        red, piv = aug.rref()
        if piv[:n] != list(range(n)):
            raise FieldError("matrix is singular")
        return Matrix._raw(tuple(r[n:] for r in red.data), n, n, self.field)


def vector(values: Iterable, field: Field = QQ) -> tuple:
    return tuple(field(x) for x in values)


def unit_vector(n: int, i: int, field: Field = QQ) -> tuple:
    z, o = field.zero, field.one
    return tuple(o if k == i else z for k in range(n))


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple
    field: Field = QQ

    def __post_init__(self):
        for v in self.basis:
            if len(v) != self.ambient_dim:
                raise DimensionError("basis vector of wrong length")
        if self.basis and Matrix.from_columns(self.basis, self.ambient_dim, self.field).rank() != len(self.basis):
            raise ValueError("basis vectors are linearly dependent")

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int, field: Field = QQ) -> "Subspace":
        vs = [vector(v, field) for v in vectors]
        if not vs:
            return cls(ambient_dim, (), field)
        red, piv = Matrix(vs, field, cols=ambient_dim).rref()
        return cls(ambient_dim, tuple(red.data[i] for i in range(len(piv))), field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        return Matrix.from_columns(self.basis, self.ambient_dim, self.field)

    def contains(self, v: Sequence) -> bool:
        if not self.basis:
            return not any(v)
        return solve_linear(self.matrix(), v) is not None

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.ambient_dim, self.field)

    def intersect(self, other: "Subspace") -> "Subspace":
        if not self.basis or not other.basis:
            return Subspace(self.ambient_dim, (), self.field)
        # x = A a = B b  <=>  [A | -B] (a, b) = 0
        A, B = self.matrix(), other.matrix()
        joint = Matrix(
            [ra + tuple(-x for x in rb) for ra, rb in zip(A.data, B.data)], self.field, cols=A.cols + B.cols
        )
        ker = kernel_basis(joint)
        return Subspace.span([A.apply(k[: A.cols]) for k in ker.basis], self.ambient_dim, self.field)

    def same_as(self, other: "Subspace") -> bool:
        return self.dim == other.dim and self.is_subspace_of(other)


def solve_linear(A: Matrix, b: Sequence):
    """Some x with A x = b, or None when the system is inconsistent."""
    if len(b) != A.rows:
        raise DimensionError(f"right-hand side of length {len(b)} for {A.rows} equations")
    f = A.field
    aug = Matrix._raw(tuple(r + (f(x),) for r, x in zip(A.data, b)), A.rows, A.cols + 1, f)
    red, piv = aug.rref()
    if A.cols in piv:
        return None
    x = [f.zero] * A.cols
    for i, c in enumerate(piv):
        x[c] = red.data[i][A.cols]
    return tuple(x)


def kernel_basis(A: Matrix) -> Subspace:
    f = A.field
    red, piv = A.rref()
    free = [c for c in range(A.cols) if c not in piv]
    basis = []
    for c in free:
        v = [f.zero] * A.cols
        v[c] = f.one
        for i, p in enumerate(piv):
            v[p] = -red.data[i][c]
        basis.append(tuple(v))
    return Subspace(A.cols, tuple(basis), f)


def image_basis(A: Matrix) -> Subspace:
    return Subspace.span(A.columns(), A.rows, A.field)


def tensor_map(f: Matrix, g: Matrix) -> Matrix:
    """Kronecker product: (f (x) g)(v (x) w) = f(v) (x) g(w)."""
    fld = f.field
    z = fld.zero
    rows = []
    for fr in f.data:
        for gr in g.data:
            row = []
            for a in fr:
                if a:
                    row.extend(a * b if b else z for b in gr)
                else:
                    row.extend((z,) * g.cols)
            rows.append(tuple(row))
    return Matrix._raw(tuple(rows), f.rows * g.rows, f.cols * g.cols, fld)


def tensor_maps(*maps: Matrix) -> Matrix:
    out = maps[0]
    for m in maps[1:]:
        out = tensor_map(out, m)
    return out


def tensor_vectors(*vs: Sequence) -> tuple:
    out = tuple(vs[0])
    for v in vs[1:]:
        out = tuple(a * b for a in out for b in v)
    return out


def permute_factors(dims: Sequence[int], perm: Sequence[int], field: Field = QQ) -> Matrix:
    """Reorder tensor factors: factor ``perm[k]`` of the source lands in slot k.

    ``permute_factors((m, n), (1, 0))`` is the flip V (x) W -> W (x) V.
    """
    dims = tuple(dims)
    new_dims = tuple(dims[p] for p in perm)
    images = []
    for idx in product(*(range(d) for d in dims)):
        new_idx = tuple(idx[p] for p in perm)
        images.append(flat_index(new_idx, new_dims))
    return Matrix.permutation(images, field)


def flip(m: int, n: int, field: Field = QQ) -> Matrix:
    return permute_factors((m, n), (1, 0), field)


def flat_index(idx: Sequence[int], dims: Sequence[int]) -> int:
    k = 0
    for i, d in zip(idx, dims):
        k = k * d + i
    return k


def split_index(k: int, dims: Sequence[int]) -> tuple[int, ...]:
    out = []
    for d in reversed(dims):
        out.append(k % d)
        k //= d
    return tuple(reversed(out))


# --------------------------------------------------------------------------
# quotients
# --------------------------------------------------------------------------


class RowReducer:
    """Incremental sparse echelon form whose pivots are the *largest* columns.

    Relations therefore eliminate late basis vectors, so the surviving quotient
    basis is the lexicographically earliest set of standard vectors that stays
    independent modulo the relations.
    """

    def __init__(self, n: int, field: Field = QQ):
        self.n = n
        self.field = field
        self.rows: dict[int, dict[int, object]] = {}

    def reduce(self, v: dict) -> dict:
        v = {k: x for k, x in v.items() if x}
        rows = self.rows
        while True:
            cand = [c for c in v if c in rows]
            if not cand:
                return v
            c = max(cand)
            a = v[c]
            for k, x in rows[c].items():
                y = v.get(k, 0) - a * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)

    def add(self, v: dict) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        c = max(v)
        inv = self.field.one / v[c]
        self.rows[c] = {k: x * inv for k, x in v.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class Quotient:
    """V / R with chosen representatives: ``projection @ section == id``."""

    ambient_dim: int
    projection: Matrix
    section: Matrix
    basis_indices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis_indices)


def quotient_from_reducer(red: RowReducer) -> Quotient:
    n, f = red.n, red.field
    keep = tuple(j for j in range(n) if j not in red.rows)
    pos = {j: i for i, j in enumerate(keep)}
    cols = []
    for j in range(n):
        r = red.reduce({j: f.one})
        cols.append({pos[k]: x for k, x in r.items()})
    proj = Matrix.from_sparse_columns(cols, len(keep), f)
    sect = Matrix.from_sparse_columns([{j: f.one} for j in keep], n, f)
    return Quotient(n, proj, sect, keep)


def quotient_space(ambient_dim: int, relations, field: Field = QQ) -> Quotient:
    """Quotient of k^ambient_dim by the span of ``relations``.

    ``relations`` is a Subspace or an iterable of vectors (dense sequences or
    sparse ``{index: value}`` dicts).
    """
    if isinstance(relations, Subspace):
        field = relations.field
        relations = relations.basis
    red = RowReducer(ambient_dim, field)
    for v in relations:
        if not isinstance(v, dict):
            if len(v) != ambient_dim:
                raise DimensionError("relation vector of wrong length")
            v = {i: x for i, x in enumerate(v) if x}
        red.add(v)
    return quotient_from_reducer(red)
