"""Exact dense linear algebra over the rationals and prime fields.

Prime-field matrices are numpy ``int64`` arrays of residues in ``[0, p)``;
rational matrices are numpy object arrays of :class:`fractions.Fraction`.
Row reduction over a prime field is incremental: rows are folded into a
reduced basis in chunks, and the heavy updates are matrix products carried
out in ``float64`` (exact while ``p**2 * ncols < 2**53``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

_FLOAT_EXACT = 2**53


class MalformedMatrixError(ValueError):
    """Raised for ragged input, mixed fields or out-of-range residues."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class RationalField:
    def __str__(self) -> str:
        return "QQ"

    @property
    def tag(self) -> str:
        return "rational"

    def convert(self, x) -> Fraction:
        return Fraction(x)

    def signed(self, x) -> Fraction:
        return Fraction(x)


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def __str__(self) -> str:
        return f"GF({self.p})"

    @property
    def tag(self) -> str:
        return f"prime {self.p}"

    def convert(self, x) -> int:
        x = Fraction(x)
        return x.numerator * pow(x.denominator, -1, self.p) % self.p

    def signed(self, x) -> int:
        """Symmetric representative in (-p/2, p/2]."""
        x = int(x) % self.p
        return x - self.p if x > self.p // 2 else x


QQ = RationalField()
Field = RationalField | PrimeField


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_spec(spec: str | int | None) -> Field:
    """``None``/``"rational"``/``"QQ"`` -> rationals, an integer -> GF(p)."""
    if spec is None or str(spec).lower() in ("rational", "qq", "q"):
        return QQ
    return GF(int(spec))


# --------------------------------------------------------------------------
# matrices


@dataclass(frozen=True, eq=False)
class DenseMatrix:
    field: Field
    data: np.ndarray

    def __post_init__(self):
        d = self.data
        if d.ndim != 2:
            raise MalformedMatrixError("matrix data must be two-dimensional")
        if isinstance(self.field, PrimeField):
            if d.dtype != np.int64:
                raise MalformedMatrixError(f"expected int64 residues, got {d.dtype}")
            if d.size and (d.min() < 0 or d.max() >= self.field.p):
                raise MalformedMatrixError("residue outside [0, p)")
        elif d.dtype != object:
            raise MalformedMatrixError("rational matrices hold Fraction objects")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], field: Field, ncols: int | None = None) -> DenseMatrix:
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise MalformedMatrixError("cannot infer width of an empty matrix")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise MalformedMatrixError("ragged rows")
        return cls(field, _to_array([[field.convert(x) for x in r] for r in rows], field, ncols))

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field) -> DenseMatrix:
        return cls(field, _zeros(nrows, ncols, field))

    @classmethod
    def identity(cls, n: int, field: Field) -> DenseMatrix:
        m = _zeros(n, n, field)
        for i in range(n):
            m[i, i] = 1 if isinstance(field, PrimeField) else Fraction(1)
        return cls(field, m)

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    @property
    def ncols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def entries(self) -> list:
        return [x for row in self.tolist() for x in row]

    def tolist(self) -> list[list]:
        if isinstance(self.field, PrimeField):
            return self.data.tolist()
        return [list(r) for r in self.data]

    def signed_rows(self) -> list[list]:
        return [[self.field.signed(x) for x in row] for row in self.tolist()]

    def transpose(self) -> DenseMatrix:
        return DenseMatrix(self.field, np.ascontiguousarray(self.data.T))

    def __matmul__(self, other: DenseMatrix) -> DenseMatrix:
        _same_field(self, other)
        return DenseMatrix(self.field, _mul(self.data, other.data, self.field))

    def apply(self, vector: Sequence) -> list:
        """Matrix-vector product."""
        v = _to_array([[self.field.convert(x)] for x in vector], self.field, 1)
        return [row[0] for row in DenseMatrix(self.field, _mul(self.data, v, self.field)).tolist()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.all(self.data == other.data))

    __hash__ = None


def _zeros(nrows: int, ncols: int, field: Field) -> np.ndarray:
    if isinstance(field, PrimeField):
        return np.zeros((nrows, ncols), dtype=np.int64)
    m = np.empty((nrows, ncols), dtype=object)
    m.fill(Fraction(0))
    return m


def _to_array(rows: list[list], field: Field, ncols: int) -> np.ndarray:
    out = _zeros(len(rows), ncols, field)
    for i, r in enumerate(rows):
        if r:
            out[i, :] = r
    return out


def _same_field(*ms: DenseMatrix) -> None:
    if len({m.field for m in ms}) > 1:
        raise MalformedMatrixError("mixed field tags: " + ", ".join(str(m.field) for m in ms))


def vstack(ms: Sequence[DenseMatrix]) -> DenseMatrix:
    if not ms:
        raise MalformedMatrixError("nothing to stack")
    _same_field(*ms)
    if len({m.ncols for m in ms}) > 1:
        raise MalformedMatrixError("column counts differ")
    return DenseMatrix(ms[0].field, np.vstack([m.data for m in ms]))


def _mulmod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if p * p * a.shape[1] < _FLOAT_EXACT:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return np.fmod(prod, p).astype(np.int64)
    prod = a.astype(object) @ b.astype(object)
    return (prod % p).astype(np.int64)


def _mul(a: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray:
    if isinstance(field, PrimeField):
        return _mulmod(a, b, field.p)
    out = _zeros(a.shape[0], b.shape[1], field)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            out[i, j] = sum((a[i, k] * b[k, j] for k in range(a.shape[1])), Fraction(0))
    return out


# --------------------------------------------------------------------------
# row reduction


def _rref_small(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan on a (short) residue array, in place. Returns nonzero rows and pivots."""
    m = a.shape[0]
    pivots: list[int] = []
    r = 0
    for c in np.flatnonzero(a.any(axis=0)):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(int(c))
        r += 1
    return a[:r], pivots


class Echelon:
    """Incrementally maintained reduced row-echelon basis over GF(p).

    ``add`` folds new rows in and returns how much the rank grew. The stored
    basis is always the unique RCF of everything added so far, so results do
    not depend on how rows were chunked.
    """

    def __init__(self, ncols: int, p: int, chunk: int | None = None):
        self.ncols = ncols
        self.p = p
        self.chunk = chunk or max(64, min(512, ncols // 8))
        self.basis = np.zeros((0, ncols), dtype=np.int64)
        self.pivots = np.zeros(0, dtype=np.int64)
        self._exact = p * p * ncols < _FLOAT_EXACT
        self._basis_f = None

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def copy(self) -> Echelon:
        e = Echelon(self.ncols, self.p, self.chunk)
        e.basis = self.basis.copy()
        e.pivots = self.pivots.copy()
        return e

    def reduce(self, rows: np.ndarray) -> np.ndarray:
        """Residues of ``rows`` modulo the current span (pivot columns cleared)."""
        rows = np.asarray(rows, dtype=np.int64) % self.p
        if self.rank == 0 or rows.shape[0] == 0:
            return rows
        if self._basis_f is None or self._basis_f.shape != self.basis.shape:
            self._basis_f = self.basis.astype(np.float64) if self._exact else None
        if self._exact:
            prod = np.fmod(rows[:, self.pivots].astype(np.float64) @ self._basis_f, self.p).astype(np.int64)
        else:
            prod = _mulmod(rows[:, self.pivots], self.basis, self.p)
        return (rows - prod) % self.p

    def contains(self, rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(rows)
        return ~self.reduce(rows).any(axis=1)

    def add(self, rows: np.ndarray) -> int:
        rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
        if rows.shape[1] != self.ncols:
            raise MalformedMatrixError(f"row width {rows.shape[1]} != {self.ncols}")
        before = self.rank
        for start in range(0, rows.shape[0], self.chunk):
            self._add_chunk(rows[start:start + self.chunk])
            if self.rank == self.ncols:
                break
        return self.rank - before

    def _add_chunk(self, rows: np.ndarray) -> None:
        red, new = _rref_small(self.reduce(rows), self.p)
        if not new:
            return
        basis = self.basis
        if basis.shape[0]:
            basis = (basis - _mulmod(basis[:, new], red, self.p)) % self.p
        basis = np.vstack([basis, red])
        pivots = np.concatenate([self.pivots, np.asarray(new, dtype=np.int64)])
        order = np.argsort(pivots, kind="stable")
        self.basis = basis[order]
        self.pivots = pivots[order]
        self._basis_f = None


def _rref_fractions(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        i = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if i is None:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        piv = rows[r]
        for k in range(m):
            f = rows[k][c]
            if k != r and f != 0:
                rows[k] = [x - f * y for x, y in zip(rows[k], piv)]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


@dataclass(frozen=True, eq=False)
class RcfResult:
    rank: int
    rcf: DenseMatrix
    pivot_columns: tuple[int, ...]


def rcf(m: DenseMatrix) -> RcfResult:
    """Row canonical (reduced row-echelon) form, dropping zero rows."""
    if isinstance(m.field, PrimeField):
        ech = Echelon(m.ncols, m.field.p)
        ech.add(m.data)
        out = DenseMatrix(m.field, ech.basis.copy())
        return RcfResult(ech.rank, out, tuple(int(c) for c in ech.pivots))
    rows, piv = _rref_fractions(m.tolist())
    out = DenseMatrix(m.field, _to_array(rows, m.field, m.ncols))
    return RcfResult(len(piv), out, tuple(piv))


def rank(m: DenseMatrix) -> int:
    return rcf(m).rank


def nullspace_from_rcf(res: RcfResult, ncols: int) -> list[list]:
    field = res.rcf.field
    pivots = set(res.pivot_columns)
    rows = res.rcf.tolist()
    neg = (lambda x: (-x) % field.p) if isinstance(field, PrimeField) else (lambda x: -x)
    zero = 0 if isinstance(field, PrimeField) else Fraction(0)
    one = 1 if isinstance(field, PrimeField) else Fraction(1)
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = [zero] * ncols
        v[f] = one
        for row, c in zip(rows, res.pivot_columns):
            if row[f] != 0:
                v[c] = neg(row[f])
        basis.append(v)
    return basis


def nullspace_basis(m: DenseMatrix) -> list[list]:
    """Canonical right-nullspace basis: one vector per non-pivot column."""
    return nullspace_from_rcf(rcf(m), m.ncols)


# --------------------------------------------------------------------------
# subspaces


class Subspace:
    """Row space stored as its RCF; equality means identical RCF."""

    def __init__(self, field: Field, ncols: int, rows: DenseMatrix | None = None):
        self.field = field
        self.ncols = ncols
        if isinstance(field, PrimeField):
            self._ech = Echelon(ncols, field.p)
        else:
            self._rows: list[list[Fraction]] = []
            self._piv: list[int] = []
        if rows is not None:
            self.add(rows)

    @classmethod
    def from_rows(cls, vectors: Sequence[Sequence], field: Field, ncols: int | None = None) -> Subspace:
        vectors = list(vectors)
        if ncols is None:
            if not vectors:
                raise MalformedMatrixError("cannot infer dimension of an empty generating set")
            ncols = len(vectors[0])
        s = cls(field, ncols)
        if vectors:
            s.add(DenseMatrix.from_rows(vectors, field, ncols))
        return s

    def add(self, rows: DenseMatrix | np.ndarray) -> int:
        if isinstance(rows, DenseMatrix):
            if rows.field != self.field:
                raise MalformedMatrixError("mixed field tags")
            rows = rows.data
        if rows.shape[1] != self.ncols:
            raise MalformedMatrixError(f"vector length {rows.shape[1]} != {self.ncols}")
        if isinstance(self.field, PrimeField):
            return self._ech.add(rows)
        before = len(self._piv)
        self._rows, self._piv = _rref_fractions(self._rows + [list(r) for r in rows])
        return len(self._piv) - before

    @property
    def dim(self) -> int:
        return self._ech.rank if isinstance(self.field, PrimeField) else len(self._piv)

    @property
    def echelon(self) -> Echelon:
        return self._ech

    @property
    def pivots(self) -> tuple[int, ...]:
        if isinstance(self.field, PrimeField):
            return tuple(int(c) for c in self._ech.pivots)
        return tuple(self._piv)

    def matrix(self) -> DenseMatrix:
        if isinstance(self.field, PrimeField):
            return DenseMatrix(self.field, self._ech.basis.copy())
        return DenseMatrix(self.field, _to_array(self._rows, self.field, self.ncols))

    def contains(self, vector: Sequence) -> bool:
        if len(vector) != self.ncols:
            raise MalformedMatrixError(f"vector length {len(vector)} != {self.ncols}")
        if isinstance(self.field, PrimeField):
            v = np.array([self.field.convert(x) for x in vector], dtype=np.int64)
            return bool(self._ech.contains(v)[0])
        _, piv = _rref_fractions(self._rows + [[Fraction(x) for x in vector]])
        return len(piv) == len(self._piv)

    def __contains__(self, vector) -> bool:
        return self.contains(vector)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.field == other.field and self.ncols == other.ncols and self.matrix() == other.matrix()

    __hash__ = None

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ncols={self.ncols}, field={self.field})"


def subspace_from_rows(vectors, field: Field, ncols: int | None = None) -> Subspace:
    return Subspace.from_rows(vectors, field, ncols)


def subspace_dim(space: Subspace) -> int:
    return space.dim


def subspace_contains(space: Subspace, vector) -> bool:
    return space.contains(vector)


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    if a.ncols != b.ncols:
        raise MalformedMatrixError("subspaces live in different ambient dimensions")
    return a == b
