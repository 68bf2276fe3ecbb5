"""Exact matrices over a tower level, plus rank and kernel routines."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, LevelMismatch, ZeroElement
from .numfield.tower import FieldElement, FieldTower, galois_conjugate, is_algebraic_integer


def _common_field(values) -> FieldTower:
    fields = [v.field for v in values if isinstance(v, FieldElement)]
    if not fields:
        raise LevelMismatch("cannot infer a field from plain rationals")
    top = max(fields, key=lambda f: f.depth)
    for f in fields:
        if f is not top and not top.contains(f):
            raise LevelMismatch(f"{f!r} and {top!r} are not levels of one tower")
    return top


class TowerMatrix:
    """A dense matrix whose entries live at one level of a tower.

    Entries are stored as raw coordinate tuples; indexing returns
    :class:`FieldElement` objects.
    """

    __slots__ = ("field", "nrows", "ncols", "raw", "_hash")

    def __init__(self, rows: Sequence[Sequence], field: FieldTower | None = None):
        rows = [list(r) for r in rows]
        if field is None:
            field = _common_field(v for r in rows for v in r)
        self.field = field
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        if any(len(r) != self.ncols for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        self.raw = tuple(tuple(field.element(v).coords for v in r) for r in rows)
        self._hash = None

    @classmethod
    def _from_raw(cls, field, raw) -> "TowerMatrix":
        m = cls.__new__(cls)
        m.field = field
        m.raw = raw
        m.nrows = len(raw)
        m.ncols = len(raw[0]) if raw else 0
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int, field: FieldTower) -> "TowerMatrix":
        return cls.diag([1] * n, field)

    @classmethod
    def diag(cls, entries: Sequence, field: FieldTower | None = None) -> "TowerMatrix":
        if field is None:
            field = _common_field(entries)
        n = len(entries)
        z = field.zero
        return cls([[entries[i] if i == j else z for j in range(n)] for i in range(n)], field)

    # -- access ------------------------------------------------------------------
    @property
    def size(self) -> int:
        if self.nrows != self.ncols:
            raise DimensionMismatch("matrix is not square")
        return self.nrows

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return FieldElement(self.field, self.raw[i][j])

    def rows(self) -> list[list[FieldElement]]:
        f = self.field
        return [[FieldElement(f, c) for c in r] for r in self.raw]

    def entries(self) -> Iterable[FieldElement]:
        f = self.field
        for r in self.raw:
            for c in r:
                yield FieldElement(f, c)

    def lift(self, field: FieldTower) -> "TowerMatrix":
        if field is self.field:
            return self
        if not field.contains(self.field):
            raise LevelMismatch(f"{self.field!r} is not a level of {field!r}")
        pad = (Fraction(0),) * (field.degree - self.field.degree)
        return TowerMatrix._from_raw(field, tuple(tuple(c + pad for c in r) for r in self.raw))

    def descend(self) -> "TowerMatrix":
        """Re-express at the lowest level holding every entry."""
        depth = max(e.descend().level for e in self.entries()) if self.nrows else 0
        f = self.field.truncate(depth)
        if f is self.field:
            return self
        k = f.degree
        return TowerMatrix._from_raw(f, tuple(tuple(c[:k] for c in r) for r in self.raw))

    def _pair(self, other: "TowerMatrix"):
        if other.field is self.field:
            return self.field, self, other
        if self.field.depth >= other.field.depth:
            return self.field, self, other.lift(self.field)
        return other.field, self.lift(other.field), other

    # -- arithmetic ------------------------------------------------------------------
    def __matmul__(self, other: "TowerMatrix") -> "TowerMatrix":
        if not isinstance(other, TowerMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        f, a, b = self._pair(other)
        add, mul = f._add, f._mul
        zero = (Fraction(0),) * f.degree
        bcols = list(zip(*b.raw))
        out = []
        for row in a.raw:
            new = []
            for col in bcols:
                acc = zero
                for x, y in zip(row, col):
                    if any(x) and any(y):
                        acc = add(acc, mul(x, y))
                new.append(acc)
            out.append(tuple(new))
        return TowerMatrix._from_raw(f, tuple(out))

    def __mul__(self, scalar) -> "TowerMatrix":
        s = self.field.element(scalar) if not isinstance(scalar, FieldElement) else scalar
        if s.field.depth > self.field.depth:
            return self.lift(s.field) * s
        s = s.lift(self.field)
        mul = self.field._mul
        return TowerMatrix._from_raw(self.field, tuple(tuple(mul(c, s.coords) for c in r) for r in self.raw))

    __rmul__ = __mul__

    def __add__(self, other: "TowerMatrix") -> "TowerMatrix":
        f, a, b = self._pair(other)
        return TowerMatrix._from_raw(f, tuple(tuple(f._add(x, y) for x, y in zip(r, s)) for r, s in zip(a.raw, b.raw)))

    def __sub__(self, other: "TowerMatrix") -> "TowerMatrix":
        f, a, b = self._pair(other)
        return TowerMatrix._from_raw(f, tuple(tuple(f._sub(x, y) for x, y in zip(r, s)) for r, s in zip(a.raw, b.raw)))

    def __neg__(self) -> "TowerMatrix":
        return TowerMatrix._from_raw(self.field, tuple(tuple(self.field._neg(x) for x in r) for r in self.raw))

    @property
    def T(self) -> "TowerMatrix":
        return TowerMatrix._from_raw(self.field, tuple(zip(*self.raw)))

    def conj(self) -> "TowerMatrix":
        """Apply the top-step Galois involution entrywise."""
        return TowerMatrix([[galois_conjugate(e) for e in r] for r in self.rows()], self.field)

    def adjoint(self) -> "TowerMatrix":
        """Conjugate transpose with respect to the top-step involution."""
        return self.conj().T

    def trace(self) -> FieldElement:
        f = self.field
        acc = (Fraction(0),) * f.degree
        for i in range(self.size):
            acc = f._add(acc, self.raw[i][i])
        return FieldElement(f, acc)

    def __pow__(self, k: int) -> "TowerMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = TowerMatrix.identity(self.size, self.field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def det(self) -> FieldElement:
        """Determinant by Bareiss fraction-free elimination."""
        n = self.size
        f = self.field
        A = [list(r) for r in self.raw]
        one = f.one.coords
        prev = one
        sign = 1
        for k in range(n - 1):
            if not any(A[k][k]):
                for r in range(k + 1, n):
                    if any(A[r][k]):
                        A[k], A[r] = A[r], A[k]
                        sign = -sign
                        break
                else:
                    return f.zero
            inv_prev = f._inv(prev)
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = f._sub(f._mul(A[i][j], A[k][k]), f._mul(A[i][k], A[k][j]))
                    A[i][j] = f._mul(num, inv_prev)
            prev = A[k][k]
        d = FieldElement(f, A[n - 1][n - 1]) if n else f.one
        return -d if sign < 0 else d

    def inverse(self) -> "TowerMatrix":
        n = self.size
        f = self.field
        zero = f.zero.coords
        one = f.one.coords
        A = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(self.raw)]
        for c in range(n):
            p = next((r for r in range(c, n) if any(A[r][c])), None)
            if p is None:
                raise ZeroElement("matrix is singular")
            A[c], A[p] = A[p], A[c]
            inv = f._inv(A[c][c])
            A[c] = [f._mul(x, inv) for x in A[c]]
            for r in range(n):
                if r != c and any(A[r][c]):
                    factor = A[r][c]
                    A[r] = [f._sub(x, f._mul(factor, y)) for x, y in zip(A[r], A[c])]
        return TowerMatrix._from_raw(f, tuple(tuple(r[n:]) for r in A))

    # -- comparison --------------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, TowerMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        if other.field is self.field:
            return self.raw == other.raw
        try:
            _, a, b = self._pair(other)
        except LevelMismatch:
            return False
        return a.raw == b.raw

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(e for e in self.entries()))
        return self._hash

    def is_identity(self) -> bool:
        f = self.field
        one, zero = f.one.coords, f.zero.coords
        return all(c == (one if i == j else zero) for i, r in enumerate(self.raw) for j, c in enumerate(r))

    def is_integral(self) -> bool:
        return all(is_algebraic_integer(e) for e in self.entries())

    def height(self) -> Fraction:
        """Largest absolute value of any rational coordinate of any entry."""
        return max((abs(c) for r in self.raw for e in r for c in e), default=Fraction(0))

    def __repr__(self):
        return "TowerMatrix([" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows()) + "])"


def matrix(rows, field: FieldTower) -> TowerMatrix:
    return TowerMatrix(rows, field)


# -- elimination over a tower level ---------------------------------------------------

class Echelon:
    """Incrementally maintained semi-echelon basis of a subspace of F^m."""

    def __init__(self, field: FieldTower, dim: int):
        self.field = field
        self.dim = dim
        self.rows: list[tuple[int, list]] = []

    def reduce(self, vec: list) -> list:
        f = self.field
        v = list(vec)
        for p, row in self.rows:
            if any(v[p]):
                c = v[p]
                v = [f._sub(x, f._mul(c, y)) if any(y) else x for x, y in zip(v, row)]
        return v

    def add(self, vec: Sequence) -> bool:
        """Insert *vec* (raw coordinates); return True if it enlarged the span."""
        v = self.reduce(vec)
        p = next((i for i, x in enumerate(v) if any(x)), None)
        if p is None:
            return False
        inv = self.field._inv(v[p])
        self.rows.append((p, [self.field._mul(x, inv) for x in v]))
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def full(self) -> bool:
        return self.rank == self.dim


def rank(vectors: Iterable[Sequence[FieldElement]], field: FieldTower) -> int:
    vectors = list(vectors)
    if not vectors:
        return 0
    ech = Echelon(field, len(vectors[0]))
    for v in vectors:
        ech.add([field.element(x).coords for x in v])
    return ech.rank


def kernel(equations: Sequence[Sequence], ncols: int, field: FieldTower) -> list[list[FieldElement]]:
    """Basis of ``{x : E x = 0}`` for the rows *E* (raw coordinate tuples or elements)."""
    f = field
    zero = f.zero.coords
    rows = [[(x.lift(f).coords if isinstance(x, FieldElement) else x) for x in r] for r in equations]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if any(rows[i][c])), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = f._inv(rows[r][c])
        rows[r] = [f._mul(x, inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and any(rows[i][c]):
                fac = rows[i][c]
                rows[i] = [f._sub(x, f._mul(fac, y)) if any(y) else x for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = f.one.coords
        for i, pc in enumerate(pivots):
            vec[pc] = f._neg(rows[i][fc])
        basis.append([FieldElement(f, x) for x in vec])
    return basis
