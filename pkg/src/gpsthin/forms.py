"""Diagonal quadratic and Hermitian forms and their (special) isometry groups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch, IsotropicVector, LevelMismatch, NoneFound, NotAnIsometry
from .linalg import TowerMatrix
from .numfield.tower import FieldElement, FieldTower, is_algebraic_integer, relative_norm


@dataclass(frozen=True)
class Check:
    """Outcome of a membership test; falsy on failure, with a witness."""

    ok: bool
    witness: dict | None = None

    def __bool__(self):
        return self.ok


class DiagonalForm:
    """``c_1 x_1^2 + ... + c_n x_n^2 - c_{n+1} x_{n+1}^2``.

    The coefficients are stored as written, so the last one is the
    positive number whose negative appears in the Gram matrix.
    """

    def __init__(self, coefficients: Sequence, field: FieldTower | None = None):
        if field is None:
            field = max((c.field for c in coefficients if isinstance(c, FieldElement)),
                        key=lambda f: f.depth)
        self.field = field
        self.coefficients = tuple(field.element(c) for c in coefficients)
        if len(self.coefficients) < 2:
            raise DimensionMismatch("a form needs at least two variables")
        if any(c.is_zero() for c in self.coefficients):
            raise ValueError("form coefficients must be nonzero")

    @classmethod
    def from_gram_diagonal(cls, diagonal: Sequence, field: FieldTower) -> "DiagonalForm":
        """Build from the Gram diagonal, e.g. ``<1, 1, 1, -1>``."""
        diag = [field.element(c) for c in diagonal]
        return cls(diag[:-1] + [-diag[-1]], field)

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    @property
    def n(self) -> int:
        return self.dim - 1

    @property
    def gram_diagonal(self) -> tuple[FieldElement, ...]:
        return self.coefficients[:-1] + (-self.coefficients[-1],)

    @property
    def gram(self) -> TowerMatrix:
        return TowerMatrix.diag(list(self.gram_diagonal), self.field)

    def restricted(self) -> "DiagonalForm":
        """The form on the hyperplane ``x_1 = 0``."""
        return DiagonalForm(self.coefficients[1:], self.field)

    def lift(self, field: FieldTower) -> "DiagonalForm":
        return DiagonalForm([c.lift(field) for c in self.coefficients], field)

    def bilinear(self, x: Sequence, y: Sequence) -> FieldElement:
        _check_len(self, x)
        _check_len(self, y)
        acc = self.field.zero
        for g, a, b in zip(self.gram_diagonal, x, y):
            acc = acc + g * a * b
        return acc

    def __eq__(self, other):
        return isinstance(other, DiagonalForm) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return "DiagonalForm<" + ", ".join(str(c) for c in self.gram_diagonal) + ">"


class HermitianForm:
    """``Σ g_i N(x_i)`` on ``M^{n+1}`` for a diagonal form over ``L`` and ``M = L(√r)``."""

    def __init__(self, base_form: DiagonalForm, extension: FieldTower):
        if not extension.depth or extension.parent != base_form.field:
            raise LevelMismatch("the extension must be a quadratic step over the form's field")
        self.base_form = base_form
        self.extension = extension

    @property
    def dim(self) -> int:
        return self.base_form.dim

    @property
    def gram(self) -> TowerMatrix:
        return self.base_form.gram.lift(self.extension)

    def __repr__(self):
        return f"HermitianForm({self.base_form!r} over {self.extension.describe()})"


def _check_len(form, v):
    if len(v) != form.dim:
        raise DimensionMismatch(f"vector of length {len(v)} for a form in {form.dim} variables")


def evaluate_quadratic(J: DiagonalForm, v: Sequence) -> FieldElement:
    _check_len(J, v)
    acc = J.field.zero
    for g, x in zip(J.gram_diagonal, v):
        acc = acc + g * x * x
    return acc


def evaluate_hermitian(H: HermitianForm, v: Sequence) -> FieldElement:
    _check_len(H, v)
    M = H.extension
    acc = H.base_form.field.zero
    for g, x in zip(H.base_form.gram_diagonal, v):
        x = M.element(x)
        acc = acc + g * relative_norm(x)
    return acc


def _gram_check(lhs: TowerMatrix, G: TowerMatrix, B: TowerMatrix) -> Check:
    if lhs.shape != G.shape:
        raise DimensionMismatch(f"{B.shape} matrix against a form of size {G.shape}")
    diff = lhs - G
    for i in range(diff.nrows):
        for j in range(diff.ncols):
            e = diff[i, j]
            if not e.is_zero():
                return Check(False, {"kind": "gram", "entry": [i + 1, j + 1], "value": e.descend()})
    d = B.det()
    if d != 1:
        return Check(False, {"kind": "determinant", "value": d.descend()})
    return Check(True)


def is_special_isometry(B: TowerMatrix, J: DiagonalForm) -> Check:
    """``B^T G B == G`` and ``det B == 1``, checked exactly."""
    if B.shape != (J.dim, J.dim):
        raise DimensionMismatch(f"{B.shape} matrix against a form in {J.dim} variables")
    G = J.gram
    return _gram_check(B.T @ G @ B, G, B)


def is_special_unitary(A: TowerMatrix, H: HermitianForm) -> Check:
    """``A^† G A == G`` (τ-conjugate transpose) and ``det A == 1``."""
    if A.shape != (H.dim, H.dim):
        raise DimensionMismatch(f"{A.shape} matrix against a form in {H.dim} variables")
    A = A.lift(H.extension)
    G = H.gram
    return _gram_check(A.adjoint() @ G @ A, G, A)


def integral_entries(A: TowerMatrix) -> bool:
    return all(is_algebraic_integer(e) for e in A.entries())


def first_nonintegral_entry(A: TowerMatrix):
    for i, row in enumerate(A.rows()):
        for j, e in enumerate(row):
            if not is_algebraic_integer(e):
                return (i + 1, j + 1), e
    return None


def reflection_matrix(v: Sequence, J: DiagonalForm) -> TowerMatrix:
    """``x ↦ x - 2 <x,v>/<v,v> v`` as a matrix."""
    _check_len(J, v)
    F = J.field
    v = [F.element(x) for x in v]
    q = J.bilinear(v, v)
    if q.is_zero():
        raise IsotropicVector(f"<v,v> = 0 for v = {[str(x) for x in v]}")
    Gv = [g * x for g, x in zip(J.gram_diagonal, v)]
    two_over_q = 2 / q
    n = J.dim
    return TowerMatrix([[(1 if i == j else 0) - two_over_q * v[i] * Gv[j] for j in range(n)]
                        for i in range(n)], F)


# -- desk-scale isometry samples -------------------------------------------------------

def _integral_points(F: FieldTower, height: int):
    """Elements with integer base-level coordinates in ``[-height, height]``."""
    d = F.base_degree
    for c in itertools.product(range(-height, height + 1), repeat=d):
        yield F.element(list(c))


def _canonical_sign(vec) -> bool:
    for x in vec:
        for c in x.coords:
            if c:
                return c > 0
    return False


def integral_reflection_vectors(J: DiagonalForm, height_bound: int) -> list:
    """Vectors of coordinate height ≤ bound whose reflection has integral entries."""
    F = J.field
    pts = list(_integral_points(F, height_bound))
    out = []
    seen = set()
    for v in itertools.product(pts, repeat=J.dim):
        if not _canonical_sign(v):
            continue
        q = J.bilinear(v, v)
        if q.is_zero():
            continue
        if not all(is_algebraic_integer(2 * g * x / q) for g, x in zip(J.gram_diagonal, v)):
            continue
        r = reflection_matrix(v, J)
        if r in seen:
            continue
        seen.add(r)
        out.append((v, r))
    out.sort(key=lambda vr: (max(abs(c) for x in vr[0] for c in x.coords),
                             [c for x in vr[0] for c in x.coords]))
    return out


def iter_isometries(J: DiagonalForm, height_bound: int, entry_bound: int | None = None):
    """Lazily yield the distinct non-identity products of two integral reflections.

    Pair ``(i, j)`` of the sorted reflection list is visited in order of
    ``max(i, j)`` then ``min(i, j)``, both orders of each pair.
    """
    if height_bound < 1:
        raise ValueError("height_bound must be >= 1")
    refl = [r for _, r in integral_reflection_vectors(J, height_bound)]
    seen = set()
    for j in range(len(refl)):
        for i in range(j):
            for a, b in ((refl[i], refl[j]), (refl[j], refl[i])):
                P = a @ b
                if P.is_identity() or P in seen:
                    continue
                if entry_bound is not None and P.height() > entry_bound:
                    continue
                seen.add(P)
                yield P


def sample_isometries(J: DiagonalForm, height_bound: int, count: int | None,
                      entry_bound: int | None = None) -> list[TowerMatrix]:
    """Integral special isometries found as products of two integral reflections.

    Reflection vectors have coordinate height at most *height_bound*.  Products
    are deduplicated, the identity is dropped, and with *entry_bound* only
    products whose coordinates are bounded by it are kept.  Results come in
    the discovery order of :func:`iter_isometries`; ``count=None`` returns all.
    """
    if height_bound < 1:
        raise ValueError("height_bound must be >= 1")
    if count == 0:
        return []
    found = list(itertools.islice(iter_isometries(J, height_bound, entry_bound), count))
    if not found:
        raise NoneFound(f"no nontrivial isometry from reflections of height <= {height_bound}")
    return found


def hyperplane_stabilizer_member(B: TowerMatrix, J: DiagonalForm) -> bool:
    """Whether *B* = Diag(1, B') with B' a special isometry of the restricted form."""
    if not is_special_isometry(B, J):
        raise NotAnIsometry("matrix is not a special isometry of the form")
    n = J.dim
    if B[0, 0] != 1:
        return False
    if any(not B[0, j].is_zero() or not B[j, 0].is_zero() for j in range(1, n)):
        return False
    inner = TowerMatrix([[B[i, j] for j in range(1, n)] for i in range(1, n)], B.field)
    return bool(is_special_isometry(inner, J.restricted().lift(B.field)))


def block_embed(inner: TowerMatrix, leading=1) -> TowerMatrix:
    """``Diag(leading, inner)``."""
    F = inner.field
    n = inner.nrows + 1
    rows = [[F.element(leading)] + [F.zero] * (n - 1)]
    for r in inner.rows():
        rows.append([F.zero] + r)
    return TowerMatrix(rows, F)
