"""Towers of real quadratic extensions over a totally real base field.

A tower ``K = F_0 ⊂ F_1 ⊂ ... ⊂ F_k`` is stored relatively: ``F_0 = Q[x]/(f)``
with the power basis ``1, θ, ..., θ^(d-1)``, and ``F_j = F_{j-1}(√ρ_j)``.
An element of ``F_j`` is a flat tuple of ``d * 2**j`` rationals: the first half
are the coordinates of ``x`` and the second half those of ``y`` in
``x + y √ρ_j``.  With this layout an element of a lower level lifts to a
higher one by zero padding, so lifting never changes the prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import isqrt
from numbers import Rational
from typing import Iterable, Sequence

from ..errors import (
    BaseLevelElement,
    LevelMismatch,
    NotIrreducible,
    NotSquarefree,
    NotTotallyReal,
    NotTotallyRealExtension,
    RadicandIsSquare,
    ZeroElement,
)
from . import poly as P

ZERO = Fraction(0)
ONE = Fraction(1)

# precision schedule (bits) for sign certification
_START_BITS = 24
_MAX_BITS = 1 << 16


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class FieldTower:
    """A base field ``Q[x]/(f)`` plus an ordered list of square-root steps.

    Instances are immutable and compare by value.  Use :func:`make_base_field`
    and :func:`adjoin_sqrt` rather than calling the constructor directly; they
    perform the validity checks.
    """

    __slots__ = ("base_min_poly", "radicands", "root_index", "signs", "parent", "_key", "__dict__")

    def __init__(self, base_min_poly, radicands=(), root_index=0, signs=None, parent=None):
        self.base_min_poly = tuple(_q(c) for c in base_min_poly)
        self.radicands = tuple(tuple(_q(c) for c in r) for r in radicands)
        self.root_index = root_index
        self.signs = tuple(signs) if signs is not None else (1,) * len(self.radicands)
        if parent is None and self.radicands:
            parent = FieldTower(self.base_min_poly, self.radicands[:-1], root_index, self.signs[:-1])
        self.parent = parent
        self._key = (self.base_min_poly, self.radicands, self.root_index, self.signs)

    # -- identity -------------------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FieldTower) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"FieldTower({self.describe()})"

    def describe(self) -> str:
        name = "Q" if self.base_degree == 1 else f"Q[x]/({_poly_str(self.base_min_poly)})"
        for j, r in enumerate(self.radicands):
            name += f"(√({self.truncate(j).element(r)}))"
        return name

    # -- structure --------------------------------------------------------------
    @property
    def depth(self) -> int:
        return len(self.radicands)

    @property
    def base_degree(self) -> int:
        return len(self.base_min_poly) - 1

    @property
    def degree(self) -> int:
        """Absolute degree over Q."""
        return self.base_degree << self.depth

    def truncate(self, depth: int) -> "FieldTower":
        t = self
        if depth > self.depth or depth < 0:
            raise ValueError(f"no level {depth} in a tower of depth {self.depth}")
        while t.depth > depth:
            t = t.parent
        return t

    def contains(self, other: "FieldTower") -> bool:
        """True if *other* is a level of this tower (possibly the top)."""
        return other.depth <= self.depth and self.truncate(other.depth) == other

    @cached_property
    def base_poly_tuple(self) -> tuple:
        return self.base_min_poly

    @cached_property
    def _reduction(self) -> list:
        """Coordinates of θ^k for k = d .. 2d-2 in the power basis."""
        f = list(self.base_min_poly)
        d = self.base_degree
        out = []
        cur = [-c for c in f[:-1]]  # θ^d
        for _ in range(max(d - 1, 0)):
            out.append(cur)
            # multiply by θ
            top = cur[-1]
            cur = [ZERO] + cur[:-1]
            cur = [c + top * (-f[i]) for i, c in enumerate(cur)]
        return out

    @cached_property
    def basis_integral(self) -> bool:
        """Whether every basis vector is an algebraic integer."""
        if any(c.denominator != 1 for c in self.base_min_poly):
            return False
        if self.depth == 0:
            return True
        return self.parent.basis_integral and all(c.denominator == 1 for c in self.radicands[-1])

    # -- element construction ---------------------------------------------------
    def element(self, value=0) -> "FieldElement":
        """Coerce an int, rational, ``"p/q"`` string, coordinate list, or element."""
        if isinstance(value, FieldElement):
            return value.lift(self)
        if isinstance(value, (list, tuple)):
            coords = tuple(_q(c) for c in value)
            if len(coords) > self.degree:
                raise ValueError(f"{len(coords)} coordinates for a field of degree {self.degree}")
            return FieldElement(self, coords + (ZERO,) * (self.degree - len(coords)))
        c = _q(value)
        return FieldElement(self, (c,) + (ZERO,) * (self.degree - 1))

    __call__ = element

    @property
    def zero(self) -> "FieldElement":
        return self.element(0)

    @property
    def one(self) -> "FieldElement":
        return self.element(1)

    @property
    def gen(self) -> "FieldElement":
        """√ρ of the top step, or θ for a base field."""
        coords = [ZERO] * self.degree
        if self.depth:
            coords[self.degree // 2] = ONE
        elif self.base_degree > 1:
            coords[1] = ONE
        else:
            coords[0] = -self.base_min_poly[0]
        return FieldElement(self, tuple(coords))

    @property
    def radicand(self) -> "FieldElement":
        if not self.depth:
            raise BaseLevelElement("a base field has no radicand")
        return FieldElement(self.parent, self.radicands[-1])

    # -- raw arithmetic on coordinate tuples -------------------------------------
    def _add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def _sub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def _neg(self, x):
        return tuple(-a for a in x)

    def _mul(self, x, y):
        if self.depth == 0:
            d = self.base_degree
            if d == 1:
                return (x[0] * y[0],)
            prod = [ZERO] * (2 * d - 1)
            for i, a in enumerate(x):
                if a:
                    for j, b in enumerate(y):
                        if b:
                            prod[i + j] += a * b
            out = prod[:d]
            for k, c in enumerate(prod[d:]):
                if c:
                    red = self._reduction[k]
                    out = [o + c * r for o, r in zip(out, red)]
            return tuple(out)
        h = len(x) // 2
        par = self.parent
        a, b, c, d = x[:h], x[h:], y[:h], y[h:]
        b_nz = any(b)
        d_nz = any(d)
        re = par._mul(a, c)
        if b_nz and d_nz:
            re = par._add(re, par._mul(par._mul(b, d), self.radicands[-1]))
        zeros = (ZERO,) * h
        im1 = par._mul(a, d) if d_nz else zeros
        im2 = par._mul(b, c) if b_nz else zeros
        return re + par._add(im1, im2)

    def _inv(self, x):
        if not any(x):
            raise ZeroElement("inverse of zero")
        if self.depth == 0:
            d = self.base_degree
            if d == 1:
                return (1 / x[0],)
            s, _, g = P.gcdex(P.strip(x), list(self.base_min_poly))
            if P.degree(g) != 0:
                raise ZeroElement("element is not invertible")
            return tuple(s) + (ZERO,) * (d - len(s))
        h = len(x) // 2
        par = self.parent
        a, b = x[:h], x[h:]
        if not any(b):
            return par._inv(a) + (ZERO,) * h
        n = par._sub(par._mul(a, a), par._mul(par._mul(b, b), self.radicands[-1]))
        ni = par._inv(n)
        return par._mul(a, ni) + par._neg(par._mul(b, ni))

    # -- embeddings ---------------------------------------------------------------
    @cached_property
    def base_roots(self) -> list:
        """Isolating intervals for the real roots of the base polynomial."""
        return P.isolate_real_roots(list(self.base_min_poly))

    @cached_property
    def designated_embedding(self) -> "EmbeddingHandle":
        return EmbeddingHandle(self, self.root_index, self.signs)

    @cached_property
    def _embeddings(self) -> tuple:
        if self.depth == 0:
            handles = [EmbeddingHandle(self, i, ()) for i in range(len(self.base_roots))]
        else:
            handles = []
            rho = self.radicand
            for e in self.parent.embeddings():
                if certified_sign(rho, e).sign == "positive":
                    handles.append(EmbeddingHandle(self, e.root_index, e.signs + (1,)))
                    handles.append(EmbeddingHandle(self, e.root_index, e.signs + (-1,)))
        sigma0 = self.designated_embedding
        rest = sorted((h for h in handles if h != sigma0), key=lambda h: (h.root_index, [-s for s in h.signs]))
        return (sigma0,) + tuple(rest)

    def embeddings(self) -> tuple:
        """All real embeddings, the designated one (σ_0) first."""
        return self._embeddings

    @property
    def is_totally_real(self) -> bool:
        return len(self.embeddings()) == self.degree


def _poly_str(f) -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        if f[i]:
            terms.append(_term(f[i], "" if i == 0 else "x" if i == 1 else f"x^{i}"))
    return _join(terms)


class FieldElement:
    """An exact element of one level of a :class:`FieldTower`."""

    __slots__ = ("field", "coords")

    def __init__(self, field: FieldTower, coords: tuple):
        self.field = field
        self.coords = coords

    # -- coercion -----------------------------------------------------------------
    def lift(self, field: FieldTower) -> "FieldElement":
        if field is self.field:
            return self
        if not field.contains(self.field):
            raise LevelMismatch(f"{self.field!r} is not a level of {field!r}")
        return FieldElement(field, self.coords + (ZERO,) * (field.degree - len(self.coords)))

    def _common(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field:
                return self.field, self.coords, other.coords
            if self.field.depth >= other.field.depth:
                f = self.field
            else:
                f = other.field
            return f, self.lift(f).coords, other.lift(f).coords
        if isinstance(other, (int, Fraction)):
            return self.field, self.coords, self.field.element(other).coords
        return None

    # -- arithmetic -------------------------------------------------------------------
    def __add__(self, other):
        c = self._common(other)
        if c is None:
            return NotImplemented
        f, x, y = c
        return FieldElement(f, f._add(x, y))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._common(other)
        if c is None:
            return NotImplemented
        f, x, y = c
        return FieldElement(f, f._sub(x, y))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.coords))

    def __mul__(self, other):
        c = self._common(other)
        if c is None:
            return NotImplemented
        f, x, y = c
        if isinstance(other, (int, Fraction)):
            return FieldElement(f, tuple(a * other for a in x))
        return FieldElement(f, f._mul(x, y))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field._inv(self.coords))

    def __truediv__(self, other):
        c = self._common(other)
        if c is None:
            return NotImplemented
        f, x, y = c
        return FieldElement(f, f._mul(x, f._inv(y)))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -----------------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field is self.field:
            return self.coords == other.coords
        try:
            _, x, y = self._common(other)
        except LevelMismatch:
            return False
        return x == y

    def __hash__(self):
        # hash the coordinates of the smallest level that holds the element
        return hash(self.descend().coords)

    def __bool__(self):
        return any(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    # -- structure ------------------------------------------------------------------------
    @property
    def level(self) -> int:
        return self.field.depth

    def descend(self) -> "FieldElement":
        """The same number at the lowest tower level that contains it."""
        f = self.field
        coords = self.coords
        while f.depth and not any(coords[len(coords) // 2:]):
            coords = coords[: len(coords) // 2]
            f = f.parent
        return self if f is self.field else FieldElement(f, coords)

    def halves(self) -> tuple["FieldElement", "FieldElement"]:
        """``(x, y)`` with ``self = x + y √ρ`` over the previous level."""
        if not self.field.depth:
            raise BaseLevelElement("base-level element has no relative coordinates")
        h = len(self.coords) // 2
        par = self.field.parent
        return FieldElement(par, self.coords[:h]), FieldElement(par, self.coords[h:])

    def to_float(self) -> float:
        lo, hi = enclose(self, self.field.designated_embedding, 60)
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        f = self.field
        if f.depth == 0:
            if f.base_degree == 1:
                return str(self.coords[0])
            terms = []
            for i, c in enumerate(self.coords):
                if c:
                    mon = "" if i == 0 else ("θ" if i == 1 else f"θ^{i}")
                    terms.append(_term(c, mon))
            return _join(terms)
        x, y = self.halves()
        r = f"√({f.radicand})" if f.depth > 1 or f.parent.base_degree > 1 else f"√{f.radicand}"
        terms = []
        if x:
            terms.append(str(x) if x.is_rational() else f"({x})")
        if y:
            if y == 1:
                terms.append(r)
            elif y == -1:
                terms.append("-" + r)
            elif y.is_rational():
                terms.append(f"{y}{r}" if y.coords[0].denominator == 1 else f"({y}){r}")
            else:
                terms.append(f"({y}){r}")
        return _join(terms)


def _term(c, mon):
    if not mon:
        return str(c)
    if c == 1:
        return mon
    if c == -1:
        return "-" + mon
    return f"{c}{mon}" if c.denominator == 1 else f"({c}){mon}"


def _join(terms):
    if not terms:
        return "0"
    s = terms[0]
    for t in terms[1:]:
        s += t if t.startswith("-") else "+" + t
    return s


# -- construction -----------------------------------------------------------------

def make_base_field(min_poly: Sequence, root_index: int | None = None,
                    root_interval: tuple | None = None) -> FieldTower:
    """Build the base field ``Q[x]/(min_poly)`` with its real embeddings.

    *min_poly* lists rational coefficients lowest degree first and must be
    monic.  σ_0 is the real root with the given ascending ``root_index``, the
    root lying in ``root_interval``, or by default the largest root.
    """
    f = P.to_poly(min_poly)
    if len(f) < 2:
        raise ValueError("minimal polynomial must have degree >= 1")
    if f[-1] != 1:
        raise ValueError("minimal polynomial must be monic")
    if not P.is_squarefree(f):
        raise NotSquarefree(f"{_poly_str(f)} is not squarefree")
    roots = P.isolate_real_roots(f)
    if len(roots) != P.degree(f):
        raise NotTotallyReal(f"{_poly_str(f)} has {P.degree(f) - len(roots)} non-real roots")
    if P.degree(f) > 1 and not P.is_irreducible(f):
        raise NotIrreducible(f"{_poly_str(f)} is reducible over Q")
    if root_interval is not None:
        lo, hi = (_q(v) for v in root_interval)
        hits = [i for i, (a, b) in enumerate(roots) if _root_in(f, roots[i], lo, hi)]
        if len(hits) != 1:
            raise ValueError(f"interval hint [{lo}, {hi}] selects {len(hits)} roots")
        root_index = hits[0]
    if root_index is None:
        root_index = len(roots) - 1
    if root_index < 0:
        root_index += len(roots)
    if not 0 <= root_index < len(roots):
        raise ValueError(f"root index {root_index} out of range")
    return FieldTower(f, (), root_index)


def _root_in(f, interval, lo, hi) -> bool:
    a, b = interval
    while True:
        if b < lo or a > hi:
            return False
        if lo <= a and b <= hi:
            return True
        if a == b:
            return lo <= a <= hi
        a, b = P.refine_root(tuple(f), a, b, max(8, (b - a).denominator.bit_length() + 4))


def rational_field() -> FieldTower:
    return make_base_field([0, 1])


def adjoin_sqrt(tower: FieldTower, radicand, require_totally_real: bool = False,
                sign: int = 1) -> FieldTower:
    """Return ``tower(√radicand)``.

    The designated embedding extends σ_0 by sending √radicand to the root of
    the given *sign*; this needs σ_0(radicand) > 0.
    """
    rad = tower.element(radicand)
    if rad.is_zero():
        raise ZeroElement("radicand must be nonzero")
    ok, root = is_square(rad)
    if ok:
        raise RadicandIsSquare(f"{rad} = ({root})^2 in {tower.describe()}")
    if certified_sign(rad).sign != "positive":
        raise NotTotallyRealExtension(f"σ_0({rad}) < 0: designated embedding would not be real")
    if require_totally_real:
        for e in tower.embeddings():
            cert = certified_sign(rad, e)
            if cert.sign != "positive":
                raise NotTotallyRealExtension(
                    f"radicand {rad} is negative under embedding {e.label()} "
                    f"(witness [{cert.witness_interval[0]}, {cert.witness_interval[1]}])")
        if not tower.is_totally_real:
            raise NotTotallyRealExtension("the base of the step is not totally real")
    return FieldTower(tower.base_min_poly, tower.radicands + (rad.coords,), tower.root_index,
                      tower.signs + (sign,), parent=tower)


# -- embeddings and certified signs ------------------------------------------------

@dataclass(frozen=True)
class EmbeddingHandle:
    """A real embedding: a base root plus a sign choice for every √ρ_j."""

    field: FieldTower
    root_index: int
    signs: tuple

    def parent(self) -> "EmbeddingHandle":
        return EmbeddingHandle(self.field.parent, self.root_index, self.signs[:-1])

    @property
    def is_designated(self) -> bool:
        return self == self.field.designated_embedding

    def isolating_intervals(self, bits: int = 32) -> list:
        """Rational enclosures of the image of θ and of each √ρ_j."""
        f = self.field
        lo, hi = f.base_roots[self.root_index]
        out = [P.refine_root(f.base_min_poly, lo, hi, bits)]
        for j in range(1, f.depth + 1):
            level = f.truncate(j)
            e = EmbeddingHandle(level, self.root_index, self.signs[:j])
            out.append(enclose(level.gen, e, bits))
        return out

    def label(self) -> str:
        return f"σ[root {self.root_index}; signs {''.join('+' if s > 0 else '-' for s in self.signs)}]"

    def __repr__(self):
        return f"EmbeddingHandle({self.label()})"


@dataclass(frozen=True)
class SignCertificate:
    element: FieldElement
    embedding: EmbeddingHandle
    sign: str  # "positive" | "negative"
    witness_interval: tuple

    def __post_init__(self):
        lo, hi = self.witness_interval
        expected = "positive" if lo > 0 else "negative" if hi < 0 else None
        if expected != self.sign:
            raise ValueError("witness interval does not certify the recorded sign")


def _floor_dyadic(q: Fraction, b: int) -> Fraction:
    return Fraction((q.numerator << b) // q.denominator, 1 << b)


def _ceil_dyadic(q: Fraction, b: int) -> Fraction:
    return Fraction(-((-q.numerator << b) // q.denominator), 1 << b)


def _imul(x, y, b):
    p = (x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
    return _floor_dyadic(min(p), b), _ceil_dyadic(max(p), b)


def _isqrt_interval(x, b):
    lo, hi = x
    if hi < 0:
        raise ArithmeticError("square root of a negative interval")
    s = 1 << b
    low = Fraction(isqrt((lo.numerator * s * s) // lo.denominator), s) if lo > 0 else ZERO
    top = -((-hi.numerator * s * s) // hi.denominator)
    r = isqrt(top)
    if r * r < top:
        r += 1
    return low, Fraction(r, s)


def _enclose_raw(field: FieldTower, coords, emb: EmbeddingHandle, bits: int):
    b = bits + 8
    if field.depth == 0:
        if field.base_degree == 1:
            return coords[0], coords[0]
        lo, hi = field.base_roots[emb.root_index]
        X = P.refine_root(field.base_min_poly, lo, hi, bits)
        acc = (ZERO, ZERO)
        for c in reversed(coords):
            acc = _imul(acc, X, b)
            acc = (acc[0] + c, acc[1] + c)
        return acc
    h = len(coords) // 2
    par = field.parent
    pe = emb.parent()
    X = _enclose_raw(par, coords[:h], pe, bits)
    if not any(coords[h:]):
        return X
    Y = _enclose_raw(par, coords[h:], pe, bits)
    S = _isqrt_interval(_enclose_raw(par, field.radicands[-1], pe, bits), b)
    if emb.signs[-1] < 0:
        S = (-S[1], -S[0])
    YS = _imul(Y, S, b)
    return X[0] + YS[0], X[1] + YS[1]


def enclose(a: FieldElement, emb: EmbeddingHandle | None = None, bits: int = 53) -> tuple:
    """Rational interval containing the image of *a* under *emb* (default σ_0)."""
    emb = emb or a.field.designated_embedding
    if emb.field != a.field:
        emb = EmbeddingHandle(a.field, emb.root_index, emb.signs[: a.field.depth]) \
            if emb.field.contains(a.field) else _lift_embedding(emb, a.field)
    return _enclose_raw(a.field, a.coords, emb, bits)


def _lift_embedding(emb, field):
    raise LevelMismatch(f"embedding of {emb.field!r} cannot evaluate elements of {field!r}")


def certified_sign(a: FieldElement, emb: EmbeddingHandle | None = None) -> SignCertificate:
    """Certify the sign of ``emb(a)`` by refining until the image excludes zero."""
    if a.is_zero():
        raise ZeroElement("the sign of zero is undefined")
    emb = emb or a.field.designated_embedding
    bits = _START_BITS
    while bits <= _MAX_BITS:
        lo, hi = enclose(a, emb, bits)
        if lo > 0:
            return SignCertificate(a, emb, "positive", (lo, hi))
        if hi < 0:
            return SignCertificate(a, emb, "negative", (lo, hi))
        bits *= 2
    raise ArithmeticError(f"could not separate {a} from zero")  # pragma: no cover


def sign_count(a: FieldElement) -> int:
    """Number of non-designated real embeddings under which *a* is positive."""
    if a.is_zero():
        raise ZeroElement("sign_count of zero")
    return sum(1 for e in a.field.embeddings()[1:] if certified_sign(a, e).sign == "positive")


# -- Galois structure ------------------------------------------------------------------

def galois_conjugate(a: FieldElement) -> FieldElement:
    """``x + y√ρ ↦ x - y√ρ`` for the top step of *a*'s level."""
    if not a.field.depth:
        raise BaseLevelElement("no quadratic step to conjugate over")
    h = len(a.coords) // 2
    return FieldElement(a.field, a.coords[:h] + tuple(-c for c in a.coords[h:]))


def relative_norm(a: FieldElement) -> FieldElement:
    """``a τ(a)``, returned at the previous level."""
    n = a * galois_conjugate(a)
    x, y = n.halves()
    assert y.is_zero(), "relative norm left a nonzero √ρ component"
    return x


def arith(a, b, op: str) -> FieldElement:
    """Functional form of the four field operations (``add/sub/mul/div``)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# -- squares ---------------------------------------------------------------------------

def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def is_square(a: FieldElement) -> tuple[bool, FieldElement | None]:
    """Decide whether *a* is a square at its own level; return the root if so."""
    if a.is_zero():
        raise ZeroElement("is_square expects a nonzero element")
    f = a.field
    if f.depth == 0:
        if f.base_degree == 1:
            r = _rational_sqrt(a.coords[0])
            return (True, f.element(r)) if r is not None else (False, None)
        root = _base_sqrt(a)
        return (root is not None), root
    x, y = a.halves()
    if y.is_zero():
        ok, r = is_square(x)
        if ok:
            return True, r.lift(f)
        ok, r = is_square(x / f.radicand)
        if ok:
            return True, r.lift(f) * f.gen
        return False, None
    ok, n = is_square(relative_norm(a))
    if not ok:
        return False, None
    for s in (n, -n):
        ok, p = is_square((x + s) / 2) if not (x + s).is_zero() else (False, None)
        if ok:
            q = y / (2 * p)
            root = p.lift(f) + q.lift(f) * f.gen
            if root * root == a:
                return True, root
    return False, None


def _base_sqrt(a: FieldElement):
    """Square root in a base field of degree > 1 via sympy's factorisation."""
    from sympy import CRootOf, Poly as SPoly, QQ, symbols

    f = a.field
    x = symbols("x")
    fx = SPoly(list(reversed(f.base_min_poly)), x, domain=QQ)
    K = QQ.algebraic_field(CRootOf(fx.as_expr(), 0))
    if list(K.mod.to_list()) != [QQ(c.numerator, c.denominator) for c in reversed(f.base_min_poly)]:
        raise NotImplementedError("sympy chose a different primitive element")  # pragma: no cover
    av = K([QQ(c.numerator, c.denominator) for c in reversed(a.coords)])
    p = SPoly([K.one, K.zero, -av], x, domain=K)
    for g, _ in p.factor_list()[1]:
        if g.degree() == 1:
            lc, c0 = g.rep.to_list()
            root = K.quo(-c0, lc)
            coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(root.to_list())]
            r = f.element(coeffs)
            if r * r == a:
                return r
    return None


# -- integrality -------------------------------------------------------------------------

def multiplication_matrix(a: FieldElement) -> list:
    """Matrix of ``x ↦ a x`` on the Q-basis of *a*'s level (columns are images)."""
    f = a.field
    n = f.degree
    cols = []
    for i in range(n):
        e = tuple(ONE if j == i else ZERO for j in range(n))
        cols.append(f._mul(a.coords, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


@lru_cache(maxsize=65536)
def _integral_cached(field: FieldTower, coords: tuple) -> bool:
    cp = P.charpoly(multiplication_matrix(FieldElement(field, coords)))
    return all(c.denominator == 1 for c in cp)


def is_algebraic_integer(a: FieldElement) -> bool:
    """True iff the characteristic polynomial of multiplication by *a* is in Z[x]."""
    if a.field.basis_integral and all(c.denominator == 1 for c in a.coords):
        return True  # integer combination of integral basis elements
    return _integral_cached(a.field, a.coords)


def char_poly(a: FieldElement) -> list:
    return P.charpoly(multiplication_matrix(a))


def minimal_level(elements: Iterable[FieldElement]) -> int:
    return max((e.descend().level for e in elements), default=0)
