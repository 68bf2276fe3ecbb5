"""Dense univariate polynomials over Q and Sturm-sequence root isolation.

Polynomials are lists of :class:`~fractions.Fraction` coefficients, lowest
degree first, with no trailing zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Sequence

Poly = list  # list[Fraction], low degree first


def strip(f: Sequence) -> list:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def to_poly(coeffs) -> list:
    return strip(Fraction(c) for c in coeffs)


def degree(f: Sequence) -> int:
    return len(f) - 1


def add(f, g):
    n = max(len(f), len(g))
    return strip((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n))


def neg(f):
    return [-c for c in f]


def sub(f, g):
    return add(f, neg(g))


def mul(f, g):
    if not f or not g:
        return []
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return strip(out)


def scale(f, c):
    return strip(c * a for a in f)


def divmod_poly(f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    lc = g[-1]
    while len(f) >= len(g) and f:
        c = f[-1] / lc
        k = len(f) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            f[i + k] -= c * b
        f = strip(f)
    return strip(q), f


def rem(f, g):
    return divmod_poly(f, g)[1]


def monic(f):
    return [c / f[-1] for c in f] if f else []


def gcd(f, g):
    while g:
        f, g = g, rem(f, g)
    return monic(f)


def gcdex(f, g):
    """Return ``(s, t, h)`` with ``s*f + t*g == h == gcd(f, g)`` (monic)."""
    r0, r1 = list(f), list(g)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    lc = r0[-1]
    return scale(s0, 1 / lc), scale(t0, 1 / lc), monic(r0)


def derivative(f):
    return strip(i * c for i, c in enumerate(f) if i)


def evaluate(f, x):
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def sign(x) -> int:
    return (x > 0) - (x < 0)


# -- Sturm sequences ---------------------------------------------------------

def sturm_sequence(f):
    """Sturm chain ``f, f', -rem(f, f'), ...`` of a squarefree polynomial."""
    seq = [list(f), derivative(f)]
    while seq[-1]:
        seq.append(neg(rem(seq[-2], seq[-1])))
    return seq[:-1]


def _variations(seq, x) -> int:
    signs = [s for s in (sign(evaluate(p, x)) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq, lo, hi) -> int:
    """Number of distinct real roots in the half-open interval ``(lo, hi]``."""
    return _variations(seq, lo) - _variations(seq, hi)


def root_bound(f) -> Fraction:
    """Cauchy bound: every root has absolute value strictly below it."""
    lc = abs(f[-1])
    return 1 + max(abs(c) / lc for c in f[:-1]) if len(f) > 1 else Fraction(1)


def is_squarefree(f) -> bool:
    return degree(gcd(f, derivative(f))) == 0


def isolate_real_roots(f) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals ``(lo, hi)`` for the real roots of squarefree *f*.

    Intervals are returned in increasing order.  Each contains exactly one
    root; endpoints are never roots except for a rational root, which is
    returned as the degenerate interval ``(r, r)``.
    """
    seq = sturm_sequence(f)
    B = root_bound(f)
    out = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            if evaluate(f, hi) == 0:
                out.append((hi, hi))
            else:
                out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    return out


@lru_cache(maxsize=4096)
def refine_root(f: tuple, lo: Fraction, hi: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of *f* until its width is below ``2**-bits``.

    *f* must be passed as a tuple (for caching) and change sign across the
    interval; the result keeps that property.
    """
    if lo == hi:
        return lo, hi
    eps = Fraction(1, 1 << bits)
    s_lo = sign(evaluate(f, lo))
    while hi - lo > eps:
        mid = (lo + hi) / 2
        # snap the midpoint to a dyadic rational to keep denominators small
        den = 1 << (bits + 2)
        mid = Fraction(floor(mid * den), den)
        if not lo < mid < hi:
            mid = (lo + hi) / 2
        s = sign(evaluate(f, mid))
        if s == 0:
            return mid, mid
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def is_irreducible(f) -> bool:
    """Irreducibility over Q, delegated to sympy's factoriser."""
    from sympy import Poly as SPoly, QQ, symbols

    x = symbols("x")
    p = SPoly(list(reversed(f)), x, domain=QQ)
    _, factors = p.factor_list()
    return len(factors) == 1 and factors[0][1] == 1


def factor_rational(f) -> list[list[Fraction]]:
    """Distinct monic irreducible factors of *f* over Q."""
    from sympy import Poly as SPoly, QQ, symbols

    x = symbols("x")
    p = SPoly(list(reversed(f)), x, domain=QQ)
    _, factors = p.factor_list()
    return [monic([Fraction(int(c.numerator), int(c.denominator)) for c in reversed(g.all_coeffs())])
            for g, _ in factors]


def charpoly(matrix: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Characteristic polynomial ``det(x I - A)`` by Faddeev-LeVerrier."""
    n = len(matrix)
    A = [list(map(Fraction, row)) for row in matrix]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        c_prev = coeffs[n - k + 1]
        M = [[sum((A[i][l] * M[l][j] for l in range(n)), Fraction(0)) + (c_prev if i == j else 0)
              for j in range(n)] for i in range(n)]
        AM_trace = sum((A[i][l] * M[l][i] for i in range(n) for l in range(n)), Fraction(0))
        coeffs[n - k] = -AM_trace / k
    return coeffs
