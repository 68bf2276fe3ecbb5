from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gpsthin.errors import (
    BaseLevelElement,
    NotIrreducible,
    NotSquarefree,
    NotTotallyReal,
    NotTotallyRealExtension,
    RadicandIsSquare,
    ZeroElement,
)
from gpsthin.numfield import (
    adjoin_sqrt,
    arith,
    certified_sign,
    char_poly,
    enclose,
    galois_conjugate,
    is_algebraic_integer,
    is_square,
    make_base_field,
    relative_norm,
    sign_count,
)

mpmath.mp.dps = 60
SQ2 = mpmath.sqrt(2)


def mpq(q):
    return mpmath.mpf(q.numerator) / q.denominator


def test_rational_base(Q):
    assert Q.degree == 1
    assert len(Q.embeddings()) == 1


def test_sqrt2_base_field_intervals():
    K = make_base_field([-2, 0, 1])
    assert K.degree == 2
    embs = K.embeddings()
    assert len(embs) == 2
    # σ_0 is the largest root by default
    lo, hi = embs[0].isolating_intervals(40)[0]
    assert mpq(lo) < SQ2 < mpq(hi) and hi - lo < Fraction(1, 2**30)
    lo, hi = embs[1].isolating_intervals(40)[0]
    assert mpq(lo) < -SQ2 < mpq(hi)


@pytest.mark.parametrize("poly, err", [
    ([1, 0, 1], NotTotallyReal),
    ([1, -2, 1], NotSquarefree),
])
def test_base_field_errors(poly, err):
    with pytest.raises(err):
        make_base_field(poly)


def test_reducible_real():
    with pytest.raises(NotIrreducible):
        make_base_field([2, 0, -3, 0, 1])  # (x^2 - 1)(x^2 - 2)


def test_adjoin_examples(Q, Q2):
    assert Q2.degree == 2 and len(Q2.embeddings()) == 2
    with pytest.raises(RadicandIsSquare):
        adjoin_sqrt(Q, 4)
    M = adjoin_sqrt(Q2, Q2.element([13, 12]))
    assert M.degree == 4
    assert not M.is_totally_real
    with pytest.raises(NotTotallyRealExtension):
        adjoin_sqrt(Q2, Q2.element([13, 12]), require_totally_real=True)
    assert certified_sign(Q2.element([13, -12])).sign == "negative"


def test_arith_examples(Q2):
    a, b = Q2.element([1, 1]), Q2.element([1, -1])
    assert arith(a, b, "mul") == -1
    u = Q2.element([3, 2])
    assert u * Q2.element([3, -2]) == 1
    assert arith(Q2.one, u, "div") == Q2.element([3, -2])
    with pytest.raises(ZeroDivisionError):
        arith(u, Q2.zero, "div")


def test_is_square_examples(Q, Q2, Q5):
    ok, r = is_square(Q.element(4))
    assert ok and r * r == 4
    assert not is_square(Q.element(2))[0]
    ok, r = is_square(Q2.element([3, 2]))
    assert ok and r * r == Q2.element([3, 2])
    assert not is_square(Q2.element([1, 1]))[0]
    # base field of degree 2: θ^2 = θ + 1 is a square, θ is not
    th = Q5.element([0, 1])
    ok, r = is_square(th * th)
    assert ok and r * r == th * th
    assert not is_square(th)[0]


def test_certified_sign_examples(Q2):
    conj = Q2.embeddings()[1]
    c = certified_sign(Q2.element([1, 1]), conj)
    assert c.sign == "negative" and c.witness_interval[1] < 0
    assert certified_sign(Q2.one, conj).sign == "positive"
    c = certified_sign(Q2.element([13, 12]))
    assert c.sign == "positive"
    lo, hi = c.witness_interval
    assert mpq(lo) <= 13 + 12 * SQ2 <= mpq(hi)
    with pytest.raises(ZeroElement):
        certified_sign(Q2.zero)


def test_sign_count_examples(Q, Q2):
    assert sign_count(Q.element(Fraction(-7, 3))) == 0
    assert sign_count(Q2.element([3, 1])) == 1
    assert sign_count(Q2.element([1, 1])) == 0


def test_galois_and_norm(Q, Q2):
    r = Q2.gen
    assert galois_conjugate(r) == -r
    assert galois_conjugate(Q2.element(5)) == 5
    assert galois_conjugate(Q2.element([3, 2])) == Q2.element([3, -2])
    assert relative_norm(r) == -2
    assert relative_norm(Q2.element([3, 2])) == 1
    assert relative_norm(Q2.one) == 1
    assert relative_norm(r).field == Q
    with pytest.raises(BaseLevelElement):
        galois_conjugate(Q.element(3))


def test_integrality_examples(Q, Q2, Q5):
    assert not is_algebraic_integer(Q.element(Fraction(1, 2)))
    u = Q2.element([3, 2])
    assert is_algebraic_integer(u)
    assert char_poly(u) == [1, -6, 1]  # low degree first
    # (1 + √5)/2 in Q(√5) written with a power basis in √5
    K = make_base_field([-5, 0, 1])
    phi = K.element([Fraction(1, 2), Fraction(1, 2)])
    assert is_algebraic_integer(phi)
    assert not is_algebraic_integer(K.element([0, Fraction(1, 2)]))


def test_integrality_oracle_sympy(Q2):
    """Char poly against sympy's minimal polynomial in a degree-4 tower."""
    M = adjoin_sqrt(Q2, Q2.element([13, 12]))
    x = sympy.Symbol("x")
    a = M.element([1, Fraction(1, 2), Fraction(1, 2), 0])
    expr = 1 + sympy.sqrt(2) / 2 + sympy.sqrt(13 + 12 * sympy.sqrt(2)) / 2
    mp = sympy.Poly(sympy.minimal_polynomial(expr, x), x)
    cp = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in char_poly(a)])), x)
    assert sympy.rem(cp, mp) == 0
    assert is_algebraic_integer(a) == all(c.is_integer for c in mp.monic().all_coeffs())


# -- properties ---------------------------------------------------------------------

small = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def _tower():
    from gpsthin.numfield import rational_field

    L = adjoin_sqrt(rational_field(), 2)
    return adjoin_sqrt(L, L.element([13, 12]))


M4 = _tower()
elements = st.lists(small, min_size=4, max_size=4).map(M4.element)


@settings(max_examples=60, deadline=None)
@given(elements, elements, elements)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if not a.is_zero():
        assert a * a.inverse() == 1


@settings(max_examples=60, deadline=None)
@given(elements, elements)
def test_norm_multiplicative_and_involution(a, b):
    assert relative_norm(a * b) == relative_norm(a) * relative_norm(b)
    assert galois_conjugate(galois_conjugate(a)) == a
    fixed = galois_conjugate(a) == a
    assert fixed == all(c == 0 for c in a.coords[2:])


def _float_image(a, emb):
    s2 = SQ2 * emb.signs[0] if emb.signs else None
    x, y = [mpq(c) for c in a.coords[:2]], [mpq(c) for c in a.coords[2:]]
    r = mpmath.sqrt(13 + 12 * s2)
    return x[0] + x[1] * s2 + (y[0] + y[1] * s2) * r * emb.signs[1]


@settings(max_examples=40, deadline=None)
@given(elements, elements)
def test_signs_match_floats_and_multiply(a, b):
    if a.is_zero() or b.is_zero():
        return
    for e in M4.embeddings():
        ca, cb = certified_sign(a, e), certified_sign(b, e)
        val = _float_image(a, e)
        lo, hi = ca.witness_interval
        assert mpq(lo) <= val <= mpq(hi)
        assert (val > 0) == (ca.sign == "positive")
        sab = certified_sign(a * b, e).sign
        assert (sab == "positive") == (ca.sign == cb.sign)


@settings(max_examples=40, deadline=None)
@given(elements)
def test_square_roots_are_exact(a):
    if a.is_zero():
        return
    ok, r = is_square(a * a)
    assert ok and r * r == a * a


int_elements = st.lists(st.integers(-9, 9), min_size=4, max_size=4).map(M4.element)


@settings(max_examples=25, deadline=None)
@given(int_elements, int_elements)
def test_integrality_closed(a, b):
    assert is_algebraic_integer(a + b)
    assert is_algebraic_integer(a * b)


def test_enclose_shrinks(Q2):
    a = Q2.element([1, 1])
    w1 = enclose(a, bits=20)
    w2 = enclose(a, bits=60)
    assert w2[1] - w2[0] < w1[1] - w1[0]
