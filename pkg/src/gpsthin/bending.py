"""Bending units, the unitary extension ``M = L(√(u²-4))`` and the bending matrix.

The bending matrix is ``Diag(v^-n, v, ..., v)`` where ``v = (u + √(u²-4))/2``
is a root of ``x² - u x + 1`` in ``M``.  The involution of ``M/L`` swaps the
two roots, so ``τ(v) = u - v = v^-1``; that relation is what makes the
matrix unitary for the Hermitian extension of ``J1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from sympy import factorint

from .errors import (
    DegreeOne,
    MemberNotUnitary,
    NoUnitFound,
    NotAStabilizer,
    SignConditionFailed,
)
from .forms import (
    DiagonalForm,
    HermitianForm,
    first_nonintegral_entry,
    hyperplane_stabilizer_member,
    is_special_unitary,
)
from .gps import GpsInstance
from .linalg import TowerMatrix
from .numfield.tower import (
    FieldElement,
    FieldTower,
    adjoin_sqrt,
    certified_sign,
    enclose,
    galois_conjugate,
    is_algebraic_integer,
    sign_count,
)
from .report import CheckResult


@dataclass
class BendingUnit:
    u: FieldElement
    sign_certificates: list
    norm_witness: dict
    tier: str

    @property
    def field(self) -> FieldTower:
        return self.u.field


def unit_conditions(u: FieldElement) -> tuple[bool, list, dict]:
    """Certify ``|σ_0(u)| > 2``, ``0 < |σ_i(u)| < 1`` (i ≥ 1), and ``u, 1/u`` integral."""
    L = u.field
    certs = []
    if u.is_zero():
        return False, certs, {"reason": "u = 0"}
    s0 = certified_sign(u)
    gap = u - 2 if s0.sign == "positive" else -u - 2
    # a zero gap means |u| = 2 exactly, which fails the strict inequality
    big = certified_sign(gap) if not gap.is_zero() else None
    certs.append({"condition": "|sigma_0(u)| > 2", "certificate": big})
    ok = big is not None and big.sign == "positive"
    for e in L.embeddings()[1:]:
        lo = certified_sign(1 + u, e) if not (1 + u).is_zero() else None
        hi = certified_sign(1 - u, e) if not (1 - u).is_zero() else None
        certs.append({"condition": f"-1 < {e.label()}(u) < 1", "lower": lo, "upper": hi})
        ok = ok and lo is not None and hi is not None and lo.sign == "positive" and hi.sign == "positive"
    inv = u.inverse()
    witness = {"u": u, "u_inverse": inv, "u_integral": is_algebraic_integer(u),
               "u_inverse_integral": is_algebraic_integer(inv)}
    ok = ok and witness["u_integral"] and witness["u_inverse_integral"]
    return ok, certs, witness


def certify_unit(u: FieldElement, tier: str = "given") -> BendingUnit:
    ok, certs, witness = unit_conditions(u)
    if not ok:
        raise SignConditionFailed(f"{u} does not satisfy the bending-unit conditions")
    return BendingUnit(u, certs, witness, tier)


def _sqrt_of_squarefree(L: FieldTower):
    """``(D, s)`` with D a squarefree integer and ``s ∈ L``, ``s² = D``, for quadratic L."""
    if L.depth == 1 and L.base_degree == 1:
        r = L.radicand.coords[0]
        s_elem = L.gen
    elif L.depth == 0 and L.base_degree == 2:
        c0, c1, _ = L.base_min_poly
        r = c1 * c1 - 4 * c0
        s_elem = 2 * L.gen + c1
    else:
        raise ValueError("not a real quadratic field")
    p, q = r.numerator * r.denominator, r.denominator  # r = p / q^2
    D, k = 1, 1
    for prime, e in factorint(p).items():
        D *= prime ** (e % 2)
        k *= prime ** (e // 2)
    # s_elem^2 = r = D k^2 / q^2
    return D, s_elem * Fraction(q, k)


def fundamental_unit_quadratic(L: FieldTower, max_terms: int) -> FieldElement:
    """Fundamental unit of the maximal order of a real quadratic field.

    Runs the continued fraction of ``(1+√D)/2`` (D ≡ 1 mod 4) or ``√D`` and
    returns the first convergent ``p/q`` that yields a unit.
    """
    D, sqrtD = _sqrt_of_squarefree(L)
    if D == 1:
        raise ValueError("field is not quadratic")
    a0 = isqrt(D)
    if D % 4 == 1:
        P, Qd = 1, 2
    else:
        P, Qd = 0, 1
    # convergents p_k/q_k of (P + √D)/Qd
    pm2, pm1 = 0, 1
    qm2, qm1 = 1, 0
    for _ in range(max_terms):
        a = (P + a0) // Qd
        pk, qk = a * pm1 + pm2, a * qm1 + qm2
        cand = _unit_from_convergent(D, pk, qk)
        if cand is not None:
            x, y = cand
            return L.element(x) + sqrtD * y
        pm2, pm1, qm2, qm1 = pm1, pk, qm1, qk
        P = a * Qd - P
        Qd = (D - P * P) // Qd
    raise NoUnitFound(f"no unit within {max_terms} continued-fraction terms")


def _unit_from_convergent(D: int, p: int, q: int):
    if D % 4 == 1:
        # p - q(1-√D)/2 = (2p - q)/2 + (q/2)√D
        if p * p - p * q - q * q * (D - 1) // 4 in (1, -1):
            return Fraction(2 * p - q, 2), Fraction(q, 2)
    elif p * p - D * q * q in (1, -1):
        return Fraction(p), Fraction(q)
    return None


def find_bending_unit(L: FieldTower, search_bound: int, tier: str = "auto") -> BendingUnit:
    """A unit ``u`` of ``O_L`` with ``|u| > 2`` and all other conjugates in ``(-1, 1)``."""
    if L.degree == 1:
        raise DegreeOne("the units of Z are ±1")
    if tier == "auto":
        tier = "continued_fraction" if L.degree == 2 else "brute_force"
    if tier == "continued_fraction":
        eps = fundamental_unit_quadratic(L, max(search_bound, 1))
        if certified_sign(eps).sign == "negative":
            eps = -eps
        if certified_sign(eps - 1).sign == "negative":
            eps = eps.inverse()
        norm = eps * galois_conjugate_quadratic(eps)
        if norm == -1:
            eps = eps * eps
        u = eps
        for _ in range(64):
            ok, certs, witness = unit_conditions(u)
            if ok:
                return BendingUnit(u, certs, witness, tier)
            u = u * eps
        raise NoUnitFound("no power of the fundamental unit satisfied the conditions")  # pragma: no cover
    if tier == "brute_force":
        return _brute_force_unit(L, search_bound)
    raise ValueError(f"unknown tier {tier!r}")


def galois_conjugate_quadratic(a: FieldElement) -> FieldElement:
    """The nontrivial automorphism of a quadratic field, in either representation."""
    L = a.field
    if L.depth == 1:
        return galois_conjugate(a)
    c1 = L.base_min_poly[1]
    # θ ↦ -c1 - θ
    x, y = a.coords
    return L.element([x - c1 * y, -y])


def _brute_force_unit(L: FieldTower, search_bound: int) -> BendingUnit:
    """Search integer coordinate vectors shell by shell (lexicographic within a shell)."""
    n = L.degree
    embs = L.embeddings()
    for h in range(1, search_bound + 1):
        for coords in itertools.product(range(-h, h + 1), repeat=n):
            if max(abs(c) for c in coords) != h:
                continue
            u = L.element(list(coords))
            if not _quick_filter(u, embs):
                continue
            ok, certs, witness = unit_conditions(u)
            if ok:
                return BendingUnit(u, certs, witness, "brute_force")
    raise NoUnitFound(f"no bending unit with coordinate height <= {search_bound}")


def _quick_filter(u: FieldElement, embs) -> bool:
    lo, hi = enclose(u, embs[0], 16)
    if max(abs(lo), abs(hi)) < 2:
        return False
    for e in embs[1:]:
        lo, hi = enclose(u, e, 16)
        if min(abs(lo), abs(hi)) >= 1 and lo * hi > 0:
            return False
    return True


# -- the unitary setup ------------------------------------------------------------------

@dataclass
class UnitarySetup:
    L: FieldTower
    unit: BendingUnit
    M: FieldTower
    hermitian: HermitianForm
    root: FieldElement  # v = (u + √(u²-4))/2 in M
    checks: list = field(default_factory=list)

    @property
    def u(self) -> FieldElement:
        return self.unit.u

    def involution(self, a: FieldElement) -> FieldElement:
        return galois_conjugate(self.M.element(a))


def build_unitary_setup(inst: GpsInstance, unit: BendingUnit) -> UnitarySetup:
    L = inst.L
    u = unit.u.lift(L) if unit.u.field != L else unit.u
    r = u * u - 4
    checks = []
    sc = sign_count(r)
    checks.append(CheckResult.of("bending.radicand_sign_count_zero", sc == 0,
                                 {"radicand": r, "sign_count": sc,
                                  "images": [certified_sign(r, e) for e in L.embeddings()[1:]]}))
    s0 = certified_sign(r)
    checks.append(CheckResult.of("bending.radicand_positive_sigma0", s0.sign == "positive", s0))
    if sc != 0 or s0.sign != "positive":
        raise SignConditionFailed(f"u^2 - 4 = {r} has the wrong signs")
    M = adjoin_sqrt(L, r)
    v = (u.lift(M) + M.gen) / 2
    tv = galois_conjugate(v)
    checks.append(CheckResult.of("bending.v_tau_v_is_one", v * tv == 1,
                                 {"v": v, "tau_v": tv, "product": v * tv}))
    checks.append(CheckResult.of("bending.v_plus_tau_v_is_u", v + tv == u, {"sum": v + tv, "u": u}))
    checks.append(CheckResult.of("bending.v_root_of_p", v * v - u * v + 1 == 0, {"p": "x^2 - u x + 1"}))
    checks.append(CheckResult.of("bending.v_integral", is_algebraic_integer(v) and is_algebraic_integer(tv),
                                 {"v": v}))
    H = HermitianForm(inst.J1_over_L(), M)
    return UnitarySetup(L, unit, M, H, v, checks)


def diagonal_bending_matrix(lam: FieldElement, n: int) -> TowerMatrix:
    """``Diag(lam^-n, lam, ..., lam)`` of size ``n + 1``."""
    F = lam.field
    c = TowerMatrix.diag([lam ** (-n)] + [lam] * n, F)
    if c.det() != 1:
        raise AssertionError("bending matrix has determinant != 1")  # pragma: no cover
    return c


def bending_matrix(setup: UnitarySetup, n: int) -> TowerMatrix:
    if n < 2:
        raise ValueError("n must be at least 2")
    return diagonal_bending_matrix(setup.root, n)


def certify_bending_in_su(setup: UnitarySetup, c: TowerMatrix) -> list[CheckResult]:
    """Unitarity ``c^† G c = G``, integrality, and ``det c = 1``."""
    c = c.lift(setup.M)
    res = is_special_unitary(c, setup.hermitian)
    adj = c.adjoint()
    unitary_ok = res.ok or (res.witness and res.witness.get("kind") == "determinant")
    gram_w = {"c_adjoint_diagonal": [adj[i, i] for i in range(adj.nrows)]}
    if not unitary_ok:
        gram_w["violation"] = res.witness
    bad = first_nonintegral_entry(c)
    det = c.det()
    return [
        CheckResult.of("bending.c_preserves_hermitian_form", bool(unitary_ok), gram_w),
        CheckResult.of("bending.c_integral", bad is None,
                       None if bad is None else {"entry": list(bad[0]), "value": bad[1]}),
        CheckResult.of("bending.c_det_one", det == 1, {"det": det}),
    ]


def certify_centralizer(c: TowerMatrix, J: DiagonalForm, witnesses: Sequence[TowerMatrix]) -> CheckResult:
    """``c g = g c`` for every hyperplane-stabilizer witness, plus the block-scalar shape of c."""
    for k, g in enumerate(witnesses):
        if not hyperplane_stabilizer_member(g, J.lift(g.field) if g.field.depth > J.field.depth else J):
            raise NotAStabilizer(f"witness {k} is not of the form Diag(1, B')")
    m = c.nrows
    scalar = all(c[i, i] == c[1, 1] for i in range(1, m)) and all(
        c[i, j].is_zero() for i in range(m) for j in range(m) if i != j)
    bad = [k for k, g in enumerate(witnesses) if not (c @ g) == (g @ c)]
    return CheckResult.of("bending.centralizer", scalar and not bad,
                          {"witnesses": len(witnesses), "block_scalar": scalar, "non_commuting": bad})


@dataclass
class BentGeneratorSet:
    hat_generators: list
    s: TowerMatrix
    c: TowerMatrix
    bent: list
    checks: list


def assemble_bent_generators(hat: Sequence[TowerMatrix], s: TowerMatrix, c: TowerMatrix,
                             setup: UnitarySetup) -> BentGeneratorSet:
    """``hat ∪ {c s}``, each member certified in ``SU(J1, τ, O_M)``."""
    M = setup.M
    members = [g.lift(M) for g in hat] + [c.lift(M) @ s.lift(M)]
    checks = []
    for k, g in enumerate(members):
        res = is_special_unitary(g, setup.hermitian)
        bad = first_nonintegral_entry(g)
        label = f"hat[{k}]" if k < len(hat) else "c*s"
        if not res or bad is not None:
            witness = res.witness if not res else {"entry": list(bad[0]), "value": bad[1]}
            raise MemberNotUnitary(f"{label} is not in SU(J1, tau, O_M)", witness)
        checks.append(label)
    return BentGeneratorSet(list(hat), s, c, members,
                            [CheckResult.of("bending.bent_generators_in_SU", True, {"members": checks})])
