"""Gromov--Piatetski-Shapiro instances: parameters, forms, splitting field, conjugator.

Also houses the trace-integrality sampler and the adjoint-trace-field
machinery used to tell instances apart up to commensurability.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidParameters, NotAnIsometry, NotJ2Isometry
from .forms import Check, DiagonalForm, is_special_isometry
from .linalg import TowerMatrix
from .numfield.tower import (
    FieldElement,
    FieldTower,
    adjoin_sqrt,
    certified_sign,
    is_algebraic_integer,
    is_square,
    sign_count,
)
from .report import CheckResult
from .words import iter_words, word_name

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GpsParameters:
    tower: FieldTower
    alpha: FieldElement
    beta: FieldElement
    middle: tuple  # a_2 .. a_n
    last: FieldElement  # a_{n+1}
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("dimension n must be at least 2")
        if len(self.middle) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} middle coefficients, got {len(self.middle)}")

    @classmethod
    def make(cls, tower: FieldTower, alpha, beta, middle: Sequence, last, n: int | None = None):
        n = len(middle) + 1 if n is None else n
        return cls(tower, tower.element(alpha), tower.element(beta),
                   tuple(tower.element(a) for a in middle), tower.element(last), n)

    @property
    def d(self) -> int:
        """Degree of K minus one."""
        return self.tower.degree - 1

    def named_elements(self):
        yield "alpha", self.alpha
        yield "beta", self.beta
        for i, a in enumerate(self.middle, start=2):
            yield f"a_{i}", a
        yield f"a_{self.n + 1}", self.last


@dataclass
class ValidationRecord:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


def validate_gps_parameters(p: GpsParameters) -> ValidationRecord:
    """Check every parameter condition; failures are recorded, never raised.

    The sign-count condition on the middle coefficients is applied to
    ``a_2 .. a_n``.
    """
    checks = []
    elems = list(p.named_elements())

    zero = [name for name, a in elems if a.is_zero()]
    if zero:
        checks.append(CheckResult.of("gps.nonzero", False, {"zero": zero}))
        return ValidationRecord(checks)

    positivity = {name: certified_sign(a) for name, a in elems}
    checks.append(CheckResult.of("gps.positive", all(c.sign == "positive" for c in positivity.values()),
                                 positivity))

    integral = {name: is_algebraic_integer(a) for name, a in elems}
    checks.append(CheckResult.of("gps.integral", all(integral.values()), integral))

    ratio = p.beta / p.alpha
    sq, root = is_square(ratio)
    checks.append(CheckResult.of("gps.beta_over_alpha_nonsquare", not sq,
                                 {"ratio": ratio, "root": root} if sq else {"ratio": ratio}))

    d = p.d
    for name, a in elems[:-1]:
        s = sign_count(a)
        checks.append(CheckResult.of(f"gps.sign_count.{name}", s == d, {"sign_count": s, "required": d}))
    name, a = elems[-1]
    s = sign_count(a)
    checks.append(CheckResult.of(f"gps.sign_count.{name}", s == 0, {"sign_count": s, "required": 0}))
    return ValidationRecord(checks)


@dataclass
class GpsInstance:
    params: GpsParameters
    J1: DiagonalForm
    J2: DiagonalForm
    L: FieldTower
    h: TowerMatrix
    gram_covariance: Check
    validation: ValidationRecord = field(repr=False, default=None)

    @property
    def K(self) -> FieldTower:
        return self.params.tower

    @property
    def n(self) -> int:
        return self.params.n

    def J1_over_L(self) -> DiagonalForm:
        return self.J1.lift(self.L)

    def J2_over_L(self) -> DiagonalForm:
        return self.J2.lift(self.L)


def build_gps_instance(p: GpsParameters) -> GpsInstance:
    record = validate_gps_parameters(p)
    if not record.ok:
        names = ", ".join(c.name for c in record.failures())
        raise InvalidParameters(f"parameter conditions failed: {names}", record)
    K = p.tower
    J1 = DiagonalForm([p.alpha, *p.middle, p.last], K)
    J2 = DiagonalForm([p.beta, *p.middle, p.last], K)
    L = adjoin_sqrt(K, p.beta / p.alpha, require_totally_real=True)
    h = TowerMatrix.diag([L.gen] + [L.one] * p.n, L)
    G1 = J1.lift(L).gram
    G2 = J2.lift(L).gram
    lhs = h.T @ G1 @ h
    cov = Check(True) if lhs == G2 else Check(False, {"lhs": lhs, "rhs": G2})
    if not cov:
        raise AssertionError("h^T G1 h != G2")  # pragma: no cover - algebraic identity
    return GpsInstance(p, J1, J2, L, h, cov, record)


def transport_isometry(inst: GpsInstance, B: TowerMatrix) -> TowerMatrix:
    """``h B h^{-1}``: a special isometry of J2 becomes one of J1 over L."""
    chk = is_special_isometry(B, inst.J2.lift(B.field) if B.field.depth >= inst.K.depth else inst.J2)
    if not chk:
        raise NotJ2Isometry("matrix is not a special isometry of J2", chk.witness)
    out = inst.h @ B.lift(inst.L) @ inst.h.inverse()
    res = is_special_isometry(out, inst.J1_over_L())
    if not res:
        raise AssertionError(f"transport failed: {res.witness}")  # pragma: no cover
    return out


# -- trace integrality --------------------------------------------------------------

@dataclass
class TraceIntegrityReport:
    words_checked: int
    violations: list  # (word name, trace)
    max_word_length: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_check(self) -> CheckResult:
        w = {"words_checked": self.words_checked, "max_word_length": self.max_word_length}
        if self.violations:
            w["violations"] = [{"word": name, "trace": t} for name, t in self.violations[:10]]
        return CheckResult.of("gps.trace_integrality", self.ok, w)


def trace_integrality_sample(generators: Sequence[TowerMatrix], max_word_length: int) -> TraceIntegrityReport:
    """Test ``tr(w)`` for algebraic integrality over every word up to the bound."""
    checked = 0
    bad = []
    for word, m in iter_words(generators, max_word_length):
        checked += 1
        t = m.trace()
        if not is_algebraic_integer(t):
            bad.append((word_name(word), t))
    return TraceIntegrityReport(checked, bad, max_word_length)


# -- adjoint representation ---------------------------------------------------------

@dataclass
class AdjointData:
    form: DiagonalForm
    basis: list  # TowerMatrix, X_ij = G^{-1}(E_ij - E_ji)
    pairs: list  # (i, j) with i < j

    @property
    def dim(self) -> int:
        return len(self.basis)

    @functools.cached_property
    def gram_ratios(self) -> dict:
        """``G_j / G_b`` for all index pairs, computed once."""
        gd = self.form.gram_diagonal
        return {(j, b): gd[j] / gd[b] for j in range(len(gd)) for b in range(len(gd))}


def adjoint_basis(J: DiagonalForm) -> AdjointData:
    """Basis of ``{X : X^T G + G X = 0}``, of dimension ``n(n+1)/2``."""
    F = J.field
    m = J.dim
    ginv = [g.inverse() for g in J.gram_diagonal]
    basis, pairs = [], []
    G = J.gram
    for i in range(m):
        for j in range(i + 1, m):
            rows = [[F.zero] * m for _ in range(m)]
            rows[i][j] = ginv[i]
            rows[j][i] = -ginv[j]
            X = TowerMatrix(rows, F)
            skew = X.T @ G + G @ X
            if not all(e.is_zero() for e in skew.entries()):
                raise AssertionError("basis element is not G-skew")  # pragma: no cover
            basis.append(X)
            pairs.append((i, j))
    return AdjointData(J, basis, pairs)


def adjoint_trace_formula(g: TowerMatrix) -> FieldElement:
    """Trace on the second exterior power: ``((tr g)^2 - tr(g^2)) / 2``."""
    t = g.trace()
    return (t * t - (g @ g).trace()) / 2


def adjoint_trace(g: TowerMatrix, ad: AdjointData, cross_check: bool = True,
                  check_isometry: bool = True) -> FieldElement:
    """Trace of ``X ↦ g X g^{-1}`` on the G-skew matrices, in the given basis."""
    F = g.field if g.field.depth >= ad.form.field.depth else ad.form.field
    g = g.lift(F)
    J = ad.form.lift(F) if F is not ad.form.field else ad.form
    gd = J.gram_diagonal
    if check_isometry and not (g.T @ J.gram @ g) == J.gram:
        raise NotAnIsometry("adjoint trace needs an isometry of the form")

    ratio = {k: v.lift(F) for k, v in ad.gram_ratios.items()}

    def ginv(b, j):
        # g^{-1} = G^{-1} g^T G for an isometry
        return g[j, b] * ratio[j, b]

    total = F.zero
    for X, (i, j) in zip(ad.basis, ad.pairs):
        # coordinate of Y = g X g^-1 along X_ij is (G Y)_{ij}; only Y_ij is needed
        y = F.zero
        for a, b in ((i, j), (j, i)):
            y = y + g[i, a] * X[a, b].lift(F) * ginv(b, j)
        total = total + gd[i] * y
    if cross_check:
        other = adjoint_trace_formula(g)
        if other != total:
            raise AssertionError(f"adjoint trace paths disagree: {total} vs {other}")
    return total


@dataclass
class AdjointFieldReport:
    level: int  # smallest tower level containing every trace
    field_name: str
    top_step_witness: tuple | None  # (word name, trace) with nonzero top coordinate
    words_checked: int
    status: str  # "pass" | "inconclusive"
    max_word_length: int

    def to_check(self) -> CheckResult:
        w = {"level": self.level, "field": self.field_name, "words_checked": self.words_checked,
             "max_word_length": self.max_word_length}
        if self.top_step_witness:
            w["top_step_witness"] = {"word": self.top_step_witness[0], "adjoint_trace": self.top_step_witness[1]}
        detail = None if self.status == "pass" else "inconclusive at this word length"
        return CheckResult("gps.adjoint_trace_field", self.status, w, None, detail)


def adjoint_trace_field_report(generators: Sequence[TowerMatrix], ad: AdjointData,
                               max_word_length: int) -> AdjointFieldReport:
    """Locate the adjoint traces of all short words inside the tower.

    ``status == "pass"`` means the traces certifiably generate a field not
    contained in the level below the top one (or the generators are rational).
    """
    if not generators:
        base = ad.form.field.truncate(0)
        return AdjointFieldReport(0, base.truncate(0).describe(), None, 0, "inconclusive", max_word_length)
    top = max([g.field for g in generators] + [ad.form.field], key=lambda f: f.depth)
    level = 0
    witness = None
    checked = 0
    for word, m in iter_words(generators, max_word_length):
        checked += 1
        # words in certified isometries are isometries; skip the per-word Gram check
        t = adjoint_trace(m, ad, cross_check=False, check_isometry=False).descend()
        level = max(level, t.level)
        if witness is None and top.depth and t.level == top.depth:
            witness = (word_name(word), t)
    fname = top.truncate(level).describe()
    if witness is not None:
        status = "pass"
    elif top.depth == 0 and top.degree == 1:
        status = "pass"  # rational generators, rational traces
    else:
        status = "inconclusive"
    return AdjointFieldReport(level, fname, witness, checked, status, max_word_length)


# -- commensurability classes ------------------------------------------------------------

@dataclass
class CommensurabilityCertificate:
    radicand: FieldElement  # beta / alpha for the class representative
    betas: list
    field: FieldTower
    claim: str

    def to_json(self) -> dict:
        from .report import exact

        return {"radicand": exact(self.radicand), "betas": exact(self.betas),
                "field": exact(self.field), "claim": self.claim}


def candidate_ok(K: FieldTower, alpha: FieldElement, beta: FieldElement) -> str | None:
    """Reason the pair fails the sign/square conditions, or None."""
    d = K.degree - 1
    for name, x in (("alpha", alpha), ("beta", beta)):
        if x.is_zero() or certified_sign(x).sign != "positive":
            return f"{name} is not positive"
        if sign_count(x) != d:
            return f"sign_count({name}) != {d}"
    if is_square(beta / alpha)[0]:
        return "beta/alpha is a square"
    return None


def enumerate_commensurability_certificates(K: FieldTower, beta_candidates: Sequence, alpha,
                                            skipped: list | None = None) -> list[CommensurabilityCertificate]:
    """Group candidate betas by the field ``K(√(β/α))`` and certify one class per field.

    Two ratios give the same field exactly when their quotient is a square
    in K; distinct fields have distinct adjoint trace fields.
    """
    alpha = K.element(alpha)
    groups: list[list[FieldElement]] = []
    for b in beta_candidates:
        beta = K.element(b)
        reason = candidate_ok(K, alpha, beta)
        if reason:
            log.info("skipping beta=%s: %s", beta, reason)
            if skipped is not None:
                skipped.append({"beta": beta, "reason": reason})
            continue
        for grp in groups:
            if is_square(beta / grp[0])[0]:
                grp.append(beta)
                break
        else:
            groups.append([beta])
    certs = []
    for grp in groups:
        r = grp[0] / alpha
        L = adjoin_sqrt(K, r, require_totally_real=True)
        claim = (f"adjoint trace field {L.describe()}; not commensurable with the "
                 f"{len(groups) - 1} other class(es) listed")
        certs.append(CommensurabilityCertificate(r, grp, L, claim))
    return certs
