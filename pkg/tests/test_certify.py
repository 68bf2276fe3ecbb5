import itertools
import json

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gpsthin.certify import (
    ASSUMED,
    BY_THEOREM,
    REQUIRED_STAGES,
    assemble_thinness_certificate,
    burnside_span,
    density_evidence,
    infinite_order_witness,
    invariant_bilinear_space,
    invariant_subspace_probe,
    shrink_invariant_forms,
)
from gpsthin.errors import DimensionTooLarge, EmptyGenerators, MissingStage
from gpsthin.forms import DiagonalForm, sample_isometries
from gpsthin.linalg import TowerMatrix
from gpsthin.report import CheckResult, parse_report, serialize_report

K0 = [[1, 2, -2], [2, 1, -2], [2, 2, -3]]


def _bilinear_oracle(gens) -> tuple[int, int]:
    """Dimension of {X : g^T X g = X} by sympy nullspace, all forms and symmetric ones."""
    m = gens[0].nrows
    xs = sympy.symbols(f"x0:{m * m}")
    X = sympy.Matrix(m, m, xs)
    eqs = []
    for g in gens:
        G = sympy.Matrix([[sympy.Rational(str(g[i, j])) for j in range(m)] for i in range(m)])
        eqs += list(G.T * X * G - X)
    A = sympy.Matrix([[sympy.diff(e, x) for x in xs] for e in eqs])
    full = len(A.nullspace())
    sym = [X[i, j] - X[j, i] for i in range(m) for j in range(i + 1, m)]
    As = A.col_join(sympy.Matrix([[sympy.diff(e, x) for x in xs] for e in sym])) if sym else A
    return full, len(As.nullspace())


def test_burnside_identity(Q):
    assert burnside_span([TowerMatrix.identity(4, Q)], 5) == 1


def test_burnside_diagonal(Q):
    gens = [TowerMatrix.diag([2, 3, 5, 7], Q), TowerMatrix.diag([1, -1, 1, -1], Q)]
    assert burnside_span(gens, 5) <= 4 + 1


def test_burnside_full(canonical, lorentz_gens):
    assert burnside_span(lorentz_gens, 4) == 16
    # height-1 samples all fix e0
    assert burnside_span(sample_isometries(canonical.J1, 1, 6), 4) < 16


def test_bilinear_identity(Q):
    assert invariant_bilinear_space([TowerMatrix.identity(4, Q)]).dim == 10
    assert invariant_bilinear_space([TowerMatrix.identity(4, Q)], symmetric_only=False).dim == 16


def test_bilinear_lorentz(canonical, lorentz_gens):
    forms = invariant_bilinear_space(lorentz_gens)
    assert forms.dim == 1
    G = canonical.J1.gram
    X = forms.basis[0]
    ratio = X[0, 0] / G[0, 0]
    assert X == G * ratio


@pytest.mark.parametrize("m", [2, 3])
def test_bilinear_matches_oracle(Q, m):
    if m == 2:
        J = DiagonalForm([1, -2], Q)
        samples = [TowerMatrix([[3, 2], [4, 3]], Q), TowerMatrix([[-1, 0], [0, -1]], Q)]
    else:
        J = DiagonalForm([1, 1, -1], Q)
        samples = sample_isometries(J, 1, 4)
    for k in range(1, len(samples) + 1):
        gens = samples[:k]
        full, sym = _bilinear_oracle(gens)
        assert invariant_bilinear_space(gens, symmetric_only=False).dim == full
        assert invariant_bilinear_space(gens).dim == sym


def test_shrink_matches_recompute(lorentz_gens):
    gens = lorentz_gens
    basis = invariant_bilinear_space(gens[:1]).basis
    for k in range(1, len(gens)):
        basis = shrink_invariant_forms(basis, gens[k])
        assert len(basis) == invariant_bilinear_space(gens[:k + 1]).dim


def test_probe(Q, canonical, lorentz_gens):
    block = TowerMatrix.diag([1, 1, 1, 1], Q)
    res = invariant_subspace_probe([block])
    assert res.found
    assert invariant_subspace_probe(sample_isometries(canonical.J1, 1, 6)).found
    irreducible = invariant_subspace_probe(lorentz_gens)
    assert not irreducible.found and irreducible.note == "none found (evidence, not proof)"
    with pytest.raises(EmptyGenerators):
        invariant_subspace_probe([])
    with pytest.raises(DimensionTooLarge):
        invariant_subspace_probe([TowerMatrix.identity(7, Q)])


def test_probe_finds_block(Q):
    g = TowerMatrix([[1, 2, -2, 0], [2, 1, -2, 0], [2, 2, -3, 0], [0, 0, 0, 1]], Q)
    res = invariant_subspace_probe([g])
    assert res.found and 0 < len(res.witness) < 4


def test_infinite_order(Q, lorentz_gens):
    assert infinite_order_witness([TowerMatrix.identity(4, Q)]) is None
    assert infinite_order_witness([]) is None
    w = infinite_order_witness(lorentz_gens)
    assert w is not None


@settings(max_examples=10, deadline=None)
@given(st.permutations(range(5)), st.integers(0, 4))
def test_density_invariance(lorentz_gens, order, k):
    gens = lorentz_gens[:5]
    base = density_evidence(gens, 3)
    perm = [gens[i] for i in order]
    assert burnside_span(perm, 3) == base.burnside_dimension
    inv = list(perm)
    inv[k] = inv[k].inverse()
    assert invariant_bilinear_space(inv).dim == base.invariant_symmetric_dimension
    conj = gens[(k + 1) % 5]
    moved = [conj @ g @ conj.inverse() for g in gens]
    assert burnside_span(moved, 3) == base.burnside_dimension
    assert invariant_bilinear_space(moved).dim == base.invariant_symmetric_dimension


def test_burnside_monotone(canonical):
    gens = sample_isometries(canonical.J1, 1, 4)
    dims = [burnside_span(gens, w) for w in range(0, 5)]
    assert dims == sorted(dims)
    more = [burnside_span(gens[:k], 3) for k in range(1, 5)]
    assert more == sorted(more)


def test_density_checks_never_fail(Q):
    ev = density_evidence([TowerMatrix.identity(4, Q)], 3)
    statuses = {c.name: c.status for c in ev.checks()}
    assert set(statuses.values()) <= {"pass", "inconclusive"}
    assert statuses["density.burnside_span"] == "inconclusive"


def _all_stages():
    return {s: [CheckResult(f"{s}.x", "pass")] for s in REQUIRED_STAGES}


def test_assemble_missing_stage():
    stages = _all_stages()
    del stages["adjoint"]
    with pytest.raises(MissingStage):
        assemble_thinness_certificate(stages)


def test_assemble_and_roundtrip():
    stages = _all_stages()
    stages["trace"] = [CheckResult("trace.x", "fail", {"word": "a*b", "trace": "1/2"})]
    stages["adjoint"] = None
    cert = assemble_thinness_certificate(stages)
    assert not cert.ok
    rep = cert.to_report({"mode": "certify"})
    names = [c.name for c in rep.checks]
    assert "adjoint.stage" in names
    assert sum(c.status == "by-theorem" for c in rep.checks) == len(BY_THEOREM) == 3
    assert len(rep.sections["assumed"]) == len(ASSUMED)
    assert all(a["status"] == "assumed-by-theorem" for a in rep.sections["assumed"])
    for c in rep.checks:
        if c.status == "fail":
            assert c.witness is not None
    data = serialize_report(rep)
    back = parse_report(data)
    assert serialize_report(back) == data
    assert json.loads(data)["summary"]["failed"] == ["trace.x"]
