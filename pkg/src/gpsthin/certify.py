"""Zariski-density evidence and assembly of the thinness certificate.

Density is reported as evidence.  A full-rank Burnside span shows the
sampled group acts absolutely irreducibly, and an empty space of invariant
bilinear forms rules out the orthogonal and symplectic groups.  Neither
replaces the density theorem for bent groups, which is cited.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import DimensionTooLarge, EmptyGenerators, MissingStage
from .linalg import Echelon, TowerMatrix, kernel
from .numfield.tower import FieldElement, FieldTower, certified_sign
from .report import CertificateReport, CheckResult
from .words import iter_words, word_name


def _working_field(generators: Sequence[TowerMatrix]) -> FieldTower:
    return max((g.field for g in generators), key=lambda f: f.depth)


def burnside_span(generators: Sequence[TowerMatrix], max_word_length: int) -> int:
    """Dimension of the span of all words (identity included) in the matrix space."""
    if not generators:
        raise EmptyGenerators("burnside_span needs at least one generator")
    F = _working_field(generators)
    m = generators[0].size
    ech = Echelon(F, m * m)
    for _, w in iter_words(generators, max_word_length, include_identity=True):
        ech.add([c for row in w.lift(F).raw for c in row])
        if ech.full():
            break
    return ech.rank


@dataclass
class InvariantForms:
    dim: int
    basis: list  # TowerMatrix
    symmetric_only: bool


def _form_basis(m: int, symmetric_only: bool):
    if symmetric_only:
        return [(a, b) for a in range(m) for b in range(a, m)]
    return [(a, b) for a in range(m) for b in range(m)]


def invariant_bilinear_space(generators: Sequence[TowerMatrix], symmetric_only: bool = True) -> InvariantForms:
    """Exact solution space of ``g^T X g = X`` for all generators."""
    if not generators:
        raise EmptyGenerators("invariant_bilinear_space needs at least one generator")
    F = _working_field(generators)
    m = generators[0].size
    unknowns = _form_basis(m, symmetric_only)
    zero = F.zero.coords
    equations = []
    for g in generators:
        g = g.lift(F)
        A = g.raw
        # column k of the linear map X -> g^T X g - X, evaluated on basis form E_k
        cols = []
        for a, b in unknowns:
            col = {}
            for i in range(m):
                for j in range(m):
                    v = F._mul(A[a][i], A[b][j]) if any(A[a][i]) and any(A[b][j]) else zero
                    if symmetric_only and a != b:
                        w = F._mul(A[b][i], A[a][j]) if any(A[b][i]) and any(A[a][j]) else zero
                        v = F._add(v, w)
                        if (i, j) in ((a, b), (b, a)):
                            v = F._sub(v, F.one.coords)
                    elif (i, j) == (a, b):
                        v = F._sub(v, F.one.coords)
                    col[(i, j)] = v
            cols.append(col)
        positions = [(i, j) for i in range(m) for j in range(m) if not symmetric_only or i <= j]
        for pos in positions:
            equations.append([col[pos] for col in cols])
    ker = kernel(equations, len(unknowns), F)
    basis = []
    for vec in ker:
        rows = [[F.zero] * m for _ in range(m)]
        for (a, b), x in zip(unknowns, vec):
            rows[a][b] = rows[a][b] + x
            if symmetric_only and a != b:
                rows[b][a] = rows[b][a] + x
        basis.append(TowerMatrix(rows, F))
    return InvariantForms(len(basis), basis, symmetric_only)


def shrink_invariant_forms(basis: Sequence[TowerMatrix], g: TowerMatrix) -> list[TowerMatrix]:
    """Basis of the forms in ``span(basis)`` that *g* also preserves."""
    if not basis:
        return []
    F = max([g.field] + [X.field for X in basis], key=lambda f: f.depth)
    g = g.lift(F)
    diffs = [g.T @ X.lift(F) @ g - X.lift(F) for X in basis]
    m = g.size
    equations = [[D.raw[i][j] for D in diffs] for i in range(m) for j in range(m)]
    out = []
    for vec in kernel(equations, len(basis), F):
        acc = TowerMatrix.identity(m, F) * 0
        for x, X in zip(vec, basis):
            if not x.is_zero():
                acc = acc + X.lift(F) * x
        out.append(acc)
    return out


@dataclass
class ProbeResult:
    found: bool
    witness: list | None  # basis vectors of an invariant subspace
    kind: str | None

    @property
    def note(self) -> str | None:
        return None if self.found else "none found (evidence, not proof)"


def _spin(vec, gens, F, m):
    ech = Echelon(F, m)
    ech.add(vec)
    queue = [vec]
    while queue:
        v = queue.pop()
        for g in gens:
            w = [F.zero.coords] * m
            for i in range(m):
                acc = F.zero.coords
                for j in range(m):
                    if any(g.raw[i][j]) and any(v[j]):
                        acc = F._add(acc, F._mul(g.raw[i][j], v[j]))
                w[i] = acc
            if ech.add(w):
                queue.append(w)
                if ech.full():
                    return ech
    return ech


def invariant_subspace_probe(generators: Sequence[TowerMatrix]) -> ProbeResult:
    """Look for a proper invariant subspace by spinning candidate vectors.

    Candidates are the standard basis vectors and kernel vectors of
    ``g ± 1``, ``g_i - g_j`` and commutators.  Invariant subspaces of the
    transposed generators give invariant subspaces (annihilators) too.
    """
    if not generators:
        raise EmptyGenerators("invariant_subspace_probe needs at least one generator")
    m = generators[0].size
    if m > 6:
        raise DimensionTooLarge(f"dimension {m} exceeds the probe limit of 6")
    F = _working_field(generators)
    gens = [g.lift(F) for g in generators]
    I = TowerMatrix.identity(m, F)
    specials = []
    for g in gens:
        specials += [g - I, g + I]
    for i, g in enumerate(gens):
        for h in gens[i + 1:]:
            specials += [g - h, g @ h - h @ g]

    def candidates(mats):
        for k in range(m):
            yield [F.one.coords if i == k else F.zero.coords for i in range(m)]
        for S in mats:
            for vec in kernel(S.raw, m, F):
                yield [x.coords for x in vec]

    for transpose in (False, True):
        gs = [g.T for g in gens] if transpose else gens
        mats = [S.T for S in specials] if transpose else specials
        for vec in candidates(mats):
            ech = _spin(vec, gs, F, m)
            if 0 < ech.rank < m:
                span = [r for _, r in ech.rows]
                if not transpose:
                    return ProbeResult(True, [[FieldElement(F, c) for c in r] for r in span], "invariant subspace")
                ann = kernel(span, m, F)
                return ProbeResult(True, ann, "invariant subspace (annihilator of a dual one)")
    return ProbeResult(False, None, None)


def infinite_order_witness(generators: Sequence[TowerMatrix], max_word_length: int = 2):
    """A word with ``|σ_0(tr w)| > dim``, hence an eigenvalue off the unit circle."""
    if not generators:
        return None
    m = generators[0].size
    for word, w in iter_words(generators, max_word_length):
        t = w.trace()
        for s in (t - m, -t - m):
            if not s.is_zero() and certified_sign(s).sign == "positive":
                return {"word": word_name(word), "trace": t}
    return None


@dataclass
class DensityEvidence:
    burnside_dimension: int
    full_dimension: int
    invariant_bilinear_dimension: int
    invariant_symmetric_dimension: int
    invariant_subspace_found: bool
    invariant_subspace_witness: Any
    infinite_order: Any
    word_length_used: int

    def checks(self) -> list[CheckResult]:
        """Density checks are evidence: missing evidence is inconclusive, never a failure."""
        full = self.burnside_dimension == self.full_dimension
        no_form = self.invariant_bilinear_dimension == 0
        return [
            CheckResult("density.burnside_span", "pass" if full else "inconclusive",
                        {"dimension": self.burnside_dimension, "full": self.full_dimension,
                         "word_length": self.word_length_used},
                        None, "evidence: words span the full matrix algebra" if full else
                        "span not full at this word length"),
            CheckResult("density.no_invariant_bilinear_form", "pass" if no_form else "inconclusive",
                        {"dimension": self.invariant_bilinear_dimension,
                         "symmetric_dimension": self.invariant_symmetric_dimension},
                        None, None if no_form else "the sampled generators preserve a bilinear form"),
            CheckResult("density.invariant_subspace_probe",
                        "inconclusive" if self.invariant_subspace_found else "pass",
                        {"witness": self.invariant_subspace_witness} if self.invariant_subspace_found else None,
                        None, "the sampled generators are reducible" if self.invariant_subspace_found
                        else "none found (evidence, not proof)"),
            CheckResult("density.infinite_order_element",
                        "pass" if self.infinite_order else "inconclusive", self.infinite_order),
        ]


def density_evidence(generators: Sequence[TowerMatrix], max_word_length: int) -> DensityEvidence:
    if not generators:
        raise EmptyGenerators("no generators for density evidence")
    m = generators[0].size
    span = burnside_span(generators, max_word_length)
    gen_forms = invariant_bilinear_space(generators, symmetric_only=False)
    sym_forms = invariant_bilinear_space(generators, symmetric_only=True)
    probe = invariant_subspace_probe(generators) if m <= 6 else ProbeResult(False, None, None)
    return DensityEvidence(span, m * m, gen_forms.dim, sym_forms.dim, probe.found, probe.witness,
                           infinite_order_witness(generators), max_word_length)


# -- certificate assembly -------------------------------------------------------------

BY_THEOREM = [
    ("theorem.bent_group_isomorphic",
     "each bent group is isomorphic to the unbent lattice",
     "Benoist (closed case) and Marquis (cusped case), properly convex deformations by bending"),
    ("theorem.infinite_index",
     "the bent group has infinite index in SU(J1, tau, O_M)",
     "Mostow rigidity: a finite-index subgroup would be a lattice of SL(n+1, R) isomorphic to one of SO(n,1)"),
    ("theorem.non_arithmetic",
     "the interbred lattice is non-arithmetic",
     "Gromov and Piatetski-Shapiro (1987), non-arithmetic groups in Lobachevsky spaces"),
]

# geometric hypotheses on the GPS manifolds, recorded in the report but not checked
ASSUMED = [
    ("assumed.torsion_free_identity_component",
     "finite-index passage to torsion-free subgroups in the identity component",
     "Selberg's lemma; identity-component membership is not certified"),
    ("assumed.embedded_hypersurface",
     "the totally geodesic hypersurface is embedded and non-separating",
     "Long, immersions and embeddings of totally geodesic surfaces"),
    ("assumed.torus_cusps",
     "all cusps are torus times interval",
     "McReynolds-Reid-Stover, collisions at infinity in hyperbolic manifolds"),
    ("assumed.density_theorem",
     "bent groups are Zariski dense in SL(n+1, R)",
     "density of bent groups, from constructing thin subgroups of SL(n+1, R) via bending; computed checks are evidence"),
]

REQUIRED_STAGES = ("validation", "instance", "unit", "setup", "bending", "centralizer",
                   "bent", "trace", "adjoint", "density")


@dataclass
class ThinnessCertificate:
    instance_summary: dict
    unit_summary: dict | None
    checks: list
    density: DensityEvidence | None
    by_theorem: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_report(self, input_echo: Any, mode: str = "certify") -> CertificateReport:
        rep = CertificateReport(mode, input_echo)
        rep.extend(self.checks)
        rep.extend(self.by_theorem)
        rep.sections = {"instance": self.instance_summary, "unit": self.unit_summary,
                        "assumed": [{"claim": claim, "citation": cite, "status": "assumed-by-theorem"}
                                    for _, claim, cite in ASSUMED]}
        if self.density is not None:
            rep.sections["density"] = {
                "burnside_dimension": self.density.burnside_dimension,
                "invariant_bilinear_dimension": self.density.invariant_bilinear_dimension,
                "invariant_symmetric_dimension": self.density.invariant_symmetric_dimension,
                "invariant_subspace_found": self.density.invariant_subspace_found,
                "word_length_used": self.density.word_length_used,
                "label": "evidence",
            }
        return rep


def by_theorem_items() -> list[CheckResult]:
    return [CheckResult(name, "by-theorem", None, cite, claim) for name, claim, cite in BY_THEOREM]


def assemble_thinness_certificate(stages: dict) -> ThinnessCertificate:
    """Collate the outputs of every pipeline stage.

    *stages* maps each name in :data:`REQUIRED_STAGES` to a list of
    :class:`CheckResult` (or to ``None`` when the stage was skipped because
    an earlier one failed).  ``instance_summary``, ``unit_summary`` and
    ``density_evidence`` are optional extras.
    """
    missing = [s for s in REQUIRED_STAGES if s not in stages]
    if missing:
        raise MissingStage(f"missing stage(s): {', '.join(missing)}")
    checks: list[CheckResult] = []
    for s in REQUIRED_STAGES:
        got = stages[s]
        if got is None:
            checks.append(CheckResult(f"{s}.stage", "skipped", None, None, "earlier stage failed"))
        else:
            checks.extend(got)
    return ThinnessCertificate(stages.get("instance_summary", {}), stages.get("unit_summary"),
                               checks, stages.get("density_evidence"), by_theorem_items())
