"""Stage-by-stage orchestration of the construct-and-certify flow.

Each stage returns a list of :class:`CheckResult`.  A stage that cannot run
because an earlier one failed is recorded as ``skipped``.
"""

from __future__ import annotations

import copy
import itertools
import logging
from dataclasses import dataclass
from typing import Callable

from . import bending
from .certify import (
    REQUIRED_STAGES,
    assemble_thinness_certificate,
    density_evidence,
    invariant_bilinear_space,
    shrink_invariant_forms,
)
from .config import PipelineConfig
from .errors import (
    DegreeOne,
    GpsThinError,
    InvalidParameters,
    MemberNotUnitary,
    NoneFound,
    NoUnitFound,
    NotJ2Isometry,
    SignConditionFailed,
)
from .forms import block_embed, first_nonintegral_entry, is_special_isometry, iter_isometries
from .gps import (
    GpsParameters,
    adjoint_basis,
    adjoint_trace_field_report,
    build_gps_instance,
    enumerate_commensurability_certificates,
    trace_integrality_sample,
    transport_isometry,
    validate_gps_parameters,
)
from .linalg import Echelon, TowerMatrix
from .numfield.tower import FieldTower, adjoin_sqrt, is_algebraic_integer, make_base_field
from .report import CertificateReport, CheckResult

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_UNIT = 4
EXIT_CERTIFY = 5


@dataclass
class PipelineResult:
    exit_code: int
    report: CertificateReport


def build_field(cfg: PipelineConfig) -> FieldTower:
    K = make_base_field(cfg.base_poly, cfg.base_root, cfg.base_root_interval)
    for r in cfg.steps:
        K = adjoin_sqrt(K, K.element(r), require_totally_real=True)
    return K


def gps_parameters(cfg: PipelineConfig, K: FieldTower) -> GpsParameters:
    g = cfg.gps
    return GpsParameters.make(K, g["alpha"], g["beta"], g["middle"], g["last"], g["n"])


def _matrix(rows, F: FieldTower) -> TowerMatrix:
    return TowerMatrix([[F.element(x) for x in row] for row in rows], F)


def _input_echo(cfg: PipelineConfig) -> dict:
    doc = copy.deepcopy(cfg.raw) if cfg.raw is not None else {}
    doc["mode"] = cfg.mode
    doc.setdefault("words", {})["max_word_length"] = cfg.max_word_length
    doc.pop("output", None)  # where the report goes does not change what it says
    return doc


def _transport_candidate(B: TowerMatrix, r) -> bool:
    """Cheap test that ``h B h^-1`` has an irrational entry and integral entries.

    With ``h = Diag(√r, 1, ..., 1)`` only row and column 0 change: entries
    ``√r B[0,j]`` (always integral) and ``B[j,0]/√r``, which is integral
    exactly when ``B[j,0]^2 / r`` is.
    """
    m = B.nrows
    if all(B[0, j].is_zero() and B[j, 0].is_zero() for j in range(1, m)):
        return False
    return all(is_algebraic_integer(B[j, 0] * B[j, 0] / r) for j in range(1, m) if not B[j, 0].is_zero())


def _default_s(inst, height: int) -> TowerMatrix:
    """First transported J2 sample with an irrational entry and integral entries."""
    r = inst.params.beta / inst.params.alpha
    for hb in range(1, height + 1):
        for B in iter_isometries(inst.J2, hb):
            if not _transport_candidate(B, r):
                continue
            T = transport_isometry(inst, B)
            if first_nonintegral_entry(T) is None:
                return T
    raise NoneFound(f"no integral transported J2-isometry with irrational entries at height {height}")


def _pick(samples, count: int, scan: int = 2000) -> list[TowerMatrix]:
    """Up to *count* samples that pin down the invariant form.

    Early samples tend to share a small block and commute, so a sample is
    taken only if it shrinks the space of invariant symmetric forms; once
    that space is a line, further samples are taken in order.  Inverses of
    samples already taken are skipped.  At most *scan* samples are examined.
    """
    out: list[TowerMatrix] = []
    taken = set()
    forms = None
    for g in itertools.islice(samples, scan):
        if len(out) >= count:
            break
        if g in taken:
            continue
        if forms is None:
            forms = invariant_bilinear_space([g]).basis
        elif len(forms) > 1:
            smaller = shrink_invariant_forms(forms, g)
            if len(smaller) == len(forms):
                continue
            forms = smaller
        out.append(g)
        taken.update((g, g.inverse()))
    return out


def select_generators(cfg: PipelineConfig, inst):
    """Hat generators, s, and centralizer witnesses: from the config, else sampled."""
    L = inst.L
    gen = cfg.generators
    if "hat" in gen:
        hat = [_matrix(m, L) for m in gen["hat"]]
    else:
        count = cfg.sample("hat_count", 3)
        pool = iter_isometries(inst.J1, cfg.sample("height_bound", 1), cfg.sample("entry_bound", None))
        hat = [g.lift(L) for g in _pick(pool, count)]
    if "s" in gen:
        s = _matrix(gen["s"], L)
    else:
        s = _default_s(inst, cfg.sample("s_height_bound", 2))
    if "centralizer" in gen:
        wit = [_matrix(m, L) for m in gen["centralizer"]]
    else:
        count = cfg.sample("centralizer_count", 3)
        try:
            inner = _pick(iter_isometries(inst.J1.restricted(), cfg.sample("height_bound", 1)), count)
        except ValueError:
            inner = []
        wit = [block_embed(b).lift(L) for b in inner]
    return hat, s, wit


def _check_inputs(hat, s, J1L) -> list[CheckResult]:
    """Membership of the user-side generators in SO(J1, O_L)."""
    out = []
    for label, g in [(f"hat[{k}]", g) for k, g in enumerate(hat)] + [("s", s)]:
        res = is_special_isometry(g, J1L)
        bad = first_nonintegral_entry(g)
        ok = bool(res) and bad is None
        w = None if ok else (res.witness if not res else {"entry": list(bad[0]), "value": bad[1]})
        out.append(CheckResult.of(f"gps.member.{label}", ok, w))
    return out


def _unbent_form_check(unbent, G1) -> CheckResult:
    """The unbent generators preserve G1; with enough of them, nothing else."""
    if not unbent:
        return CheckResult("density.unbent_form_recovered", "inconclusive", None, None, "no unbent generators")
    forms = invariant_bilinear_space(unbent)
    w = {"dimension": forms.dim}
    if not _in_span(G1, forms.basis):
        return CheckResult("density.unbent_form_recovered", "fail", w, None, "G1 is not invariant")
    if forms.dim > 1:
        return CheckResult("density.unbent_form_recovered", "inconclusive", w, None,
                           "the sample preserves more forms than G1")
    X = forms.basis[0]
    w["ratio_to_G1"] = X[0, 0] / G1[0, 0].lift(X.field)
    return CheckResult("density.unbent_form_recovered", "pass", w, None,
                       "the unbent generators preserve exactly the line spanned by G1")


def _in_span(G: TowerMatrix, basis) -> bool:
    F = max([G.field] + [X.field for X in basis], key=lambda f: f.depth)
    ech = Echelon(F, G.size * G.size)
    for X in basis:
        ech.add([c for row in X.lift(F).raw for c in row])
    return not ech.add([c for row in G.lift(F).raw for c in row])


def run_pipeline(cfg: PipelineConfig, on_stage: Callable[[str], None] | None = None) -> PipelineResult:
    """Run the stages the mode asks for and return the exit code and report."""
    def enter(name):
        log.info("stage %s", name)
        if on_stage is not None:
            on_stage(name)

    report = CertificateReport(cfg.mode, _input_echo(cfg))
    enter("field")
    K = build_field(cfg)

    if cfg.mode == "enumerate":
        enter("enumerate")
        alpha = cfg.gps["alpha"] if cfg.gps else 1
        skipped: list = []
        certs = enumerate_commensurability_certificates(K, cfg.beta_candidates, alpha, skipped)
        report.sections = {"certificates": certs, "skipped": skipped}
        report.add(CheckResult("enumerate.distinct_fields", "pass",
                               {"classes": len(certs), "candidates": len(cfg.beta_candidates),
                                "skipped": len(skipped)}))
        return PipelineResult(EXIT_OK, report)

    enter("validation")
    params = gps_parameters(cfg, K)
    record = validate_gps_parameters(params)
    report.extend(record.checks)
    if not record.ok or cfg.mode == "validate":
        report.sections = {"parameters": dict(params.named_elements()), "field": K}
        return PipelineResult(EXIT_OK if record.ok else EXIT_VALIDATION, report)
    return _construct(cfg, params, record, report, enter)


def _construct(cfg, params, record, report, enter) -> PipelineResult:
    stages: dict = {s: None for s in REQUIRED_STAGES}
    stages["validation"] = []  # already in the report

    enter("instance")
    try:
        inst = build_gps_instance(params)
    except InvalidParameters as e:  # pragma: no cover - validation ran first
        report.add(CheckResult.of("gps.instance", False, None, str(e)))
        return PipelineResult(EXIT_VALIDATION, report)
    stages["instance"] = [
        CheckResult.of("gps.gram_covariance", bool(inst.gram_covariance), {"h": inst.h}),
        CheckResult.of("gps.L_totally_real", inst.L.is_totally_real, {"L": inst.L}),
    ]
    stages["instance_summary"] = {
        "K": inst.K, "L": inst.L, "n": inst.n,
        "J1_gram_diagonal": list(inst.J1.gram_diagonal), "J2_gram_diagonal": list(inst.J2.gram_diagonal),
        "h_diagonal": [inst.h[i, i] for i in range(inst.n + 1)],
    }

    exit_code = EXIT_OK
    enter("unit")
    try:
        if cfg.unit_value is not None:
            unit = bending.certify_unit(inst.L.element(cfg.unit_value))
        else:
            unit = bending.find_bending_unit(inst.L, cfg.unit_search_bound, cfg.unit_tier)
        stages["unit"] = [CheckResult.of("bending.unit_conditions", True,
                                         {"u": unit.u, "tier": unit.tier, "certificates": unit.sign_certificates,
                                          "norm_witness": unit.norm_witness})]
        stages["unit_summary"] = {"u": unit.u, "tier": unit.tier}
    except (NoUnitFound, DegreeOne, SignConditionFailed) as e:
        stages["unit"] = [CheckResult("bending.unit_conditions", "fail", {"error": type(e).__name__}, None, str(e))]
        unit = None
        exit_code = EXIT_UNIT

    setup = None
    if unit is not None:
        enter("setup")
        try:
            setup = bending.build_unitary_setup(inst, unit)
            stages["setup"] = setup.checks
            stages["unit_summary"].update({"M": setup.M, "radicand": unit.u * unit.u - 4, "v": setup.root})
        except GpsThinError as e:
            stages["setup"] = [CheckResult("bending.setup", "fail", {"error": type(e).__name__}, None, str(e))]

    if cfg.mode == "build":
        for s in ("instance", "unit", "setup"):
            report.extend(stages[s] or [CheckResult(f"{s}.stage", "skipped", None, None, "earlier stage failed")])
        report.sections = {"instance": stages["instance_summary"], "unit": stages.get("unit_summary")}
        return PipelineResult(_exit(report, exit_code), report)

    if setup is not None and all(c.passed for c in setup.checks):
        _certify_stages(cfg, inst, setup, stages, enter)
    cert = assemble_thinness_certificate(stages)
    full = cert.to_report(report.input, cfg.mode)
    full.checks = report.checks + full.checks
    if "generators" in stages:
        full.sections["generators"] = stages["generators"]
    return PipelineResult(_exit(full, exit_code), full)


def _certify_stages(cfg, inst, setup, stages, enter) -> None:
    wl = cfg.max_word_length
    enter("bending")
    c = bending.bending_matrix(setup, inst.n)
    stages["bending"] = bending.certify_bending_in_su(setup, c)

    enter("generators")
    J1L = inst.J1_over_L()
    try:
        hat, s, wit = select_generators(cfg, inst)
    except (NoneFound, NotJ2Isometry) as e:
        stages["bent"] = [CheckResult("bending.generators", "fail", {"error": type(e).__name__}, None, str(e))]
        return

    enter("centralizer")
    try:
        stages["centralizer"] = [bending.certify_centralizer(c, J1L, wit)]
    except GpsThinError as e:
        stages["centralizer"] = [CheckResult("bending.centralizer", "fail", {"error": type(e).__name__}, None, str(e))]

    enter("bent")
    inputs = _check_inputs(hat, s, J1L)
    try:
        bent = bending.assemble_bent_generators(hat, s, c, setup)
        stages["bent"] = inputs + bent.checks
    except MemberNotUnitary as e:
        stages["bent"] = inputs + [CheckResult("bending.bent_generators_in_SU", "fail", e.witness, None, str(e))]
        return
    stages["generators"] = {"hat": hat, "s": s, "c": c}

    unbent = hat + [s]
    enter("trace")
    stages["trace"] = [trace_integrality_sample(unbent, wl).to_check()]
    enter("adjoint")
    stages["adjoint"] = [adjoint_trace_field_report(unbent, adjoint_basis(J1L), wl).to_check()]
    enter("density")
    ev = density_evidence(bent.bent, max(wl, 1))
    stages["density"] = ev.checks() + [_unbent_form_check(unbent, J1L.gram)]
    stages["density_evidence"] = ev


def _exit(report: CertificateReport, code: int) -> int:
    if code != EXIT_OK:
        return code
    return EXIT_OK if report.ok else EXIT_CERTIFY
