"""Full analysis of one operator pair: verification, split
decomposition, raising/lowering structure, parameters, relations,
specialization, and the conjecture suite, with the cross-checks that
tie the layers together.

Conjecture failures are never dropped: each failing instance is
persisted with full reproduction data under TDPAIR_FINDINGS_DIR
(default ./findings).
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass

from .conjectures import ConjectureReport, run_conjectures
from .errors import ConsistencyError
from .linalg import Matrix
from .raiselower import (
    RaiseLowerData,
    build_rl,
    check_cubic_vanishing,
    check_quantum_serre_rl,
    rank_profile,
)
from .recurrence import ParameterSet, fit_geometric_pair, satisfies_level_four
from .relations import RelationReport, solve_parameters_and_verify
from .split import SplitData, build_split, vij_lattice
from .tdcore import TDSystem, verify_td_pair


@dataclass(frozen=True)
class OrderingAnalysis:
    system: TDSystem
    split: SplitData
    rl: RaiseLowerData
    params: ParameterSet
    relation_report: RelationReport
    rank_profile: dict
    cubic_ok: bool
    qserre_q: object | None
    qserre_ok: bool | None
    conjectures: ConjectureReport


def findings_directory() -> str:
    return os.environ.get("TDPAIR_FINDINGS_DIR", "findings")


def _persist_finding(a: Matrix, a_star: Matrix, oa: OrderingAnalysis):
    from . import jsonio

    doc = {
        "a": jsonio.serialize_matrix_document(a),
        "a_star": jsonio.serialize_matrix_document(a_star),
        "analysis": jsonio.ordering_analysis_to_json(oa),
    }
    payload = jsonio.dumps_document(doc)
    digest = hashlib.sha256(payload.encode()).hexdigest()[:16]
    directory = findings_directory()
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"finding_{digest}.json")
    with open(path, "w") as handle:
        handle.write(payload)
    return path


def analyze_system(phi: TDSystem, *, rng_seed: int = 0, check_lattice: bool = False) -> OrderingAnalysis:
    """Everything downstream of verification for one ordering choice."""
    field = phi.field
    sp = build_split(phi)
    if check_lattice:
        vij_lattice(phi)
    rl = build_rl(sp)
    profile = rank_profile(rl)
    relation_report = solve_parameters_and_verify(phi)
    params = relation_report.params

    # The relation for A holds with these parameters iff the eigenvalue
    # sequence satisfies the quadratic recurrence with them; both sides
    # were just computed independently, so tie them together.
    if not satisfies_level_four(list(phi.theta), params.beta, params.gamma, params.varrho, field):
        raise ConsistencyError("eigenvalue sequence fails the recurrence its relation satisfies")
    if not satisfies_level_four(
        list(phi.theta_star), params.beta, params.gamma_star, params.varrho_star, field
    ):
        raise ConsistencyError("dual sequence fails the recurrence its relation satisfies")

    cubic_ok = check_cubic_vanishing(rl, params.beta)
    if not cubic_ok:
        raise ConsistencyError("mixed cubic identity fails on a verified system")

    qserre_q = fit_geometric_pair(list(phi.theta), list(phi.theta_star), field)
    qserre_ok = None
    if qserre_q is not None:
        qserre_ok = check_quantum_serre_rl(rl, qserre_q)
        if not qserre_ok:
            raise ConsistencyError("quantum Serre identity fails on a geometric instance")

    conj = run_conjectures(phi, sp, rl, rng_seed=rng_seed)
    return OrderingAnalysis(
        system=phi,
        split=sp,
        rl=rl,
        params=params,
        relation_report=relation_report,
        rank_profile=profile,
        cubic_ok=cubic_ok,
        qserre_q=qserre_q,
        qserre_ok=qserre_ok,
        conjectures=conj,
    )


def analyze_pair(a: Matrix, a_star: Matrix, *, seed: int = 0, ordering: int | None = None,
                 check_lattice: bool = False, persist_findings: bool = True):
    """Verify and, on success, analyze all orderings (or one selected by
    index).  Returns (VerificationReport, tuple of OrderingAnalysis)."""
    report = verify_td_pair(a, a_star, seed=seed)
    if not report.is_td_pair:
        return report, ()
    systems = report.orderings
    if ordering is not None:
        if not 0 <= ordering < len(systems):
            raise ValueError(f"ordering index {ordering} out of range (have {len(systems)})")
        systems = (systems[ordering],)
    analyses = []
    for phi in systems:
        oa = analyze_system(phi, rng_seed=seed, check_lattice=check_lattice)
        analyses.append(oa)
        conj = oa.conjectures
        failed = (
            not conj.rho_bound_holds
            or conj.spanning_holds is not True
            or conj.factorization is None
        )
        if failed and persist_findings:
            _persist_finding(a, a_star, oa)
    return report, tuple(analyses)
