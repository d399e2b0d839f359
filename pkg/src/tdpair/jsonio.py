"""Stable JSON interchange: matrix documents, verification and analysis
payloads, scan records.

Matrix documents carry entries as canonical strings (rationals "a" or
"a/b" in lowest terms, prime-field residues as decimals in [0, p)), and
parsing is strict so that serialize(parse(doc)) == doc bit for bit.
All output dictionaries are built in a fixed key order and contain no
floating point values.
"""

from __future__ import annotations

import json

from .errors import FieldError
from .fields import Field, QuadraticExtension, field_from_descriptor
from .linalg import Matrix


class DocumentError(ValueError):
    """Malformed input document; the message names the offending part."""


def parse_matrix_document(doc) -> Matrix:
    if not isinstance(doc, dict):
        raise DocumentError("matrix document must be an object")
    if "field" not in doc or "rows" not in doc:
        raise DocumentError("matrix document needs 'field' and 'rows'")
    try:
        field = field_from_descriptor(doc["field"])
    except FieldError as exc:
        raise DocumentError(str(exc)) from exc
    rows = doc["rows"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise DocumentError("'rows' must be a non-empty list of lists")
    width = len(rows[0])
    if width == 0:
        raise DocumentError("rows must be non-empty")
    parsed = []
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DocumentError(f"row {i}: expected {width} entries, got {len(row)}")
        out = []
        for j, token in enumerate(row):
            if not isinstance(token, str):
                raise DocumentError(f"row {i}, column {j}: entry must be a string")
            try:
                out.append(field.parse(token))
            except FieldError as exc:
                raise DocumentError(f"row {i}, column {j}: {exc}") from exc
        parsed.append(out)
    return Matrix(field, parsed)


def serialize_matrix_document(m: Matrix) -> dict:
    return {
        "field": m.field.describe(),
        "rows": [[m.field.format(v) for v in row] for row in m.rows],
    }


def render_scalar(field: Field, payload):
    """JSON value for one scalar; quadratic-extension elements become a
    coordinate object."""
    if isinstance(field, QuadraticExtension):
        base = field.base
        return {
            "a": base.format(payload[0]),
            "b": base.format(payload[1]),
            "disc": base.format(field.disc),
        }
    return field.format(payload)


def render_sequence(field: Field, values):
    return [render_scalar(field, v) for v in values]


def _maybe_scalar(field: Field, value):
    from .recurrence import NON_UNIQUE

    if value is NON_UNIQUE:
        return "non_unique"
    if value is None:
        return None
    return render_scalar(field, value)


def recurrence_class_to_json(rc, field: Field) -> dict:
    doc = {
        "is_recurrent": rc.is_recurrent,
        "beta": _maybe_scalar(field, rc.beta),
        "gamma": _maybe_scalar(field, rc.gamma),
        "varrho": _maybe_scalar(field, rc.varrho),
        "witnesses": {k: list(v) for k, v in rc.witnesses.items()},
        "consecutive_repeats": list(rc.repeats),
    }
    if rc.raw_fit is not None:
        doc["raw_fit"] = {
            "solvable": rc.raw_fit.solvable,
            "unique": rc.raw_fit.unique,
            "witness": (
                render_sequence(field, rc.raw_fit.witness)
                if rc.raw_fit.witness is not None
                else None
            ),
        }
    return doc


def closed_form_fit_to_json(fit) -> dict:
    work = fit.fit_field
    return {
        "case": fit.case,
        "q": render_scalar(work, fit.q) if fit.q is not None else None,
        "alpha1": render_scalar(work, fit.alpha1),
        "alpha2": render_scalar(work, fit.alpha2),
        "alpha3": render_scalar(work, fit.alpha3),
        "extension_used": fit.extension_used,
        "field": work.describe(),
    }


def parameter_set_to_json(params, field: Field) -> dict:
    return {
        "beta": render_scalar(field, params.beta),
        "gamma": render_scalar(field, params.gamma),
        "gamma_star": render_scalar(field, params.gamma_star),
        "varrho": render_scalar(field, params.varrho),
        "varrho_star": render_scalar(field, params.varrho_star),
        "unique": params.unique,
    }


def specialization_to_json(spec, field: Field) -> dict:
    doc = {"kind": spec.kind}
    if spec.b is not None:
        doc["b"] = render_scalar(field, spec.b)
        doc["b_star"] = render_scalar(field, spec.b_star)
    if spec.q is not None:
        doc["q"] = render_scalar(spec.q_field, spec.q)
        doc["q_field"] = spec.q_field.describe()
    return doc


def relation_report_to_json(report, field: Field) -> dict:
    return {
        "parameters": parameter_set_to_json(report.params, field),
        "relation_a_holds": report.relation_a_holds,
        "relation_a_star_holds": report.relation_a_star_holds,
        "specialization": specialization_to_json(report.specialization, field),
    }


def conjecture_report_to_json(report) -> dict:
    return {
        "rho_bound_holds": report.rho_bound_holds,
        "spanning_holds": report.spanning_holds,
        "spanning_outcomes": [[label, flag] for label, flag in report.spanning_outcomes],
        "factorization": list(report.factorization) if report.factorization is not None else None,
        "counterexample_detail": report.counterexample_detail,
    }


def verification_to_json(report, field: Field) -> dict:
    doc = {
        "is_td_pair": report.is_td_pair,
        "failure_reason": report.failure_reason.to_json() if report.failure_reason else None,
        "ordering_count": len(report.orderings),
        "orderings_found": list(report.ordering_counts),
        "irreducibility_certificate": report.irreducibility_certificate,
    }
    if report.orderings:
        phi = report.orderings[0]
        doc["diameter"] = phi.d
    return doc


def rank_profile_to_json(profile) -> list:
    out = []
    for (i, j), flags in sorted(profile.items()):
        out.append(
            {
                "i": i,
                "j": j,
                "raising": [flags["raising"].injective, flags["raising"].surjective],
                "lowering": [flags["lowering"].injective, flags["lowering"].surjective],
            }
        )
    return out


def ordering_analysis_to_json(oa) -> dict:
    field = oa.system.field
    doc = {
        "eigenvalues": render_sequence(field, oa.system.theta),
        "dual_eigenvalues": render_sequence(field, oa.system.theta_star),
        "shape": list(oa.split.shape),
        "parameters": parameter_set_to_json(oa.params, field),
        "relations": relation_report_to_json(oa.relation_report, field),
        "epsilon": render_sequence(field, oa.rl.epsilon),
        "cubic_vanishing": oa.cubic_ok,
        "quantum_serre": (
            {
                "q": render_scalar(field, oa.qserre_q),
                "holds": oa.qserre_ok,
            }
            if oa.qserre_q is not None
            else None
        ),
        "rank_profile": rank_profile_to_json(oa.rank_profile),
        "conjectures": conjecture_report_to_json(oa.conjectures),
    }
    return doc


def analysis_document(a: Matrix, a_star: Matrix, report, analyses) -> dict:
    return {
        "verification": verification_to_json(report, a.field),
        "orderings": [ordering_analysis_to_json(oa) for oa in analyses],
    }


def scan_record(trial: int, a: Matrix, a_star: Matrix, report, analyses) -> dict:
    return {
        "trial": trial,
        "a": serialize_matrix_document(a),
        "a_star": serialize_matrix_document(a_star),
        "analysis": analysis_document(a, a_star, report, analyses),
    }


def dumps_document(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=True)


def dumps_record(doc) -> str:
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=True)
