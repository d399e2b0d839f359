"""Command-line front end.

Exit codes are uniform: 0 for success / property-true, 1 for
property-false, 2 for invalid input.  All machine output is
deterministic JSON with no floating point; --text renders small
human-readable summaries instead.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import jsonio
from .errors import FieldError, NotSplitError, ShapeError
from .fields import GF, QQ
from .generators import (
    MODE_QFORM,
    MODE_RANDOM,
    ScanConfig,
    Sl2Spec,
    qform_instance,
    scan,
    sl2_module,
)
from .jsonio import DocumentError
from .pipeline import analyze_pair
from .raiselower import rewrite_word
from .recurrence import NON_UNIQUE, classify_sequence, fit_closed_form
from .tdcore import verify_td_pair


def max_dimension() -> int:
    return int(os.environ.get("TDPAIR_MAX_DIM", "64"))


def thread_count() -> int:
    return max(1, int(os.environ.get("TDPAIR_THREADS", "1")))


def _load_matrix(path: str):
    import json

    try:
        with open(path) as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise DocumentError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc})") from exc
    m = jsonio.parse_matrix_document(doc)
    cap = max_dimension()
    if m.n_rows > cap or m.n_cols > cap:
        raise DocumentError(f"{path}: matrix exceeds TDPAIR_MAX_DIM ({cap})")
    return m


def _load_pair(path_a: str, path_astar: str):
    a = _load_matrix(path_a)
    a_star = _load_matrix(path_astar)
    if a.field != a_star.field:
        raise DocumentError("the two matrices declare different fields")
    if not a.is_square or not a_star.is_square or a.n_rows != a_star.n_rows:
        raise DocumentError("the two matrices must be square and equally sized")
    return a, a_star


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w") as handle:
            handle.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_field_flag(token: str):
    if token in ("rational", "q", "Q"):
        return QQ
    if token.startswith("gfp:"):
        return GF(int(token.split(":", 1)[1]))
    raise DocumentError(f"unknown field {token!r} (use 'rational' or 'gfp:P')")


def _parse_sequence(text: str, field):
    tokens = [t.strip() for t in text.split(",") if t.strip()]
    if not tokens:
        raise DocumentError("empty sequence")
    out = []
    for tok in tokens:
        try:
            out.append(field.parse(tok))
        except FieldError as exc:
            raise DocumentError(str(exc)) from exc
    return out


def cmd_verify(args) -> int:
    a, a_star = _load_pair(args.a, args.a_star)
    verify_report = verify_td_pair(a, a_star)
    report = jsonio.verification_to_json(verify_report, a.field)
    if args.text:
        if verify_report.is_td_pair:
            phi = verify_report.orderings[0]
            _emit(
                f"TD pair: yes (diameter {phi.d}, {len(verify_report.orderings)} orderings, "
                f"certificate {verify_report.irreducibility_certificate})",
                args.output,
            )
        else:
            reason = verify_report.failure_reason
            suffix = f" [{reason.operator}]" if reason.operator else ""
            _emit(f"TD pair: no ({reason.kind}{suffix})", args.output)
    else:
        _emit(jsonio.dumps_document(report), args.output)
    return 0 if verify_report.is_td_pair else 1


def _analysis_text(report, analyses) -> str:
    lines = []
    verification = report
    if not verification.is_td_pair:
        reason = verification.failure_reason
        lines.append(f"TD pair: no ({reason.kind})")
        return "\n".join(lines)
    lines.append(f"TD pair: yes, orderings: {len(analyses)}")
    for k, oa in enumerate(analyses):
        field = oa.system.field
        lines.append(f"ordering {k}:")
        lines.append("  eigenvalues:      " + ", ".join(field.format(t) for t in oa.system.theta))
        lines.append("  dual eigenvalues: " + ", ".join(field.format(t) for t in oa.system.theta_star))
        lines.append("  shape:            " + ", ".join(str(r) for r in oa.split.shape))
        p = oa.params
        lines.append(
            "  parameters:       beta={} gamma={} gamma*={} varrho={} varrho*={} unique={}".format(
                field.format(p.beta),
                field.format(p.gamma),
                field.format(p.gamma_star),
                field.format(p.varrho),
                field.format(p.varrho_star),
                p.unique,
            )
        )
        lines.append("  specialization:   " + oa.relation_report.specialization.kind)
        conj = oa.conjectures
        fact = "none" if conj.factorization is None else ",".join(map(str, conj.factorization))
        lines.append(
            f"  conjectures:      bound={conj.rho_bound_holds} spanning={conj.spanning_holds} factorization={fact}"
        )
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    a, a_star = _load_pair(args.a, args.a_star)
    report, analyses = analyze_pair(a, a_star, ordering=args.ordering, check_lattice=True)
    if args.text:
        _emit(_analysis_text(report, analyses), args.output)
    else:
        _emit(jsonio.dumps_document(jsonio.analysis_document(a, a_star, report, analyses)), args.output)
    return 0 if report.is_td_pair else 1


def _write_pair(a, a_star, args) -> int:
    doc_a = jsonio.serialize_matrix_document(a)
    doc_astar = jsonio.serialize_matrix_document(a_star)
    if args.out_a or args.out_astar:
        if not (args.out_a and args.out_astar):
            raise DocumentError("--out-a and --out-astar must be given together")
        with open(args.out_a, "w") as handle:
            handle.write(jsonio.dumps_document(doc_a) + "\n")
        with open(args.out_astar, "w") as handle:
            handle.write(jsonio.dumps_document(doc_astar) + "\n")
    else:
        _emit(jsonio.dumps_document({"a": doc_a, "a_star": doc_astar}), args.output)
    return 0


def cmd_generate_sl2(args) -> int:
    try:
        coeffs = tuple(Fraction(tok) for tok in args.coeffs.split(","))
        scale = Fraction(args.scale)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad coefficients: {exc}") from exc
    if len(coeffs) != 3:
        raise DocumentError("--coeffs needs exactly three comma-separated values")
    if args.d + 1 > max_dimension():
        raise DocumentError(f"module dimension exceeds TDPAIR_MAX_DIM ({max_dimension()})")
    spec = Sl2Spec(d=args.d, a_scale=scale, astar_coeffs=coeffs)
    try:
        a, a_star = sl2_module(spec)
    except (ValueError, NotSplitError) as exc:
        raise DocumentError(str(exc)) from exc
    return _write_pair(a, a_star, args)


def cmd_generate_qform(args) -> int:
    if args.d + 1 > max_dimension():
        raise DocumentError(f"module dimension exceeds TDPAIR_MAX_DIM ({max_dimension()})")
    field = GF(args.p)
    try:
        a, a_star = qform_instance(
            args.p,
            args.d,
            field.from_int(args.q),
            field.from_int(args.a),
            field.from_int(args.b),
            field.from_int(args.astar),
            field.from_int(args.cstar),
        )
    except (ValueError, FieldError) as exc:
        raise DocumentError(str(exc)) from exc
    return _write_pair(a, a_star, args)


def cmd_recurrence(args) -> int:
    field = _parse_field_flag(args.field)
    seq = _parse_sequence(args.seq, field)
    rc = classify_sequence(seq, field)
    fit_doc = None
    fit_note = None
    if rc.beta is not NON_UNIQUE and rc.beta is not None:
        try:
            fit = fit_closed_form(seq, rc.beta, field)
            fit_doc = jsonio.closed_form_fit_to_json(fit)
        except FieldError as exc:
            fit_note = str(exc)
    else:
        fit_note = "beta is not uniquely determined; no canonical closed form"
    doc = {
        "classification": jsonio.recurrence_class_to_json(rc, field),
        "closed_form": fit_doc,
    }
    if fit_note:
        doc["closed_form_note"] = fit_note
    if args.text:
        lines = [
            f"recurrent: {rc.is_recurrent}",
            f"beta:   {jsonio.render_scalar(field, rc.beta) if rc.beta not in (None, NON_UNIQUE) else rc.beta!r}",
            f"gamma:  {jsonio.render_scalar(field, rc.gamma) if rc.gamma not in (None, NON_UNIQUE) else rc.gamma!r}",
            f"varrho: {jsonio.render_scalar(field, rc.varrho) if rc.varrho not in (None, NON_UNIQUE) else rc.varrho!r}",
        ]
        if fit_doc:
            lines.append(f"closed form: {fit_doc['case']}")
        _emit("\n".join(lines), args.output)
    else:
        _emit(jsonio.dumps_document(doc), args.output)
    return 0 if rc.is_recurrent else 1


def cmd_rewrite(args) -> int:
    tokens = [t.strip() for t in args.word.split(",") if t.strip()]
    if any(t not in ("A", "A*") for t in tokens):
        raise DocumentError("word tokens must be 'A' or 'A*'")
    if not (0 <= args.r <= args.d and 0 <= args.s <= args.d):
        raise DocumentError("projection indices must lie in [0, d]")
    theta = theta_star = field = None
    if args.theta or args.theta_star:
        if not (args.theta and args.theta_star):
            raise DocumentError("--theta and --theta-star must be given together")
        field = _parse_field_flag(args.field)
        theta = _parse_sequence(args.theta, field)
        theta_star = _parse_sequence(args.theta_star, field)
        if len(theta) != args.d + 1 or len(theta_star) != args.d + 1:
            raise DocumentError("eigenvalue sequences must have length d + 1")
    try:
        expr = rewrite_word(tokens, args.r, args.s, args.d, theta=theta, theta_star=theta_star, field=field)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    if args.text:
        _emit(expr.render_text(), args.output)
    else:
        _emit(jsonio.dumps_document(expr.to_json()), args.output)
    return 0


def cmd_scan(args) -> int:
    mode = MODE_QFORM if args.qform is not None else MODE_RANDOM
    config = ScanConfig(p=args.p, n=args.n, trials=args.trials, seed=args.seed, mode=mode, q=args.qform)
    try:
        config.validate()
    except (ValueError, FieldError) as exc:
        raise DocumentError(str(exc)) from exc
    if args.n > max_dimension():
        raise DocumentError(f"matrix size exceeds TDPAIR_MAX_DIM ({max_dimension()})")
    result = scan(config, threads=thread_count())
    if args.text:
        lines = []
        for record in result.records:
            first = record["analysis"]["orderings"][0]
            shape_str = ",".join(str(r) for r in first["shape"])
            kind = first["relations"]["specialization"]["kind"]
            lines.append(f"trial {record['trial']}: shape=({shape_str}) specialization={kind}")
        s = result.summary
        lines.append(
            f"accepted {s['accepted']} of {s['candidates']} candidates "
            f"(diagonalizable {s['diagonalizable']}, path-ordered {s['path_ordered']}, "
            f"irreducible {s['irreducible']}, inconclusive {s['inconclusive']})"
        )
        _emit("\n".join(lines), args.output)
    else:
        lines = [jsonio.dumps_record(record) for record in result.records]
        lines.append(jsonio.dumps_record({"summary": result.summary}))
        _emit("\n".join(lines), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdpair",
        description="Exact verification and analysis of tridiagonal pairs of linear transformations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--output", help="write output to this path instead of stdout")
        group = p.add_mutually_exclusive_group()
        group.add_argument("--json", dest="text", action="store_false", default=False,
                           help="machine-readable JSON (default)")
        group.add_argument("--text", dest="text", action="store_true", help="human-readable text")

    p = sub.add_parser("verify", help="verify that two matrices form a TD pair")
    p.add_argument("a", help="path to the first matrix document")
    p.add_argument("a_star", help="path to the second matrix document")
    add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="full analysis of a verified pair")
    p.add_argument("a")
    p.add_argument("a_star")
    p.add_argument("--ordering", type=int, default=None, help="analyze only this ordering index")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    gen = sub.add_parser("generate", help="generate instance files")
    gen_sub = gen.add_subparsers(dest="generator", required=True)

    p = gen_sub.add_parser("sl2", help="weight-module family instance")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--coeffs", default="1,1,0", help="c_e,c_f,c_h (default 1,1,0)")
    p.add_argument("--scale", default="1")
    p.add_argument("--out-a", dest="out_a")
    p.add_argument("--out-astar", dest="out_astar")
    add_common(p)
    p.set_defaults(func=cmd_generate_sl2)

    p = gen_sub.add_parser("qform", help="geometric-eigenvalue candidate over GF(p)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--astar", type=int, default=0)
    p.add_argument("--cstar", type=int, default=1)
    p.add_argument("--out-a", dest="out_a")
    p.add_argument("--out-astar", dest="out_astar")
    add_common(p)
    p.set_defaults(func=cmd_generate_qform)

    p = sub.add_parser("recurrence", help="classify a scalar sequence")
    p.add_argument("--seq", required=True, help='comma-separated values, e.g. "1,2,4,8"')
    p.add_argument("--field", default="rational", help="rational (default) or gfp:P")
    add_common(p)
    p.set_defaults(func=cmd_recurrence)

    p = sub.add_parser("rewrite", help="expand a projected word in the raising/lowering maps")
    p.add_argument("--word", required=True, help='comma-separated tokens from {A, A*}')
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--theta", help="optional concrete eigenvalue sequence")
    p.add_argument("--theta-star", dest="theta_star", help="optional dual sequence")
    p.add_argument("--field", default="rational")
    add_common(p)
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("scan", help="deterministic random search over GF(p)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--qform", type=int, default=None, help="geometric mode with this q")
    add_common(p)
    p.set_defaults(func=cmd_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (DocumentError, FieldError, ShapeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
