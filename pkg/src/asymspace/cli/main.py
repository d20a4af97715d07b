"""asymspace <task-file> [--format text|json] [--out PATH] [--digits N] [--seed N] [--dump DIR]

Exit codes: 0 when the property holds or the computation succeeded, 1 when
a property is violated (the report then carries a certificate), 2 for input
errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from ..bip import BIP_HOLDS, BIP_VIOLATED, PREMISE_FAILS, mixed_bip_report
from ..bip.families import MixedBallFamily
from ..extend import (
    ExtensionProblem,
    PipelineRefused,
    extend_coordinatewise,
    extend_operator,
    necessity_pipeline,
    norm_one_projection,
)
from ..geometry import (
    BACKWARD,
    FORWARD,
    Ball,
    InvalidNormError,
    PartialOperator,
    Subspace,
    UnsupportedTargetError,
    conjugate,
    embed_into_ellinfty,
    eval_norm,
    is_t1,
    operator_from_matrix,
    operator_norm,
    pair_intersection_witness,
    symmetrize,
    unit_ball_vertices,
)
from ..ratlp import INFEASIBLE, DimensionError, dot, feasible, lincomb
from .documents import DocumentError, TaskDocument, load_task, render
from .dump import UnsupportedDimensionError, dump_geometry
from .io import write_atomic

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT = 0, 1, 2


class TaskInputError(ValueError):
    """Well-formed document whose content the task cannot use."""


# ---------------------------------------------------------------- certificates
def farkas_report(rows, labels, outcome) -> dict:
    """Nonzero multipliers with their rows, re-checked: sum y row = 0 and sum y bound = -1."""
    y = outcome.certificate
    n = len(rows[0][0]) if rows else 0
    combo = lincomb([y[k] for k in range(len(rows))], [r for r, _ in rows], n) if rows else ()
    rhs = sum((y[k] * rows[k][1] for k in range(len(rows))), Fraction(0))
    terms = [
        {"row": labels[k], "functional": rows[k][0], "bound": rows[k][1], "multiplier": y[k]}
        for k in range(len(rows))
        if y[k] != 0
    ]
    ok = all(v == 0 for v in combo) and rhs < 0 and all(v >= 0 for v in y)
    return {"multipliers": terms, "combined_functional": combo, "combined_bound": rhs, "verified": ok}


def _ball_rows(balls, names):
    rows, labels = [], []
    for b, name in zip(balls, names):
        for k, (r, v) in enumerate(b.constraints()):
            rows.append((tuple(r), v))
            labels.append(f"{name} / generator {k}")
    return rows, labels


# ---------------------------------------------------------------- tasks
def _family(doc: TaskDocument, norm) -> MixedBallFamily:
    entries = []
    for e in doc.fields["family"]:
        r = e.get("r", e.get("radius"))
        s = e.get("s", e.get("radius"))
        entries.append((e["center"], r, s))
    return MixedBallFamily(norm, tuple(entries))


def _family_balls(fam: MixedBallFamily):
    balls, names = [], []
    for i, (c, r, s) in enumerate(fam.entries):
        balls.append(Ball(c, r, fam.norm, FORWARD))
        names.append(f"entry {i} forward")
        balls.append(Ball(c, s, fam.norm, BACKWARD))
        names.append(f"entry {i} backward")
    return balls, names


def task_norm_check(doc, norm, opts):
    rep = {
        "dimension": norm.dim,
        "generators": norm.generators,
        "t1": is_t1(norm),
        "symmetric": set(norm.generators) == set(conjugate(norm).generators),
        "conjugate_generators": conjugate(norm).generators,
        "symmetrized_generators": symmetrize(norm).generators,
    }
    if rep["t1"]:
        rep["unit_ball_vertices"] = unit_ball_vertices(norm)
    if "points" in doc.fields:
        rep["values"] = [{"x": x, "p(x)": eval_norm(norm, x), "p(-x)": eval_norm(conjugate(norm), x)}
                         for x in doc.fields["points"]]
    return "valid-norm", EXIT_OK, rep, None


def task_ball_intersect(doc, norm, opts):
    balls = [Ball(e["center"], e["radius"], norm, e.get("orientation", FORWARD)) for e in doc.fields["balls"]]
    names = [f"ball {i} {b.orientation}" for i, b in enumerate(balls)]
    rows, labels = _ball_rows(balls, names)
    out = feasible(norm.dim, le=rows)
    geo = (balls, names, None if out.status == INFEASIBLE else out.point)
    if out.status == INFEASIBLE:
        return "empty", EXIT_VIOLATED, {"certificate": farkas_report(rows, labels, out)}, geo
    return "nonempty", EXIT_OK, {"point": out.point}, geo


def _pair_witnesses(fam: MixedBallFamily):
    """For i < j, points of B_q[x_i, r_i] and B_qbar[x_j, s_j], and with i and j exchanged."""
    out = []
    ents = fam.entries
    for i in range(len(ents)):
        for j in range(i + 1, len(ents)):
            (xi, ri, si), (xj, rj, sj) = ents[i], ents[j]
            out.append({
                "pair": [i, j],
                "forward_i_backward_j": pair_intersection_witness(xi, ri, xj, sj, fam.norm),
                "forward_j_backward_i": pair_intersection_witness(xj, rj, xi, si, fam.norm),
            })
    return out


def task_bip_check(doc, norm, opts):
    fam = _family(doc, norm)
    verdict = mixed_bip_report(fam)
    balls, names = _family_balls(fam)
    rep: dict = {"entries": len(fam.entries)}
    if verdict.kind == PREMISE_FAILS:
        rep["failing_pairs"] = [
            {"forward": i, "backward": j, "q(x_j - x_i)": eval_norm(norm, tuple(b - a for a, b in zip(fam.entries[i][0], fam.entries[j][0]))),
             "r_i + s_j": fam.entries[i][1] + fam.entries[j][2]}
            for i, j in verdict.failures
        ]
        return PREMISE_FAILS, EXIT_OK, rep, (balls, names, "skip")
    rep["pairwise_witnesses"] = _pair_witnesses(fam)
    if verdict.kind == BIP_VIOLATED:
        rows, labels = _ball_rows(balls, names)
        rep["certificate"] = farkas_report(rows, labels, verdict.outcome)
        return BIP_VIOLATED, EXIT_VIOLATED, rep, (balls, names, None)
    rep["common_point"] = verdict.point
    return BIP_HOLDS, EXIT_OK, rep, (balls, names, verdict.point)


def _operator(doc, source, target) -> PartialOperator:
    f = doc.fields
    if "matrix" in f:
        return operator_from_matrix(f["matrix"], source, target)
    return PartialOperator(Subspace(source.dim, f["domain"]), f["images"], source, target)


def task_op_norm(doc, norm, opts):
    target = doc.target.norm("$.target")
    T = _operator(doc, norm, target)
    value = operator_norm(T)
    if value == math.inf:
        return "unbounded", EXIT_VIOLATED, {"value": "inf", "note": "operator is not bounded"}, None
    return "bounded", EXIT_OK, {"value": value}, None


def task_extend(doc, norm, opts):
    target = doc.target.norm("$.target")
    T = _operator(doc, norm, target)
    beta = doc.fields.get("beta")
    if beta is None and operator_norm(T) == math.inf:
        raise TaskInputError("operator is unbounded on its domain; nothing to extend")
    prob = ExtensionProblem(T, beta)
    engine = doc.fields.get("engine", "lp")
    res = extend_coordinatewise(prob) if engine == "coordinatewise" else extend_operator(prob)
    rep = {"engine": engine, "beta": prob.beta}
    if res.extended:
        S = res.as_operator(prob)
        rep["matrix"] = res.matrix
        rep["operator_norm"] = operator_norm(S)
        return "extended", EXIT_OK, rep, None
    rep["certificate"] = {
        "inequality_multipliers": res.outcome.certificate,
        "equality_multipliers": res.outcome.eq_certificate,
        "bound_multipliers": res.outcome.bound_certificate,
        "verified": True,  # the solver re-verifies every infeasibility certificate
    }
    return "not-extendable", EXIT_VIOLATED, rep, None


def task_embed(doc, norm, opts):
    E = embed_into_ellinfty(norm)
    rep = {"target": f"qtilde on Q^{E.target_dim}", "matrix": E.full_matrix()}
    if "points" in doc.fields:
        checks = []
        for x in doc.fields["points"]:
            ex = E.apply(x)
            qv = max([Fraction(0)] + list(ex))
            checks.append({"x": x, "E x": ex, "qtilde(E x)": qv, "p(x)": eval_norm(norm, x), "equal": qv == eval_norm(norm, x)})
        rep["checks"] = checks
        if not all(c["equal"] for c in checks):
            return "not-isometric", EXIT_VIOLATED, rep, None
    return "isometric", EXIT_OK, rep, None


def task_project(doc, norm, opts):
    Y = Subspace(norm.dim, doc.fields["subspace"])
    res = norm_one_projection(norm, Y)
    rep = {"subspace_dimension": Y.dim}
    if res.exists:
        rep["projection"] = res.projection
        return "projection-exists", EXIT_OK, rep, None
    out = res.result.outcome
    rep["certificate"] = {
        "inequality_multipliers": out.certificate,
        "equality_multipliers": out.eq_certificate,
        "bound_multipliers": out.bound_certificate,
        "verified": True,
    }
    return "not-extendable", EXIT_VIOLATED, rep, None


def task_necessity_demo(doc, norm, opts):
    fam = _family(doc, norm)
    balls, names = _family_balls(fam)
    try:
        rep_obj = necessity_pipeline(fam, seed=opts.seed)
    except PipelineRefused as exc:
        return "refused", EXIT_OK, {"reason": str(exc), "bip_verdict": exc.verdict.kind}, (balls, names, exc.verdict.point)
    rows, labels = _ball_rows(balls, names)
    rep = {
        "bip_verdict": rep_obj.verdict.kind,
        "family_certificate": farkas_report(rows, labels, rep_obj.verdict.outcome),
        "anchors": rep_obj.anchors,
        "r1": rep_obj.r1,
        "r2": rep_obj.r2,
        "initial_tables_satisfy_a": rep_obj.int_balls_ok,
        "minimal_pair": {"rho1": rep_obj.table.rho1, "rho2": rep_obj.table.rho2, "passes": rep_obj.table.passes},
        "notes": rep_obj.notes,
    }
    if rep_obj.mu_norm is not None:
        rep["mu_generators"] = rep_obj.mu_norm.generators
        rep["restriction_isometric"] = rep_obj.restriction_isometric
        rep["rho1_at_anchors"] = rep_obj.rho1_at_anchors
        rep["rho2_at_anchors"] = rep_obj.rho2_at_anchors
        brows, blabels = [], []
        for i, (x, a, b) in enumerate(zip(rep_obj.anchors, rep_obj.rho1_at_anchors, rep_obj.rho2_at_anchors)):
            for nm, ball in ((f"anchor {i} backward", Ball(x, a, norm, BACKWARD)), (f"anchor {i} forward", Ball(x, b, norm, FORWARD))):
                for k, (r, v) in enumerate(ball.constraints()):
                    brows.append((tuple(r), v))
                    blabels.append(f"{nm} / generator {k}")
        if rep_obj.ball_system is not None and rep_obj.ball_system.status == INFEASIBLE:
            rep["image_of_xi_certificate"] = farkas_report(brows, blabels, rep_obj.ball_system)
        rep["projection"] = "not-extendable" if not rep_obj.projection.exists else render(rep_obj.projection.projection)
    status = rep_obj.status + (" (certified)" if rep_obj.certified else "")
    code = EXIT_VIOLATED if rep_obj.certified else EXIT_OK
    return status, code, rep, (balls, names, None)


TASK_RUNNERS = {
    "norm-check": task_norm_check,
    "ball-intersect": task_ball_intersect,
    "bip-check": task_bip_check,
    "op-norm": task_op_norm,
    "extend": task_extend,
    "embed": task_embed,
    "project": task_project,
    "necessity-demo": task_necessity_demo,
}


# ---------------------------------------------------------------- formatting
def _text_lines(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.extend(_text_lines(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict):
                sub = _text_lines(item, indent + 1)
                lines.append(f"{pad}- " + sub[0].strip())
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_inline(item)}")
    else:
        lines.append(f"{pad}{_inline(value)}")
    return lines


def _inline(v) -> str:
    if isinstance(v, list):
        return "(" + ", ".join(_inline(x) for x in v) + ")"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_inline(x)}" for k, x in v.items()) + "}"
    if v is None:
        return "-"
    return str(v)


def format_report(report: dict, fmt: str) -> str:
    data = render(report)
    if fmt == "json":
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    return "\n".join(_text_lines(data)) + "\n"


# ---------------------------------------------------------------- entry point
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="asymspace", description="Exact computations in polyhedral asymmetric normed spaces.")
    ap.add_argument("task_file", help="JSON task document")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--out", help="write the report here (atomically) instead of stdout")
    ap.add_argument("--digits", type=int, default=6, help="decimal places in geometry dumps")
    ap.add_argument("--seed", type=int, default=0, help="seed for sampled verification steps")
    ap.add_argument("--dump", metavar="DIR", help="write 2D unit-ball and ball-family geometry to DIR")
    return ap


def run(task_file: str, opts) -> tuple[int, dict]:
    doc = load_task(task_file)
    norm = doc.space.norm("$.space")
    status, code, body, geo = TASK_RUNNERS[doc.task](doc, norm, opts)
    report = {"task": doc.task, "status": status, "exit_code": code}
    report.update(body)
    if opts.dump:
        if geo is None:
            files = dump_geometry(opts.dump, norm, digits=opts.digits)
        else:
            balls, names, common = geo
            if common == "skip":  # premise fails: no intersection question was asked
                common = None
            files = dump_geometry(opts.dump, norm, balls, names, common, digits=opts.digits)
        report["dump"] = files
    return code, report


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    if opts.digits < 0:
        print("error: --digits must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    try:
        code, report = run(opts.task_file, opts)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvalidNormError, DimensionError, UnsupportedDimensionError, UnsupportedTargetError, TaskInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = format_report(report, opts.format)
    if opts.out:
        write_atomic(opts.out, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
