"""Command-line front end.

Exit codes: ``certify`` 0 certified / 2 refuted / 3 undecided; ``solve``
0 solved / 2 obstructed / 3 budget exhausted; ``verify-witness`` 0 when
every witness replays, 2 otherwise; 1 is always an input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .certify import max_principle_analyze, surjectivity_certificate
from .exceptions import MagsurjError, NonScalarProblem
from .fields import VectorField
from .gallery import (
    HEX_A,
    HEXAGRAM_VERTICES,
    hexagram,
    hexagram_eigenfunction,
    infinite_star,
    star_image_defect,
)
from .graph import ball, degree, sort_vertices
from .reports import (
    make_report,
    maxp_witness_doc,
    solve_payload,
    verdict_payload,
    verify_report,
)
from .schroedinger import apply_supported, scalar_laplacian
from .serialize import (
    decode_key,
    encode_field,
    encode_token,
    load_problem,
    load_problem_file,
)
from .solve import SolveRequest, windowed_solve

EXIT_INPUT = 1
DEMOS = ("finite-component", "infinite-star", "hexagram")


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _default_center(problem, fallback_field: VectorField | None = None):
    if fallback_field is not None and fallback_field.support:
        return fallback_field.support[0]
    if problem.graph.is_finite:
        return problem.graph.vertices[0]
    for guess in (0, (0, 0), (), "a1"):
        if problem.graph.contains(guess):
            return guess
    raise MagsurjError("cannot pick a default center; pass --center")


def _center(problem, text, field=None):
    if text is None:
        return _default_center(problem, field)
    x = decode_key(text)
    problem.graph.check_vertex(x)
    return x


def _emit(report: dict, args, text_lines: list[str]) -> None:
    body = json.dumps(report, sort_keys=True, indent=2)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(body + "\n")
    if getattr(args, "json", False):
        print(body)
    else:
        print("\n".join(text_lines))


def _fmt_field(f: VectorField, digits: int = 6) -> str:
    parts = []
    for x, v in f.items():
        vals = ", ".join(f"{z.real:.{digits}g}" if abs(z.imag) < 1e-15 else f"{z:.{digits}g}" for z in v)
        parts.append(f"{x!r}: {vals}")
    return "{" + "; ".join(parts) + "}"


def cmd_certify(args) -> int:
    t0 = time.perf_counter()
    problem = load_problem_file(args.problem)
    center = _center(problem, args.center)
    verdict = surjectivity_certificate(problem.operator(), center, args.form_radius,
                                       args.component_budget, args.kernel_radius)
    payload, witnesses = verdict_payload(verdict)
    cli_args = {"center": encode_token(center), "form_radius": args.form_radius,
                "component_budget": args.component_budget, "kernel_radius": args.kernel_radius}
    report = make_report("certify", cli_args, problem.doc, verdict.status, payload, witnesses,
                         time.perf_counter() - t0)
    lines = [f"verdict: {verdict.status.upper()}", f"graph: {problem.graph.description}"]
    ev = verdict.evidence
    if "components" in ev:
        lines.append(f"components: {ev['components'].get('status')}")
    if "form_condition" in ev:
        fc = ev["form_condition"]
        for name in ("q_w_min", "q_neg_w_max_2deg"):
            if name in fc:
                lines.append(f"{name}: {fc[name]['status']} ({fc[name]['tier']})")
    if verdict.witness is not None:
        lines.append(f"kernel witness: {_fmt_field(verdict.witness.field)}")
        lines.append(f"|M psi| = {verdict.witness.residual:.3e}")
    _emit(report, args, lines)
    return {"certified": 0, "refuted": 2, "undecided": 3}[verdict.status]


def cmd_solve(args) -> int:
    t0 = time.perf_counter()
    problem = load_problem_file(args.problem)
    if args.rhs not in problem.fields:
        raise MagsurjError(f"no field named {args.rhs!r} in the problem file")
    rhs = problem.fields[args.rhs]
    center = _center(problem, args.center, rhs)
    window = sort_vertices(ball(problem.graph, center, args.window_radius))
    req = SolveRequest(problem.operator(), rhs, tuple(window), args.max_radius, args.tol,
                       args.kernel_radius)
    outcome = windowed_solve(req)
    payload, witnesses = solve_payload(outcome, rhs, window, args.tol)
    cli_args = {"rhs": args.rhs, "center": encode_token(center), "window_radius": args.window_radius,
                "max_radius": args.max_radius, "tol": args.tol, "kernel_radius": args.kernel_radius}
    report = make_report("solve", cli_args, problem.doc, outcome.status, payload, witnesses,
                         time.perf_counter() - t0)
    lines = [f"outcome: {outcome.status.upper()}", f"window: {len(window)} vertices around {center!r}"]
    if outcome.status == "solved":
        lines += [f"radius used: {outcome.radius_used}", f"residual: {outcome.residual:.3e}",
                  f"g = {_fmt_field(outcome.solution)}"]
    elif outcome.status == "obstructed":
        lines += [f"kernel witness: {_fmt_field(outcome.kernel_witness)}",
                  f"(psi, f) = {outcome.pairing_value:.6g}"]
    else:
        lines.append(f"best residual: {outcome.best_residual:.3e}")
    _emit(report, args, lines)
    return {"solved": 0, "obstructed": 2, "exhausted": 3}[outcome.status]


def cmd_maxprinciple(args) -> int:
    t0 = time.perf_counter()
    problem = load_problem_file(args.problem)
    if not problem.is_scalar:
        raise NonScalarProblem("the maximum principle audit needs a scalar problem")
    pot = problem.scalar_potential()
    if args.vertices:
        verts = [decode_key(v) for v in args.vertices]
        for x in verts:
            problem.graph.check_vertex(x)
    else:
        verts = ball(problem.graph, _center(problem, args.center), args.radius)
    rows, witnesses, lines = [], [], ["vertex  V(x)  deg(x)  result  beta"]
    for x in sort_vertices(verts):
        res = max_principle_analyze(problem.graph, pot, x)
        row = {"vertex": encode_token(x), "holds": res.holds, "potential": pot(x),
               "degree": degree(problem.graph, x)}
        if not res.holds:
            row.update(beta=res.beta, witness=encode_field(res.witness))
            witnesses.append(maxp_witness_doc(res))
        rows.append(row)
        lines.append(f"{x!r}  {pot(x):.6g}  {row['degree']:.6g}  "
                     f"{'Holds' if res.holds else 'Fails'}  {'' if res.holds else f'{res.beta:.6g}'}")
    status = "holds" if all(r["holds"] for r in rows) else "fails"
    report = make_report("maxprinciple", {"vertices": [encode_token(v) for v in sort_vertices(verts)]},
                         problem.doc, status, {"table": rows}, witnesses, time.perf_counter() - t0)
    _emit(report, args, lines)
    return 0


def cmd_verify_witness(args) -> int:
    report = _read_json(args.report)
    try:
        results = verify_report(report)
    except MagsurjError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for kind, ok, msg in results:
        print(f"{'PASS' if ok else 'FAIL'} {kind}: {msg}")
    return 0 if all(ok for _, ok, _ in results) else 2


def _demo_finite_component():
    doc = {"format": 1, "graph": {"generator": "cycle", "params": {"n": 6}},
           "fields": {"delta0": {"0": [[1.0, 0.0]]}}}
    problem = load_problem(doc)
    m = problem.operator()
    verdict = surjectivity_certificate(m, 0)
    out = windowed_solve(SolveRequest(m, problem.fields["delta0"], problem.graph.vertices))
    payload, witnesses = verdict_payload(verdict)
    spay, swit = solve_payload(out, problem.fields["delta0"], problem.graph.vertices, 1e-10)
    lines = [
        "Finite component: the Laplacian of the cycle C_6.",
        f"certificate: {verdict.status.upper()} with witness {_fmt_field(verdict.witness.field)}",
        f"solve L g = delta_0: {out.status.upper()}, (psi, delta_0) = {out.pairing_value.real:.6g}",
        "Constant functions are finitely supported eigenfunctions for 0, so L is not surjective.",
    ]
    return doc, verdict.status, {"certify": payload, "solve": spay}, witnesses + swit, lines


def _demo_infinite_star():
    lines = ["Infinite star with b_n = 2^-n, finite truncations.",
             "  N  rhs                 f(0)+sum f(n)  outcome"]
    payload = []
    for n in (5, 10, 20):
        star = infinite_star(n)
        m = scalar_laplacian(star)
        for label, f in (("delta_0", VectorField.delta(0)),
                         ("-delta_0 + delta_1", VectorField.from_scalars({0: -1.0, 1: 1.0}))):
            d = star_image_defect(f, n)
            out = windowed_solve(SolveRequest(m, f, star.vertices))
            extra = ""
            if out.status == "solved":
                g = out.solution
                extra = f", g(1) - g(0) = {(g.scalar(1) - g.scalar(0)).real:.6g}"
            lines.append(f"{n:3d}  {label:18s}  {d.real:13.6g}  {out.status}{extra}")
            payload.append({"N": n, "rhs": label, "defect": d.real, "outcome": out.status})
    lines.append("L g = f is solvable exactly when f(0) = -sum_n f(n).")
    doc = {"format": 1, "graph": {"generator": "infinite_star", "params": {"N": 20}}}
    return doc, "ok", {"table": payload}, [], lines


def _demo_hexagram():
    phi = hexagram_eigenfunction()
    lines = ["Hexagram with phi(a_i) = (-1)^i, phi(b_i) = 0."]
    hexa = hexagram()
    err = (apply_supported(scalar_laplacian(hexa), phi) - 6 * phi).max_norm()
    lines.append(f"hexagram:        |L phi - 6 phi|_inf = {err:.3e}")
    doc = {"format": 1, "graph": {"generator": "hexagram_glued_ray"}, "potential": {"default": -6.0}}
    problem = load_problem(doc)
    glued = problem.graph
    err2 = (apply_supported(scalar_laplacian(glued), phi) - 6 * phi).max_norm()
    lines.append(f"glued to a ray:  |L psi - 6 psi|_inf = {err2:.3e}")
    verdict = surjectivity_certificate(problem.operator(), HEX_A[0])
    lines.append(f"certificate for L - 6: {verdict.status.upper()}")
    if verdict.witness is not None:
        lines.append(f"kernel witness: {_fmt_field(verdict.witness.field.restrict(HEXAGRAM_VERTICES))}")
    lines.append("A finitely supported eigenfunction makes L - 6 non-surjective "
                 "although the graph is locally finite with infinite components.")
    payload, witnesses = verdict_payload(verdict)
    payload["eigen_relation_error"] = {"hexagram": err, "hexagram_glued_ray": err2}
    return doc, verdict.status, payload, witnesses, lines


def cmd_demo(args) -> int:
    t0 = time.perf_counter()
    builder = {"finite-component": _demo_finite_component, "infinite-star": _demo_infinite_star,
               "hexagram": _demo_hexagram}[args.name]
    doc, status, payload, witnesses, lines = builder()
    report = make_report("demo", {"name": args.name}, doc, status, payload, witnesses,
                         time.perf_counter() - t0)
    _emit(report, args, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="magsurj", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"magsurj {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def outputs(p):
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="print the JSON report")
        fmt.add_argument("--text", action="store_true", help="print a text summary (default)")
        p.add_argument("--out", help="also write the JSON report to this file")

    p = sub.add_parser("certify", help="certify or refute surjectivity")
    p.add_argument("problem")
    p.add_argument("--center")
    p.add_argument("--form-radius", type=int, default=4)
    p.add_argument("--component-budget", type=int, default=1000)
    p.add_argument("--kernel-radius", type=int, default=3)
    outputs(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("solve", help="solve M g = f on a window")
    p.add_argument("problem")
    p.add_argument("--rhs", required=True, help="name of a field in the problem file")
    p.add_argument("--center")
    p.add_argument("--window-radius", type=int, default=3)
    p.add_argument("--max-radius", type=int, default=64)
    p.add_argument("--kernel-radius", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    outputs(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("maxprinciple", help="audit the pointwise maximum principle")
    p.add_argument("problem")
    sel = p.add_mutually_exclusive_group()
    sel.add_argument("--vertices", nargs="+")
    sel.add_argument("--radius", type=int, default=2)
    p.add_argument("--center")
    outputs(p)
    p.set_defaults(func=cmd_maxprinciple)

    p = sub.add_parser("verify-witness", help="replay the witnesses of a JSON report")
    p.add_argument("report")
    p.set_defaults(func=cmd_verify_witness)

    p = sub.add_parser("demo", help="run one of the worked examples")
    p.add_argument("name", choices=DEMOS)
    outputs(p)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MagsurjError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
