"""Report documents and independent replay of the witnesses they carry."""

from __future__ import annotations

import math

from . import __version__
from .certify import SurjectivityVerdict, is_max_principle_violation
from .exceptions import MagsurjError, ProblemFormatError
from .fields import pairing
from .schroedinger import apply_supported, neg_w_max_potential, quadratic_form, w_min_potential
from .serialize import (
    decode_field,
    decode_token,
    digest,
    encode_field,
    encode_token,
    encode_vertices,
    load_problem,
)
from .solve import OBSTRUCTION_TOL, SolveOutcome, residual

KERNEL_REPLAY_TOL = 1e-9
FORM_REPLAY_TOL = 1e-10
MAXP_REPLAY_TOL = 1e-12


def _pair(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def make_report(command: str, args: dict, problem_doc: dict, status: str,
                payload: dict, witnesses: list, elapsed: float) -> dict:
    return {
        "tool": "magsurj",
        "version": __version__,
        "command": command,
        "args": args,
        "input_digest": digest(problem_doc),
        "problem": problem_doc,
        "status": status,
        "result": payload,
        "witnesses": witnesses,
        "timings": {"elapsed_s": round(elapsed, 6)},
    }


def kernel_witness_doc(field) -> dict:
    return {"kind": "kernel", "field": encode_field(field), "tolerance": KERNEL_REPLAY_TOL}


def verdict_payload(verdict: SurjectivityVerdict) -> tuple[dict, list]:
    witnesses = []
    if verdict.witness is not None:
        witnesses.append(kernel_witness_doc(verdict.witness.field))
    for name, probe in verdict.form_probes.items():
        if probe.status == "refuted":
            witnesses.append(form_witness_doc(name, probe))
    return {"verdict": verdict.status, "evidence": verdict.evidence}, witnesses


def form_witness_doc(form: str, probe) -> dict:
    return {"kind": "form", "potential": form, "field": encode_field(probe.witness),
            "value": probe.value, "tolerance": FORM_REPLAY_TOL}


def solve_payload(outcome: SolveOutcome, rhs, window, tol: float) -> tuple[dict, list]:
    payload: dict = {"outcome": outcome.status}
    witnesses = []
    if outcome.status == "solved":
        payload.update(radius_used=outcome.radius_used, residual=outcome.residual,
                       solution=encode_field(outcome.solution))
        witnesses.append({"kind": "solution", "field": encode_field(outcome.solution),
                          "rhs": encode_field(rhs), "window": encode_vertices(window),
                          "tolerance": tol})
    elif outcome.status == "obstructed":
        payload.update(pairing=_pair(outcome.pairing_value), best_residual=outcome.best_residual)
        witnesses.append({"kind": "obstruction", "field": encode_field(outcome.kernel_witness),
                          "rhs": encode_field(rhs), "pairing": _pair(outcome.pairing_value),
                          "tolerance": KERNEL_REPLAY_TOL, "pairing_tolerance": OBSTRUCTION_TOL})
    else:
        payload.update(best_residual=outcome.best_residual)
    return payload, witnesses


def maxp_witness_doc(result) -> dict:
    return {"kind": "max_principle", "vertex": encode_token(result.vertex),
            "field": encode_field(result.witness), "beta": result.beta,
            "tolerance": MAXP_REPLAY_TOL}


def _replay_one(problem, w: dict) -> tuple[bool, str]:
    m = problem.operator()
    kind = w.get("kind")
    f = decode_field(w["field"])
    tol = float(w.get("tolerance", KERNEL_REPLAY_TOL))
    if kind in ("kernel", "obstruction"):
        n = f.norm()
        r = apply_supported(m, f).norm()
        if n == 0:
            return False, "witness field is zero"
        if r > tol * n:
            return False, f"|M psi| = {r:.3e} exceeds {tol:g} * |psi| = {tol * n:.3e}"
        if kind == "kernel":
            return True, f"|M psi| = {r:.3e} <= {tol:g} * |psi|"
        rhs = decode_field(w["rhs"])
        p = abs(pairing(f, rhs))
        ptol = float(w.get("pairing_tolerance", OBSTRUCTION_TOL))
        if not p > ptol * rhs.norm():
            return False, f"|(psi, f)| = {p:.3e} does not exceed {ptol:g} * |f|"
        return True, f"|M psi| = {r:.3e}, |(psi, f)| = {p:.3e}"
    if kind == "solution":
        rhs = decode_field(w["rhs"])
        window = [decode_token(v) for v in w["window"]]
        r = residual(m, f, rhs, window)
        return r <= tol, f"window residual {r:.3e} (tolerance {tol:g})"
    if kind == "form":
        pot = {"q_w_min": w_min_potential, "q_neg_w_max_2deg": neg_w_max_potential}.get(w["potential"])
        if pot is None:
            return False, f"unknown potential {w['potential']!r}"
        q = quadratic_form(m.graph, pot(m), f)
        ok = q < 0 and math.isclose(q, float(w["value"]), abs_tol=tol)
        return ok, f"q(h) = {q:.6g} (reported {float(w['value']):.6g})"
    if kind == "max_principle":
        x = decode_token(w["vertex"])
        ok = is_max_principle_violation(m.graph, problem.scalar_potential(), x, f, tol)
        return ok, f"violation pattern at {x!r}: {'reproduced' if ok else 'not reproduced'}"
    return False, f"unknown witness kind {kind!r}"


def verify_report(report: dict) -> list[tuple[str, bool, str]]:
    """Replay every witness in ``report`` from its embedded problem."""
    if not isinstance(report, dict) or "problem" not in report:
        raise ProblemFormatError("report has no embedded problem")
    witnesses = report.get("witnesses") or []
    if not witnesses:
        raise ProblemFormatError("report carries no witness")
    if digest(report["problem"]) != report.get("input_digest"):
        return [("digest", False, "embedded problem does not match input_digest")]
    problem = load_problem(report["problem"])
    out = []
    for w in witnesses:
        try:
            ok, msg = _replay_one(problem, w)
        except (MagsurjError, KeyError, TypeError, ValueError) as exc:
            ok, msg = False, f"replay failed: {exc}"
        out.append((str(w.get("kind")), ok, msg))
    return out

