"""Command line interface.

Every command prints one JSON report on stdout.  Exit status is 0 on
success, 2 when the computation ran but the mathematical verdict is negative
(a refutation), and 1 on any error.
"""

from __future__ import annotations

import argparse
import sys
from importlib import metadata
from pathlib import Path

import numpy as np

from . import circle, constructions, invariants, orders, shilov, surface
from . import symplectic as sp
from .errors import ToledoError
from .fileio import (SCHEMA, digest, dumps, encode, load_representation,
                     representation_to_dict)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0"


def _report(command: str, inputs: list, body: dict) -> dict:
    doc = {"schema": SCHEMA, "command": command, "tool_version": _version(),
           "inputs_digest": digest(*inputs) if inputs else None}
    doc.update(body)
    return doc


def _parse_word(text: str) -> tuple:
    try:
        letters = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise UsageError(f"bad word {text!r}; use signed 1-based indices like 1,2,-1,-2") from None
    if any(x == 0 for x in letters):
        raise UsageError("generator indices are 1-based")
    return surface.word(*letters)


def _parse_moebius(text: str) -> circle.MoebiusLift:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad circle element {text!r}") from None
    if len(vals) not in (4, 5):
        raise UsageError("circle elements are a,b,c,d[,winding]")
    M = np.array(vals[:4]).reshape(2, 2)
    if abs(np.linalg.det(M) - 1) > 1e-9:
        raise UsageError("circle element must have determinant 1")
    return circle.MoebiusLift(M, int(vals[4]) if len(vals) == 5 else 0)


# -- commands ------------------------------------------------------------------

def cmd_toledo(args):
    rho = load_representation(args.rep)
    rep = invariants.toledo(rho, args.iters)
    return _report("toledo", [args.rep], rep.as_dict()), 0


def cmd_wm(args):
    rho, hyp = load_representation(args.rep), load_representation(args.hyp)
    wm = invariants.wm_defect(rho, hyp, args.seed, args.count)
    body = wm.as_dict()
    body["rows"] = wm.rows
    return _report("wm", [args.rep, args.hyp], body), 0 if wm.verdict == "WeaklyMaximal" else 2


def cmd_qcausal(args):
    rho, hyp = load_representation(args.rep), load_representation(args.hyp)
    cr = invariants.q_causal_check(rho, hyp, args.q, args.seed, args.count, args.blocks)
    body = cr.as_dict()
    body.update(seed=args.seed, error_estimate=0)
    return _report("qcausal", [args.rep, args.hyp], body), 2 if cr.refutations else 0


def cmd_dominance(args):
    rho = load_representation(args.rep)
    w = _parse_word(args.word)
    g = invariants.evaluate_word_lifted(invariants.lift_generators(rho), w)
    v = shilov.dominance_verdict(g, args.count, args.seed, args.iters)
    p = shilov.psi(g, args.iters)
    body = {"word": surface.to_signed(w), "verdict": v.verdict, "detail": v.detail,
            "psi": p.value, "error_estimate": p.error_estimate, "seed": args.seed,
            "samples": args.count, "k_iters": args.iters}
    return _report("dominance", [args.rep], body), 2 if v.verdict == "NotDominant" else 0


def cmd_growth(args):
    g, h = _parse_moebius(args.g), _parse_moebius(args.h)
    ops = orders.circle_ops()
    rep = orders.reconstruction_check(ops, g, h, args.n)
    if args.out:
        Path(args.out).write_text(orders.records_to_csv(rep.records))
    last = rep.records[-1]
    body = {"n": args.n, "e_n": last.e_n, "ratio": last.ratio, "target": last.target,
            "bracket": [last.low, last.high], "violations": len(rep.violations),
            "error_estimate": max(abs(last.low), abs(last.high)), "csv": args.out}
    return _report("growth", [], body), 0 if rep.ok else 2


def cmd_maslov(args):
    rng = np.random.default_rng(args.seed)
    n = args.n
    counts: dict[int, int] = {}
    cocycle_failures = 0
    for _ in range(args.count):
        L = [sp.random_lagrangian(n, rng) for _ in range(4)]
        k = sp.kashiwara_index(L[0], L[1], L[2])
        counts[k] = counts.get(k, 0) + 1
        c = (sp.kashiwara_index(L[1], L[2], L[3]) - sp.kashiwara_index(L[0], L[2], L[3])
             + sp.kashiwara_index(L[0], L[1], L[3]) - k)
        cocycle_failures += c != 0
    body = {"n": n, "samples": args.count, "seed": args.seed,
            "index_counts": {str(k): counts[k] for k in sorted(counts)},
            "cocycle_failures": cocycle_failures, "error_estimate": 0}
    return _report("maslov", [], body), 0 if cocycle_failures == 0 else 2


def _write_rep(rho, args, command, extra=None):
    doc = representation_to_dict(rho, {"seed": args.seed, "builder": command})
    text = dumps(doc)
    if args.out:
        Path(args.out).write_text(text)
    body = {"representation": args.out or doc, "relator_residual":
            invariants.relator_residual(rho), "error_estimate": 0}
    body.update(extra or {})
    return _report(command, [], body), 0


def _build(name):
    def run(args):
        F = constructions.fuchsian_closed_genus2()
        extra = None
        if name == "fuchsian2":
            rho = F
        elif name == "fuchsian-bounded":
            rho = constructions.fuchsian_bounded(args.genus, args.boundary)
        elif name == "polydisk":
            factors = [F] * args.n
            if args.reverse:
                factors[-1] = constructions.orientation_reverse(F)
            rho = constructions.polydisk(factors)
        elif name == "cancelling":
            rho = constructions.cancelling_triple(F, constructions.folded_torus())
        elif name == "sym3":
            rho = constructions.sym_cube(F)
        elif name == "heisenberg":
            _, rho = constructions.heisenberg_example(args.seed)
            if isinstance(rho, constructions.Obstruction):
                return _report("build-heisenberg", [], {"obstruction": rho.value,
                                                        "error_estimate": 0}), 2
        else:  # reversed
            rho = constructions.orientation_reverse(F)
        return _write_rep(rho, args, "build-" + name, extra)
    return run


def cmd_scan(args):
    """Defect along ``t -> rep + elliptic(t)``, a family through ``rep``."""
    rho, hyp = load_representation(args.rep), load_representation(args.hyp)
    base = np.linspace(0.3, 1.1, rho.presentation.rank)

    def family(t):
        ell = constructions.elliptic_rep(rho.presentation, t * base)
        return constructions.direct_sum(rho, ell)

    ts = np.linspace(0.0, 1.0, args.steps)
    rows = invariants.wm_path_scan(family, ts, hyp, args.seed, args.count)
    if args.out:
        lines = ["t,T,defect,error_estimate"]
        lines += [",".join(repr(float(r[k])) for k in ("t", "T", "defect", "error_estimate"))
                  for r in rows]
        Path(args.out).write_text("\n".join(lines) + "\n")
    body = {"rows": rows, "steps": args.steps, "seed": args.seed,
            "error_estimate": max(r["error_estimate"] for r in rows), "csv": args.out}
    return _report("scan", [args.rep, args.hyp], body), 0


BUILDERS = ["fuchsian2", "fuchsian-bounded", "polydisk", "cancelling", "sym3",
            "heisenberg", "reversed"]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toledo", description="Toledo invariants and orders on surface groups")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, *flags):
        p = sub.add_parser(name)
        p.set_defaults(func=func)
        p.add_argument("--seed", type=int, default=0)
        if "rep" in flags:
            p.add_argument("--rep", required=True)
        if "hyp" in flags:
            p.add_argument("--hyp", required=True)
        if "count" in flags:
            p.add_argument("--count", type=int, default=64)
        if "iters" in flags:
            p.add_argument("--iters", type=int, default=invariants.DEFAULT_K_ITERS)
        if "out" in flags:
            p.add_argument("--out")
        return p

    add("toledo", cmd_toledo, "rep", "iters")
    add("wm", cmd_wm, "rep", "hyp", "count")
    p = add("qcausal", cmd_qcausal, "rep", "hyp", "count")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--blocks", type=int, default=2)
    p = add("dominance", cmd_dominance, "rep", "count")
    p.add_argument("--word", required=True)
    p.add_argument("--iters", type=int, default=400)
    p = add("growth", cmd_growth, "out")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--n", type=int, default=100)
    p = add("maslov", cmd_maslov, "count")
    p.add_argument("--n", type=int, default=2)
    p = add("scan", cmd_scan, "rep", "hyp", "out")
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--count", type=int, default=16)
    for name in BUILDERS:
        p = add("build-" + name, _build(name), "out")
        if name == "fuchsian-bounded":
            p.add_argument("--genus", type=int, default=1)
            p.add_argument("--boundary", type=int, default=1)
        if name == "polydisk":
            p.add_argument("--n", type=int, default=2)
            p.add_argument("--reverse", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        doc, code = args.func(args)
    except UsageError as exc:
        sys.stderr.write(parser.format_usage() + f"error: {exc}\n")
        return 1
    except ToledoError as exc:
        sys.stderr.write(dumps({"schema": SCHEMA, "error": exc.code, "message": str(exc)}))
        return 1
    except (ValueError, NotImplementedError) as exc:
        sys.stderr.write(dumps({"schema": SCHEMA, "error": "invalid_input", "message": str(exc)}))
        return 1
    sys.stdout.write(dumps(encode(doc)))
    return code


if __name__ == "__main__":
    sys.exit(main())
