"""Command line entry point: enumeration, verification, homology and actions.

Every command writes a JSON certificate (sorted keys, exact rationals as
strings) to --out or stdout and exits 0 iff its verdict is "pass".
Element files have the form

    {"type": "ga" | "operad",
     "space": {"parity": [...], "pairing": [[...]], "diff": [[...]]},
     "minimal": [{"name": ..., "h": ..., "m": ..., "parity": ...}],
     "terms": [{"graph": <graph json>, "hbar": k, "coef": "p/q"}]}

"space" is required for g_A elements only.
"""

import argparse
import json
import sys
from fractions import Fraction

from .coeffs import SymVectorSpace, register_minimal, minimal, _MINIMAL
from .graphs import to_json, from_json, enumerate_stable_graphs
from .complexes import GA, GVec, OVec, Truncation
from .complexes.operad import describe, _skey, act_on_gA, sigma3, check_cycle
from .complexes import homology as hom
from . import cohft, givental


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialization

def _q(x):
    return str(Fraction(x))


def space_to_json(A):
    d = {"parity": list(A.parity), "pairing": [[_q(x) for x in r] for r in A.G]}
    if any(any(r) for r in A.D):
        d["diff"] = [[_q(x) for x in r] for r in A.D]
    return d


def space_from_json(d):
    return SymVectorSpace(d["parity"], [[Fraction(x) for x in r] for r in d["pairing"]],
                          [[Fraction(x) for x in r] for r in d["diff"]] if "diff" in d else None)


def _minimal_used(x):
    names = set()
    for G, h in x:
        for v in G.verts:
            if v and isinstance(v[0], int) and v[1][3]:
                names.add(v[1][3])
    return sorted(names)


def element_to_json(x, A=None):
    kind = "operad" if isinstance(x, OVec) else "ga"
    d = {"type": kind,
         "terms": [{"graph": to_json(G), "hbar": h, "coef": _q(c)}
                   for (G, h), c in sorted(x.items(), key=lambda kv: _skey(kv[0]))]}
    if A is not None:
        d["space"] = space_to_json(A)
    if kind == "ga":
        d["minimal"] = [minimal(n)._asdict() for n in _minimal_used(x)]
    return d


def element_from_json(d):
    """Returns (element, space or None)."""
    for rec in d.get("minimal", []):
        if rec["name"] not in _MINIMAL:
            register_minimal(rec["h"], rec["m"], rec.get("parity"), rec["name"])
    x = OVec() if d.get("type") == "operad" else GVec()
    for t in d["terms"]:
        x.add_raw(from_json(t["graph"]), t.get("hbar", 0), Fraction(t["coef"]))
    A = space_from_json(d["space"]) if "space" in d else None
    return x, A


def load_element(path):
    try:
        with open(path) as f:
            return element_from_json(json.load(f))
    except FileNotFoundError:
        raise CliError("no such file: %s" % path)


def support(x):
    return [describe(G, h) for G, h in sorted(x, key=_skey)]


def _window(args):
    return Truncation(args.window, args.hbar)


def _need_space(A, path):
    if A is None:
        raise CliError("%s has no \"space\" entry" % path)
    return A


# ---------------------------------------------------------------------------
# commands

def cmd_enumerate(args):
    gs = enumerate_stable_graphs(args.g, args.n, args.max_vertices, labeled=args.labeled)
    return {"operation": "enumerate", "window": {"g": args.g, "n": args.n,
                                                 "max_vertices": args.max_vertices,
                                                 "labeled": args.labeled},
            "count": len(gs), "graphs": [to_json(G) for G in gs], "verdict": "pass"}


def cmd_verify_me(args):
    x, A = load_element(args.element)
    A = _need_space(A, args.element)
    ga = GA(A, _window(args))
    res = ga.quantum_master_residual(x) if args.quantum else ga.master_residual(x)
    return {"operation": "verify-me", "quantum": args.quantum, "window": ga.window._asdict(),
            "kind": cohft.classify(x), "residual_support": support(res),
            "verdict": "pass" if not res else "fail"}


def cmd_verify_pz(args):
    A, x = cohft.pz_alpha(args.m, args.window)
    lam_name = None
    if args.minimal:
        h, m = args.minimal
        if m != args.m:
            raise CliError("the minimal class must live on (h, m) with m = --m")
        lam_name = register_minimal(h, m)
        _, lam = cohft.pz_lambda(lam_name, args.window)
        x = x + lam
    ga = GA(A, Truncation(args.window))
    res = ga.master_residual(x)
    return {"operation": "verify-pz", "m": args.m, "minimal": lam_name,
            "window": ga.window._asdict(), "residual_support": support(res),
            "verdict": "pass" if not res else "fail"}


def cmd_homology(args):
    A = None
    if args.flavor == 'givental':
        A = load_element(args.space)[1] if args.space else cohft.FrobeniusData.rank_one().A
    b1 = args.b1_max
    if args.window == 'interior-tadpole':
        b1 = 3 if b1 is None else b1
    rows = hom.homology_window(args.flavor, args.max_vertices, b1, args.hbar_max, A,
                               args.degree_max)
    if args.window == 'interior-tadpole':
        rows = [r for r in rows if r[2] == 'exact']
    table = [{"grading": list(g), "dim": d, "status": s} for g, d, s in rows]
    if args.csv:
        import csv
        with open(args.csv, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["grading", "dim", "status"])
            for g, d, s in rows:
                w.writerow([" ".join(map(str, g)), d, s])
    return {"operation": "homology", "flavor": args.flavor,
            "window": {"name": args.window, "max_vertices": args.max_vertices, "b1_max": b1,
                       "hbar_max": args.hbar_max, "degree_max": args.degree_max},
            "table": table, "classes": sum(r["dim"] for r in table if r["status"] == "exact"),
            "verdict": "pass"}


def cmd_lift(args):
    x, _ = load_element(args.cycle)
    lift, wit = hom.quantize_cycle(x)
    if lift is None:
        return {"operation": "lift", "window": "exact", "obstruction": support(wit),
                "verdict": "fail"}
    res = hom.twisted_diff(lift, 'cgra-theta')
    out = {"operation": "lift", "window": "exact", "lift": element_to_json(lift),
           "residual_support": support(res), "verdict": "pass" if not res else "fail"}
    return out


def cmd_act(args):
    lam, _ = load_element(args.element)
    alpha, A = load_element(args.mc)
    A = _need_space(A, args.mc)
    W = _window(args)
    cyc = check_cycle(lam, args.flavor, A)
    out = act_on_gA(lam, alpha, A, W, infinitesimal=args.infinitesimal)
    ga = GA(A, W)
    if args.infinitesimal:
        res = GVec()
    elif args.flavor.endswith('theta'):
        res = ga.quantum_master_residual(out)
    else:
        res = ga.master_residual(out)
    return {"operation": "act", "window": W._asdict(), "infinitesimal": args.infinitesimal,
            "cycle_check": cyc, "result": element_to_json(out, A),
            "residual_support": support(res),
            "verdict": "pass" if cyc["verdict"] == "pass" and not res else "fail"}


def cmd_gauge_eq(args):
    a, A = load_element(args.a)
    b, B = load_element(args.b)
    A = _need_space(A or B, args.a)
    ga = GA(A, _window(args))
    r = hom.gauge_equivalent(ga, a, b, quantum=args.quantum, max_vertices=args.max_vertices)
    out = {"operation": "gauge-eq", "window": ga.window._asdict(), "quantum": args.quantum,
           "verdict": "pass" if r["verdict"] == "equivalent" else "fail",
           "result": r["verdict"], "xi": element_to_json(r["xi"])}
    if r["verdict"] == "obstructed":
        out["obstruction"] = {
            "weight": r["weight"], "basis_size": r["basis_size"],
            "detected": [{"graph": describe(*d["graph"]), "target_coef": _q(d["target_coef"]),
                          "witness": _q(d["witness"])} for d in r["detected"]]}
    return out


def cmd_br(args):
    x, A = load_element(args.mc)
    A = _need_space(A, args.mc)
    W = _window(args)
    y = givental.br_via_ggrt(A, x, W) if args.via_ggrt else cohft.br(x, W)
    ga = GA(A, W)
    res = ga.quantum_master_residual(y)
    out = {"operation": "br", "via_ggrt": args.via_ggrt, "window": W._asdict(),
           "result": element_to_json(y, A), "residual_support": support(res),
           "verdict": "pass" if not res else "fail"}
    if args.via_ggrt:
        out["matches_br"] = y == cohft.br(x, W)
        if not out["matches_br"]:
            out["verdict"] = "fail"
    return out


def cmd_export(args):
    N = args.window
    if args.what == 'tqft-rank1':
        F = cohft.FrobeniusData.rank_one()
        x, A = cohft.frobenius_tqft(F, N), F.A
    elif args.what == 'tqft-z2':
        F = cohft.FrobeniusData.group_algebra_z2()
        x, A = cohft.frobenius_tqft(F, N), F.A
    elif args.what == 'pz':
        A, x = cohft.pz_alpha(args.m, N)
    elif args.what == 'sigma3':
        x, A = sigma3(), None
    elif args.what == 'givental-r':
        F = cohft.FrobeniusData.rank_one()
        A = F.A
        x = givental.givental_r(A, [(0, {(0, 0): 1})])
    else:
        raise CliError("unknown element %r" % args.what)
    return {"operation": "export", "what": args.what, "window": {"N": N},
            "element": element_to_json(x, A), "verdict": "pass"}


# ---------------------------------------------------------------------------
# parser

def _add_window(p, N=6, hbar=3):
    p.add_argument("--window", type=int, default=N, help="weight cap 2g - 2 + n")
    p.add_argument("--hbar", type=int, default=hbar, help="hbar power cap")


def build_parser():
    p = argparse.ArgumentParser(prog="modcohft", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the certificate here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)
    _sub = sub.add_parser
    sub.add_parser = lambda *a, **k: _sub(*a, parents=[common], **k)

    s = sub.add_parser("enumerate", help="stable graphs of type (g, n)")
    s.add_argument("g", type=int)
    s.add_argument("n", type=int)
    s.add_argument("--max-vertices", type=int, default=4)
    s.add_argument("--labeled", action="store_true", help="legs are numbered")
    s.set_defaults(fn=cmd_enumerate)

    s = sub.add_parser("verify-me", help="master equation residual of an element")
    s.add_argument("element")
    s.add_argument("--quantum", action="store_true")
    _add_window(s)
    s.set_defaults(fn=cmd_verify_me)

    s = sub.add_parser("verify-pz", help="master equation for the PZ element")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--window", type=int, default=6)
    s.add_argument("--minimal", type=int, nargs=2, metavar=("H", "M"),
                   help="add the deformation by a symbolic minimal class on (H, M)")
    s.set_defaults(fn=cmd_verify_pz)

    s = sub.add_parser("homology", help="window homology of a twisted complex")
    s.add_argument("--flavor", choices=["cgra-theta", "cgra-omega", "givental"], required=True)
    s.add_argument("--window", default="full", help="'full' or 'interior-tadpole'")
    s.add_argument("--max-vertices", type=int, default=4)
    s.add_argument("--b1-max", type=int, default=None)
    s.add_argument("--hbar-max", type=int, default=3)
    s.add_argument("--degree-max", type=int, default=2)
    s.add_argument("--space", help="element file whose space is used (givental flavor)")
    s.add_argument("--csv", help="also write the table as CSV")
    s.set_defaults(fn=cmd_homology)

    s = sub.add_parser("lift", help="lift a vartheta-cycle to a theta-cycle")
    s.add_argument("cycle")
    s.set_defaults(fn=cmd_lift)

    s = sub.add_parser("act", help="act by an operad cycle on an MC element")
    s.add_argument("element")
    s.add_argument("mc")
    s.add_argument("--flavor", default="tautgra-omega")
    s.add_argument("--infinitesimal", action="store_true")
    _add_window(s, 3, 0)
    s.set_defaults(fn=cmd_act)

    s = sub.add_parser("gauge-eq", help="decide gauge equivalence order by order")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--quantum", action="store_true")
    s.add_argument("--max-vertices", type=int, default=4)
    _add_window(s, 4, 3)
    s.set_defaults(fn=cmd_gauge_eq)

    s = sub.add_parser("br", help="Buryak-Rossi functor")
    s.add_argument("mc")
    s.add_argument("--via-ggrt", action="store_true")
    _add_window(s, 5, 2)
    s.set_defaults(fn=cmd_br)

    s = sub.add_parser("export", help="write a standard element as JSON")
    s.add_argument("what", choices=["tqft-rank1", "tqft-z2", "pz", "sigma3", "givental-r"])
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--window", type=int, default=4)
    s.set_defaults(fn=cmd_export)
    return p


def _emit(d, path):
    text = json.dumps(d, sort_keys=True, indent=1, default=str) + "\n"
    if path:
        with open(path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    p = build_parser()
    args = p.parse_args(argv)
    try:
        cert = args.fn(args)
    except (CliError, ValueError, ArithmeticError, KeyError) as e:
        _emit({"operation": args.command, "error": type(e).__name__, "message": str(e),
               "verdict": "error"}, args.out)
        return 2
    if args.command == "export":
        _emit(cert["element"], args.out)
        return 0
    _emit(cert, args.out)
    return 0 if cert["verdict"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
