"""Command-line driver: arrtopo <command> [--catalog NAME | --input FILE] ..."""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .arrangement import classify_shape, mobius_poincare, parse_arrangement
from .boundary import boundary_invariants
from .catalog import CATALOG_NAMES, catalog_lookup
from .errors import ArrtopoError, BudgetError, InputError
from .milnor import (CyclicCoverSpec, DEFAULT_BUDGET_COLS, abelian_cover_betti, abelian_cover_monodromy,
                     base_presentation, integral_cover_homology, milnor_invariants, monodromy_charpoly)
from .multinets import enumerate_r1_components, multinet_identities, search_multinets
from .resonance import build_os2, resonance_depth

EXIT_OK, EXIT_MISMATCH, EXIT_BUDGET, EXIT_INPUT = 0, 2, 3, 4
COMMANDS = ("invariants", "milnor", "resonance", "multinets", "boundary", "covers")


def _int_list(text):
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise InputError(f"expected comma separated integers, got {text!r}") from None


def load_input(cfg):
    if cfg.catalog and cfg.input:
        raise InputError("give either --catalog or --input, not both")
    if cfg.catalog:
        A, m = catalog_lookup(cfg.catalog)
    elif cfg.input:
        try:
            text = Path(cfg.input).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {cfg.input}: {exc.strerror}") from exc
        A, m = parse_arrangement(text)
    else:
        raise InputError("no arrangement given (use --catalog NAME or --input FILE)")
    if cfg.multiplicities:
        m = _int_list(cfg.multiplicities)
    return A, m


def _field(cfg):
    if cfg.field in (None, "auto"):
        return None
    try:
        return int(cfg.field)
    except ValueError:
        raise InputError("--field takes a prime or 'auto'") from None


# ---------------------------------------------------------------------------
# commands


def cmd_invariants(cfg):
    A, m = load_input(cfg)
    L = mobius_poincare(A)
    out = {"n": A.n, "dim": A.dim, "rank": A.rank, "essential": A.essential, "real": A.is_real,
           "lattice": L.to_json(), "betti_U": L.poincare_U, "betti_M": L.poincare_M}
    if A.d == 2:
        out["shape"] = classify_shape(A)
        out["multiple_points"] = sorted(len(X.hyperplanes) for X in L.flats2 if len(X.hyperplanes) >= 3)
    if m is not None:
        out["multiplicities"] = list(m)
    return out


def cmd_milnor(cfg):
    A, m = load_input(cfg)
    p = _field(cfg)
    inv = milnor_invariants(A, m, primes=cfg.primes, budget_cols=cfg.budget_cols)
    out = inv.to_json()
    out["multiplicities"] = list(m) if m else [1] * A.n
    if p is not None:
        cp = monodromy_charpoly(A, m, cfg.q, p)
        out["field_charpoly"] = {"p": p, "q": cfg.q, "charpoly": str(cp), "factors": cp.to_json(),
                                 "degree": cp.degree()}
    out["charpoly"] = out["charpoly_q1_str"] if cfg.q == 1 else out["charpoly_q2_str"]
    out["degree_q1"] = inv.charpoly_q1.degree()
    out["degree_q2"] = inv.charpoly_q2.degree()
    out["q"] = cfg.q
    return out


def cmd_resonance(cfg):
    A, _ = load_input(cfg)
    comps = enumerate_r1_components(A, 1, m_bound=cfg.m_bound, budget_nodes=cfg.budget_nodes)
    census = {"local": sum(c.kind == "local" for c in comps),
              "multinet_essential": sum(c.kind == "multinet" and c.essential for c in comps),
              "multinet_sub": sum(c.kind == "multinet" and not c.essential for c in comps)}
    out = {"components": [c.to_json() for c in comps], "census": census,
           "dims": sorted(c.dim for c in comps)}
    if cfg.vector:
        f = _field(cfg)
        os_ = build_os2(A, "Q" if f is None else f)
        out["depth"] = {"vector": _int_list(cfg.vector), "field": "Q" if f is None else f,
                        "value": resonance_depth(os_, _int_list(cfg.vector))}
    return out


def cmd_multinets(cfg):
    A, _ = load_input(cfg)
    nets = []
    for k in (3, 4):
        for M in search_multinets(A, k, cfg.m_bound if k == 3 else 1, budget_nodes=cfg.budget_nodes):
            d = M.to_json()
            d["signature"] = M.signature()
            d["identities"] = list(multinet_identities(A, M))
            d["is_net"] = all(x == 1 for x in M.m)
            nets.append(d)
    return {"count": len(nets), "nets": sum(d["is_net"] for d in nets), "multinets": nets}


def cmd_boundary(cfg):
    A, _ = load_input(cfg)
    out = boundary_invariants(A, cfg.budget_cols, cfg.seed).to_json()
    out["bdF_charpoly"] = out["bdF"]["charpoly"] if out["bdF"] else None
    return out


def cmd_covers(cfg):
    A, m = load_input(cfg)
    if not cfg.chi:
        raise InputError("covers needs --chi")
    chi = _int_list(cfg.chi)
    moduli = _int_list(cfg.mod) if cfg.mod else [sum(chi)]
    P = base_presentation(A)
    if len(moduli) == 1:
        chi_v = [c % moduli[0] for c in chi]
    else:
        raise InputError("covers takes a single cyclic modulus")
    N = moduli[0]
    spec = CyclicCoverSpec(P, N, chi_v)
    rank, tors = integral_cover_homology(spec, cfg.budget_cols)
    table, skipped = {}, []
    for p in (2, 3, 5, 7):
        if N % p == 0:
            skipped.append(p)
            continue
        table[str(p)] = abelian_cover_betti(P, chi_v, moduli, p)
    out = {"N": N, "chi": chi_v, "integral_h1": {"rank": rank, "torsion": tors}, "betti_mod_p": table,
           "skipped_primes": skipped}
    try:
        cp = abelian_cover_monodromy(spec)
        out["charpoly"] = str(cp)
        out["charpoly_factors"] = cp.to_json()
    except ArrtopoError:
        pass
    return out


HANDLERS = {"invariants": cmd_invariants, "milnor": cmd_milnor, "resonance": cmd_resonance,
            "multinets": cmd_multinets, "boundary": cmd_boundary, "covers": cmd_covers}


# ---------------------------------------------------------------------------
# golden comparison


def golden_dir():
    return resources.files("arrtopo") / "golden"


def load_golden(name):
    path = Path(name)
    if not path.exists():
        cand = golden_dir() / (name if name.endswith(".json") else name + ".json")
        if not cand.is_file():
            raise InputError(f"no golden file {name!r}")
        return json.loads(cand.read_text())
    return json.loads(path.read_text())


def diff_expected(expected, actual, path=""):
    """List of mismatches where expected is a sub-document of actual."""
    out = []
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            return [f"{path or '/'}: expected object, got {type(actual).__name__}"]
        for k, v in sorted(expected.items()):
            if k not in actual:
                out.append(f"{path}/{k}: missing")
            else:
                out += diff_expected(v, actual[k], f"{path}/{k}")
        return out
    if expected != actual:
        out.append(f"{path or '/'}: expected {json.dumps(expected)}, got {json.dumps(actual)}")
    return out


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, default=str)


def _has_dict(v):
    if isinstance(v, dict):
        return True
    return isinstance(v, list) and any(_has_dict(x) for x in v)


def _text(obj, prefix=""):
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            nested = _has_dict(v)
            if nested and v:
                lines.append(f"{prefix}{k}:")
                lines += _text(v, prefix + "  ")
            else:
                lines.append(f"{prefix}{k}: {json.dumps(v, sort_keys=True, default=str)}")
    elif isinstance(obj, list):
        for x in obj:
            sub = _text(x, prefix + "  ")
            if sub:
                lines.append(prefix + "- " + sub[0].strip())
                lines += sub[1:]
    else:
        lines.append(prefix + str(obj))
    return lines


# ---------------------------------------------------------------------------
# parser


def build_parser():
    ap = argparse.ArgumentParser(prog="arrtopo", description="Topological invariants of line arrangements.")
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", metavar="NAME", help=f"catalog entry ({', '.join(CATALOG_NAMES)}; "
                                                          "sized ones take NAME:k)")
    common.add_argument("--input", metavar="FILE", help="JSON or polynomial file")
    common.add_argument("--multiplicities", metavar="a,b,...")
    common.add_argument("--field", default="auto", help="prime p or 'auto'")
    common.add_argument("--primes", type=int, default=3, help="qualifying primes for char-0 consensus")
    common.add_argument("--q", type=int, choices=(1, 2), default=1)
    common.add_argument("--json", action="store_true", help="JSON output (default: text)")
    common.add_argument("--expect", metavar="FILE", help="golden file (path or bundled name) to diff against")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-nodes", type=int, default=5_000_000)
    common.add_argument("--budget-cols", type=int, default=DEFAULT_BUDGET_COLS)
    common.add_argument("--m-bound", type=int, default=4)
    common.add_argument("--chi", metavar="c1,c2,...")
    common.add_argument("--mod", metavar="N")
    common.add_argument("--vector", metavar="a1,a2,...")
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    g = sub.add_parser("golden", help="run every bundled golden file")
    g.add_argument("--json", action="store_true")
    return ap


def run(cfg):
    """(exit code, report dict)."""
    report = HANDLERS[cfg.command](cfg)
    report = {"command": cfg.command, "seed": cfg.seed, "result": report}
    if cfg.expect:
        gold = load_golden(cfg.expect)
        problems = diff_expected(gold.get("expect", gold), report["result"])
        report["expect"] = {"file": cfg.expect, "ok": not problems, "mismatches": problems}
        if problems:
            return EXIT_MISMATCH, report
    return EXIT_OK, report


def run_golden_suite():
    results, code = [], EXIT_OK
    for f in sorted(golden_dir().iterdir(), key=lambda p: p.name):
        if not f.name.endswith(".json"):
            continue
        doc = json.loads(f.read_text())
        cfg = build_parser().parse_args(doc["argv"] + ["--expect", str(f)])
        try:
            rc, rep = run(cfg)
        except BudgetError as exc:
            rc, rep = EXIT_BUDGET, {"error": str(exc)}
        results.append({"file": f.name, "ok": rc == EXIT_OK,
                        "mismatches": rep.get("expect", {}).get("mismatches", [rep.get("error")])})
        if rc != EXIT_OK:
            code = EXIT_MISMATCH
    return code, {"command": "golden", "results": results}


def main(argv=None):
    ap = build_parser()
    cfg = ap.parse_args(argv)
    try:
        if cfg.command == "golden":
            code, report = run_golden_suite()
        else:
            code, report = run(cfg)
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InputError as exc:
        print(f"input error ({exc.code}): {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ArrtopoError as exc:
        print(f"error ({exc.code}): {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.json:
        print(dumps(report))
    else:
        print("\n".join(_text(report)))
    if code == EXIT_MISMATCH and not cfg.json:
        print("expectation mismatch", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
