"""Sweep the one-step modification family x^p * Y = g(Z) and tabulate verdicts.

Each row: base ring, exponent, g, verdict, branching degree and how it was
obtained.  Screen failures are listed with the clause that rejected them.
"""

import argparse
import json
import time

from galab.bundle import check_triviality, make_prop38_instance, modification_family, modification_rejects
from galab.errors import HypothesisError


def sweep():
    rows = []
    for a_vars, primes, exps, g in modification_family():
        t0 = time.perf_counter()
        inst = make_prop38_instance(a_vars, primes, exps, g)
        rep = check_triviality(inst.delta, inst.alpha, inst.a_gens, inst.a_names, inst.primes)
        bd = rep.factors[0].branching if rep.factors else None
        rows.append({
            "A": "Q[" + ",".join(a_vars) + "]",
            "p": exps[0],
            "g": g,
            "verdict": rep.verdict,
            "m": bd.m if bd else None,
            "tag": bd.tag if bd else None,
            "method": bd.method if bd else None,
            "flags": list(inst.flags),
            "seconds": round(time.perf_counter() - t0, 3),
        })
    rejected = []
    for args, expected in modification_rejects():
        try:
            make_prop38_instance(*args)
            rejected.append({"g": args[3], "clause": None, "expected": expected})
        except HypothesisError as e:
            rejected.append({"g": args[3], "clause": e.clause, "expected": expected})
    return rows, rejected


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows, rejected = sweep()
    if args.json:
        print(json.dumps({"instances": rows, "rejected": rejected}, indent=2))
        return
    print(f"{'A':10s} {'p':>2s}  {'g':16s} {'verdict':12s} {'m':>2s}  method")
    for r in rows:
        print(f"{r['A']:10s} {r['p']:2d}  {r['g']:16s} {r['verdict']:12s} {r['m']:2d}  {r['method']} ({r['tag']})")
    print()
    for r in rejected:
        print(f"rejected g = {r['g']}: {r['clause']}")


if __name__ == "__main__":
    main()
