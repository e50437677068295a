#!/usr/bin/env python3
"""Smoke test for the tempolint_py extension module.

Builds the extension with cargo if needed, loads it, and runs one pass over
the main entry points: parsing, NNF, the debugging pipeline, predicate
decomposition, satisfiability with witness replay, and signal vacuity on
generated traces.

Usage: python3 python/smoke_test.py
"""

import pathlib
import shutil
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def build_extension():
    here = pathlib.Path(__file__).resolve().parent
    module = here / "tempolint_py.so"
    lib = ROOT / "target" / "debug" / "libtempolint_py.so"
    subprocess.run(["cargo", "build", "-p", "tempolint-py"], cwd=ROOT, check=True)
    shutil.copy2(lib, module)
    sys.path.insert(0, str(here))


def main():
    build_extension()
    import tempolint_py as tl

    failures = []

    def check(name, condition):
        status = "ok" if condition else "FAIL"
        print(f"  {name}: {status}")
        if not condition:
            failures.append(name)

    print("parsing and normal form")
    phi2 = tl.Formula.parse("F[0,30](p1 -> G[0,20]p1)")
    check("parse/print round trip", str(tl.Formula.parse(str(phi2))) == str(phi2))
    check("horizon", phi2.horizon() == "50")
    nnf = phi2.to_nnf()
    check("nnf removes implication", "->" not in str(nnf))
    check("negate", str(phi2.negate()) == "G[0,30](p1 && F[0,20]!p1)")

    print("debugging pipeline")
    report = tl.debug(phi2)
    check("tautology detected", report["status"] == "FailedValidity")
    check(
        "tautology finding",
        any(f["kind"] == "Tautology" for f in report["findings"]),
    )

    redundant = tl.Formula.parse("F[0,30]p1 && F[0,20]p1")
    report2 = tl.debug(redundant)
    check("redundancy detected", report2["status"] == "FailedRedundancy")
    check(
        "redundant conjunct named",
        any(f.get("conjunct") == "F[0,30]p1" for f in report2["findings"]),
    )

    print("predicate decomposition")
    stl = tl.Formula.parse("F[0,10](speed>100 || F[0,10](speed>80))")
    table = tl.decompose(stl)
    check("rewrite speed>80 -> a|c", table["rewrites"]["speed>80"] == "a|c")
    check("mutex group", table["mutex"] == [["a", "c"]])
    check("abstracted", table["abstracted"] == "F[0,10](a || F[0,10](a || c))")

    print("satisfiability")
    timed = tl.Formula.parse("F[0,1]a && F[0,1]c")
    status, witness = tl.sat(timed, mutex=[["a", "c"]])
    check("sat with mutex", status == "sat" and witness is not None)
    check("witness replays", tl.evaluate(witness, timed))
    check(
        "entailment",
        tl.entails(tl.Formula.parse("F[0,10]p && G[0,10]q"),
                   tl.Formula.parse("F[0,10](p && q)")),
    )
    check("dimacs header", "p cnf" in tl.dimacs(tl.Formula.parse("p")))

    print("traces and signal vacuity")
    at1 = tl.Formula.parse("G[0,27.5]((g2 && F(0,0.04]g1) -> G[0,2.5](!g2))")
    check("request-response", at1.is_request_response())
    traces = tl.generate_traces("at-gear3", count=5, seed=2)
    check("deterministic generation",
          [t.to_csv() for t in tl.generate_traces("at-gear3", count=5, seed=2)]
          == [t.to_csv() for t in traces])
    vacuous = 0
    for trace in traces:
        findings = tl.vacuity_signal(at1, trace)
        if findings:
            vacuous += 1
            mutation = tl.Formula.parse(findings[0]["mutated"])
            if not tl.evaluate(trace, mutation):
                failures.append("mutation replay")
    check("constant gear is vacuous", vacuous == len(traces))

    print("falsification localization")
    f = tl.Formula.parse("F[0,4](a && F[0,4]b)")
    trace = tl.Trace.from_csv("time,a,b\n0,0,0\n2,0,1\n8,0,1\n")
    sources = tl.localize(f, trace)
    check("source is a", [s["literal"] for s in sources] == ["a"])

    print()
    if failures:
        print(f"FAILED: {len(failures)} check(s): {', '.join(failures)}")
        return 1
    print("all smoke checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
