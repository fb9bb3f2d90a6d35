#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Tiny DPLL solver with SAT-competition output, used as an external solver."""
import sys


def parse(path):
    clauses, nvars = [], 0
    with open(path) as f:
        for line in f:
            t = line.split()
            if not t or t[0] == "c":
                continue
            if t[0] == "p":
                nvars = int(t[2])
                continue
            lits = [int(x) for x in t]
            assert lits[-1] == 0
            clauses.append(lits[:-1])
    return nvars, clauses


def dpll(clauses, assign):
    while True:
        unit = None
        for c in clauses:
            if any(assign.get(abs(l)) == (l > 0) for l in c):
                continue
            free = [l for l in c if abs(l) not in assign]
            if not free:
                return None
            if len(free) == 1:
                unit = free[0]
                break
        if unit is None:
            break
        assign = dict(assign)
        assign[abs(unit)] = unit > 0
    for c in clauses:
        for l in c:
            if abs(l) not in assign:
                for val in (l > 0, l < 0):
                    a = dict(assign)
                    a[abs(l)] = val
                    r = dpll(clauses, a)
                    if r is not None:
                        return r
                return None
    return assign


def main():
    nvars, clauses = parse(sys.argv[-1])
    model = dpll(clauses, {})
    if model is None:
        print("s UNSATISFIABLE")
        sys.exit(20)
    print("s SATISFIABLE")
    vals = [str(v if model.get(v, False) else -v) for v in range(1, nvars + 1)]
    print("v " + " ".join(vals) + " 0")
    sys.exit(10)


if __name__ == "__main__":
    main()
