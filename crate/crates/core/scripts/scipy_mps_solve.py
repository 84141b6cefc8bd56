#!/usr/bin/env python3
"""Solve a free-format MPS file with scipy's HiGHS MILP wrapper.

Usage: scipy_mps_solve.py MODEL.mps SOLUTION.sol [TIME_LIMIT|inf] [--gap X]

Writes the neutral solution format (=obj=, =bound=, =gap=, =status= plus
one `name value` line per nonzero column). Needs numpy and scipy >= 1.9.
"""

import argparse
import math
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_matrix


def read_mps(path):
    objective = None
    rows = {}  # name -> (index, sense)
    row_order = []
    cols = {}
    col_order = []
    integer = []
    costs = []
    entries = []  # (row index, col index, value)
    rhs = {}
    lower = []
    upper = []
    section = None
    in_int = False

    def column(name):
        if name not in cols:
            cols[name] = len(col_order)
            col_order.append(name)
            integer.append(in_int)
            costs.append(0.0)
            lower.append(0.0)
            upper.append(math.inf)
        return cols[name]

    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("*"):
                continue
            if not line[0].isspace():
                head = line.split()
                section = head[0]
                if section == "ENDATA":
                    break
                if section not in ("NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS"):
                    raise SystemExit(f"unsupported MPS section {section}")
                continue
            f = line.split()
            if section == "ROWS":
                sense, name = f
                if sense == "N":
                    if objective is None:
                        objective = name
                else:
                    rows[name] = (len(row_order), sense)
                    row_order.append(name)
            elif section == "COLUMNS":
                if len(f) >= 3 and f[1] == "'MARKER'":
                    in_int = f[2] == "'INTORG'"
                    continue
                j = column(f[0])
                for name, value in zip(f[1::2], f[2::2]):
                    value = float(value)
                    if name == objective:
                        costs[j] += value
                    elif name in rows:
                        entries.append((rows[name][0], j, value))
            elif section == "RHS":
                for name, value in zip(f[1::2], f[2::2]):
                    if name in rows:
                        rhs[name] = float(value)
            elif section == "BOUNDS":
                kind, _, name = f[:3]
                value = float(f[3]) if len(f) > 3 else None
                j = column(name)
                if kind == "BV":
                    integer[j], lower[j], upper[j] = True, 0.0, 1.0
                elif kind == "UP":
                    upper[j] = value
                elif kind == "LO":
                    lower[j] = value
                elif kind == "FX":
                    lower[j] = upper[j] = value
                elif kind == "FR":
                    lower[j], upper[j] = -math.inf, math.inf
                elif kind == "MI":
                    lower[j] = -math.inf
                elif kind == "PL":
                    upper[j] = math.inf
                else:
                    raise SystemExit(f"unsupported bound type {kind}")

    m, n = len(row_order), len(col_order)
    lo = np.full(m, -np.inf)
    hi = np.full(m, np.inf)
    for name, (i, sense) in rows.items():
        b = rhs.get(name, 0.0)
        if sense in ("L", "E"):
            hi[i] = b
        if sense in ("G", "E"):
            lo[i] = b
    if entries:
        r, c, v = zip(*entries)
    else:
        r, c, v = (), (), ()
    a = coo_matrix((v, (r, c)), shape=(m, n)).tocsr()
    return col_order, np.array(costs), a, lo, hi, np.array(lower), np.array(upper), np.array(integer, dtype=int)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("mps")
    ap.add_argument("sol")
    ap.add_argument("time_limit", nargs="?", default="inf")
    ap.add_argument("--gap", type=float, default=1e-9, help="relative MIP gap")
    args = ap.parse_args()

    names, c, a, lo, hi, lb, ub, integrality = read_mps(args.mps)
    options = {"mip_rel_gap": args.gap, "disp": False}
    limit = float(args.time_limit)
    if math.isfinite(limit):
        options["time_limit"] = limit
    constraints = [LinearConstraint(a, lo, hi)] if a.shape[0] else []
    res = milp(c, constraints=constraints, integrality=integrality, bounds=Bounds(lb, ub), options=options)

    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}.get(res.status)
    if status is None:
        status = "feasible" if res.x is not None else "unknown"
    with open(args.sol, "w") as out:
        out.write(f"# scipy {res.message}\n")
        out.write(f"=status= {status}\n")
        if res.x is not None:
            out.write(f"=obj= {float(res.fun)!r}\n")
            bound = getattr(res, "mip_dual_bound", None)
            if bound is not None and math.isfinite(bound):
                out.write(f"=bound= {float(bound)!r}\n")
            gap = getattr(res, "mip_gap", None)
            if gap is not None and math.isfinite(gap):
                out.write(f"=gap= {float(gap)!r}\n")
            for name, value, is_int in zip(names, res.x, integrality):
                value = float(round(value)) if is_int else float(value)
                if value != 0.0:
                    out.write(f"{name} {value!r}\n")
    print(f"{status} {res.fun if res.x is not None else ''}", file=sys.stderr)


if __name__ == "__main__":
    main()
