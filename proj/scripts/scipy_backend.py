#!/usr/bin/env python3
"""MPS-to-scipy solver shim.

Usage: scipy_backend.py MODEL.mps SOLUTION.sol TIME_LIMIT_SECONDS

Reads a free-format MPS file (ROWS/COLUMNS/RHS/BOUNDS with INTORG/INTEND
markers), solves it with scipy.optimize.milp (HiGHS) and writes the neutral
solution format:

    #status optimal|feasible|infeasible|unknown|error
    #objective <value>        (when a point is available)
    #bound <value>            (dual bound when reported)
    #vars <n>  /  #cons <m>   (recount of the parsed model)
    <variable> <value>        (one line per variable)
"""

import sys


def parse_mps(path):
    rows = []          # (name, sense) sense in L/G/E
    objective_row = None
    columns = {}       # var -> list[(row_name, coeff)]
    var_order = []
    integral = set()
    obj_coeffs = {}
    rhs = {}
    bounds = {}        # var -> [lo, up] with None = default
    section = None
    in_integer = False

    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("*"):
                continue
            if line[0] not in " \t":
                section = line.split()[0].upper()
                continue
            tok = line.split()
            if section == "ROWS":
                sense, name = tok[0].upper(), tok[1]
                if sense == "N":
                    objective_row = name
                else:
                    rows.append((name, sense))
            elif section == "COLUMNS":
                if len(tok) >= 3 and tok[1] == "'MARKER'":
                    in_integer = tok[2] == "'INTORG'"
                    continue
                var = tok[0]
                if var not in columns:
                    columns[var] = []
                    var_order.append(var)
                    if in_integer:
                        integral.add(var)
                for i in range(1, len(tok) - 1, 2):
                    row, coeff = tok[i], float(tok[i + 1])
                    if row == objective_row:
                        obj_coeffs[var] = obj_coeffs.get(var, 0.0) + coeff
                    else:
                        columns[var].append((row, coeff))
            elif section == "RHS":
                for i in range(1, len(tok) - 1, 2):
                    rhs[tok[i]] = float(tok[i + 1])
            elif section == "BOUNDS":
                kind = tok[0].upper()
                var = tok[2]
                entry = bounds.setdefault(var, [None, None])
                if kind == "FX":
                    entry[0] = entry[1] = float(tok[3])
                elif kind == "LO":
                    entry[0] = float(tok[3])
                elif kind == "UP":
                    entry[1] = float(tok[3])
                elif kind == "BV":
                    entry[0], entry[1] = 0.0, 1.0
                elif kind == "MI":
                    entry[0] = -float("inf")
                elif kind == "PL":
                    entry[1] = float("inf")
                else:
                    raise ValueError(f"unsupported bound kind {kind}")
            elif section == "RANGES":
                raise ValueError("RANGES sections are not supported")
    return rows, var_order, columns, integral, obj_coeffs, rhs, bounds


def main():
    if len(sys.argv) != 4:
        print(__doc__, file=sys.stderr)
        return 2
    model_path, sol_path, time_limit = sys.argv[1], sys.argv[2], float(sys.argv[3])

    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import lil_matrix

    rows, var_order, columns, integral, obj_coeffs, rhs, bounds = parse_mps(model_path)
    nvar, ncon = len(var_order), len(rows)
    var_index = {v: i for i, v in enumerate(var_order)}
    row_index = {name: i for i, (name, _) in enumerate(rows)}

    c = np.zeros(nvar)
    for v, coeff in obj_coeffs.items():
        c[var_index[v]] = coeff

    a = lil_matrix((ncon, nvar))
    for v, entries in columns.items():
        j = var_index[v]
        for row, coeff in entries:
            a[row_index[row], j] += coeff
    lo = np.full(ncon, -np.inf)
    hi = np.full(ncon, np.inf)
    for i, (name, sense) in enumerate(rows):
        b = rhs.get(name, 0.0)
        if sense in ("L", "E"):
            hi[i] = b
        if sense in ("G", "E"):
            lo[i] = b

    vlo = np.zeros(nvar)
    vhi = np.full(nvar, np.inf)
    for v, (blo, bhi) in bounds.items():
        j = var_index[v]
        if blo is not None:
            vlo[j] = blo
        if bhi is not None:
            vhi[j] = bhi
    integrality = np.array([1 if v in integral else 0 for v in var_order])

    kwargs = dict(
        c=c,
        integrality=integrality,
        bounds=Bounds(vlo, vhi),
        options={"time_limit": time_limit, "mip_rel_gap": 1e-9},
    )
    if ncon:
        kwargs["constraints"] = LinearConstraint(a.tocsr(), lo, hi)
    res = milp(**kwargs)

    with open(sol_path, "w") as out:
        out.write(f"#vars {nvar}\n#cons {ncon}\n")
        if res.status == 0:
            status = "optimal"
        elif res.status == 2:
            status = "infeasible"
        elif res.status == 1 and res.x is not None:
            status = "feasible"
        elif res.status in (1, 4) and res.x is None:
            status = "unknown"
        elif res.status == 3:
            status = "error"  # unbounded never arises from these models
        else:
            status = "feasible" if res.x is not None else "unknown"
        out.write(f"#status {status}\n")
        if res.x is not None:
            out.write(f"#objective {float(res.fun)!r}\n")
            dual = getattr(res, "mip_dual_bound", None)
            if dual is not None:
                out.write(f"#bound {float(dual)!r}\n")
            for v, x in zip(var_order, res.x):
                x = float(x)
                if v in integral:
                    x = float(round(x))
                out.write(f"{v} {x!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
