#!/usr/bin/env python3
"""Regenerates the bundled instance corpus under data/corpus/.

Deterministic (fixed seed). Emits PSPLIB-style .mm files in four families
mirroring the usual benchmark shapes:

    c15like_NN.mm   15 activities, 3 modes, 2 renewable + 2 non-renewable
    j20like_NN.mm   20 activities, 3 modes, 2 renewable + 2 non-renewable
    j50like_NN.mm   50 activities, 3 modes, MMLIB-tagged header
    m16like_NN.mm   16 activities, 2 modes (strip-renewables source)
"""

import random
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "corpus")


def make_instance(rng, njobs, nmodes):
    """Activity data for njobs real jobs; returns dict with all fields."""
    nr, nn = 2, 2
    caps_r = [rng.randint(8, 16) for _ in range(nr)]

    modes = {}  # job -> list of (dur, [b..], [w..])
    for j in range(2, njobs + 2):  # file numbering: 1 is source
        rows = []
        for _ in range(nmodes):
            dur = rng.randint(1, 10)
            b = [rng.randint(0, min(10, c)) for c in caps_r]
            if all(x == 0 for x in b):
                k = rng.randrange(nr)
                b[k] = rng.randint(1, min(10, caps_r[k]))
            w = [rng.randint(1, 10) for _ in range(nn)]
            rows.append((dur, b, w))
        # make the time/resource trade-off plausible: sort by duration,
        # cheaper on the first non-renewable when slower
        rows.sort(key=lambda r: r[0])
        for idx, (dur, b, w) in enumerate(rows):
            w[0] = max(1, 10 - 2 * idx - rng.randint(0, 2))
        modes[j] = rows

    # budgets: one reference mode per job plus slack keeps MA feasible
    ref_mode = {j: rng.randrange(nmodes) for j in modes}
    caps_n = []
    for k in range(nn):
        ref = sum(modes[j][ref_mode[j]][2][k] for j in modes)
        caps_n.append(ref + rng.randint(0, njobs // 2))

    # forward arcs; every job gets at most 3 predecessors among earlier jobs
    succ = {j: [] for j in range(1, njobs + 2 + 1)}
    pred_count = {j: 0 for j in range(2, njobs + 2)}
    jobs = list(range(2, njobs + 2))
    for pos, j in enumerate(jobs):
        if pos == 0:
            continue
        for _ in range(rng.randint(0, 2)):
            cand = jobs[rng.randrange(0, pos)]
            if j not in succ[cand] and len(succ[cand]) < 4:
                succ[cand].append(j)
                pred_count[j] += 1
    source_succ = sorted(j for j in jobs if pred_count[j] == 0)
    sink = njobs + 2
    succ[1] = source_succ
    for j in jobs:
        if not succ[j]:
            succ[j] = [sink]
        else:
            succ[j] = sorted(succ[j])
    succ[sink] = []

    horizon = sum(max(r[0] for r in rows) for rows in modes.values())
    return dict(njobs=njobs, nmodes=nmodes, caps_r=caps_r, caps_n=caps_n,
                modes=modes, succ=succ, horizon=horizon)


def render(inst, basedata, seedval):
    njobs = inst["njobs"]
    total = njobs + 2
    bar = "*" * 72
    lines = [bar,
             f"file with basedata            : {basedata}",
             f"initial value random generator: {seedval}",
             bar,
             "projects                      :  1",
             f"jobs (incl. supersource/sink ):  {total}",
             f"horizon                       :  {inst['horizon']}",
             "RESOURCES",
             "  - renewable                 :  2   R",
             "  - nonrenewable              :  2   N",
             "  - doubly constrained        :  0   D",
             bar,
             "PROJECT INFORMATION:",
             "pronr.  #jobs rel.date duedate tardcost  MPM-Time",
             f"    1     {njobs}      0       {inst['horizon']}        0       {inst['horizon']}",
             bar,
             "PRECEDENCE RELATIONS:",
             "jobnr.    #modes  #successors   successors"]
    for j in range(1, total + 1):
        nm = 1 if j in (1, total) else inst["nmodes"]
        sl = inst["succ"][j]
        lines.append(f"{j:4d} {nm:10d} {len(sl):12d}       " + "  ".join(str(s) for s in sl))
    lines += [bar,
              "REQUESTS/DURATIONS:",
              "jobnr. mode duration  R 1  R 2  N 1  N 2",
              "-" * 72]
    lines.append("  1      1     0       0    0    0    0")
    for j in range(2, total):
        for mi, (dur, b, w) in enumerate(inst["modes"][j], start=1):
            head = f"{j:3d}" if mi == 1 else "   "
            lines.append(f"{head} {mi:6d} {dur:8d} {b[0]:7d} {b[1]:4d} {w[0]:4d} {w[1]:4d}")
    lines.append(f"{total:3d}      1     0       0    0    0    0")
    lines += [bar,
              "RESOURCEAVAILABILITIES:",
              "  R 1  R 2  N 1  N 2",
              f"   {inst['caps_r'][0]:2d}   {inst['caps_r'][1]:2d}   {inst['caps_n'][0]:2d}   {inst['caps_n'][1]:2d}",
              bar]
    return "\n".join(lines) + "\n"


def main():
    os.makedirs(OUT, exist_ok=True)
    rng = random.Random(20240817)
    families = [("c15like", 14, 15, 3, "cr15_.bas"),
                ("j20like", 8, 20, 3, "jr20_.bas"),
                ("j50like", 3, 50, 3, "MMLIB50_.bas"),
                ("m16like", 2, 16, 2, "mr16_.bas")]
    for prefix, count, njobs, nmodes, basedata in families:
        for idx in range(1, count + 1):
            inst = make_instance(rng, njobs, nmodes)
            text = render(inst, basedata, rng.randint(10**6, 10**9))
            path = os.path.join(OUT, f"{prefix}_{idx:02d}.mm")
            with open(path, "w") as fh:
                fh.write(text)
            print(path)


if __name__ == "__main__":
    main()
