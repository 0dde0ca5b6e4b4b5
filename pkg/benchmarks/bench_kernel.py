"""Compiled vs pure-Python kernel timings.

    python benchmarks/bench_kernel.py [--depth 4] [--repeat 3]

Perft calls each kernel module directly.  Solver timings run in a
subprocess per backend, since the backend is fixed at import.
"""

import argparse
import json
import os
import subprocess
import sys
import time

from selfmate import _pykernel, parse_xfen

try:
    from selfmate import _ckernel
except ImportError:
    _ckernel = None

START = "8x8 rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w - - 0 1"
PAULY = "8x8 KB3N2/P1P1p1P1/5P1k/4P2p/7P/8/6B1/7b w - - 0 1"
BURBACH = "8x8 1R4B1/5r2/5P1Q/p5r1/P7/KN6/1p1P1p1P/1k2b2R w - - 0 1"

SOLVE_SNIPPET = """
import json, sys, time
from selfmate import BACKEND, Stipulation, parse_xfen, solve
out = {}
for label, fen, stip in json.loads(sys.argv[1]):
    t0 = time.perf_counter()
    sol = solve(parse_xfen(fen), Stipulation.parse(stip))
    out[label] = (time.perf_counter() - t0, sol.nodes)
print(json.dumps({"backend": BACKEND, "runs": out}))
"""


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def bench_perft(depth, repeat):
    p = parse_xfen(START)
    args = (p.board, p.files, p.ranks, p.side_to_move.code, p.ep_index)
    kernels = [("python", _pykernel)] + ([("cython", _ckernel)] if _ckernel else [])
    rows = {}
    for name, k in kernels:
        secs, nodes = best_of(lambda: k.perft(*args, depth), repeat)
        rows[name] = secs
        print(f"perft({depth}) start  {name:7s} {nodes:>9d} nodes  {secs:8.3f} s"
              f"  {nodes / secs:12.0f} nodes/s")
    return rows


def bench_solve():
    cases = [("pauly s#2", PAULY, "s#2"), ("burbach r#2", BURBACH, "r#2")]
    results = {}
    for pure in (True, False):
        env = dict(os.environ)
        env.pop("SELFMATE_PURE_PYTHON", None)
        if pure:
            env["SELFMATE_PURE_PYTHON"] = "1"
        proc = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET, json.dumps(cases)],
                              env=env, capture_output=True, text=True, check=True)
        data = json.loads(proc.stdout)
        results[data["backend"]] = data["runs"]
    for label, _, _ in cases:
        for backend, runs in results.items():
            secs, nodes = runs[label]
            print(f"solve {label:12s} {backend:7s} {nodes:>9d} nodes  {secs:8.3f} s")
    return results


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernel is None:
        print("compiled kernel not built; timing the pure-Python kernel only")
    perft_rows = bench_perft(args.depth, args.repeat)
    if len(perft_rows) == 2:
        print(f"perft speedup: {perft_rows['python'] / perft_rows['cython']:.1f}x")
    solve_rows = bench_solve()
    if len(solve_rows) == 2:
        for label in solve_rows["python"]:
            ratio = solve_rows["python"][label][0] / solve_rows["cython"][label][0]
            print(f"solve speedup {label}: {ratio:.1f}x")


if __name__ == "__main__":
    main()
