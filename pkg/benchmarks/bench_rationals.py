"""Compare the compiled rational backend against the pure-Python fallback.

The scalar type is fixed at import time (see symfano.rationals), so each
backend runs in a subprocess with SYMFANO_RATIONALS set.  Workloads cover the
hot paths: integer normal forms, group closure plus threshold evaluation,
exact LP verdicts over all supports, and a fan refinement.

Usage: python benchmarks/bench_rationals.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, random, sys, time
import symfano
from symfano.rationals import BACKEND
from symfano.exact import IntMatrix, smith_normal_form
from symfano.curvepair import MarkedCurvePair, lct_g
from symfano.groups import MoebiusElement, closure
from symfano.exact import ProjPoint
from symfano.quotients import WeightMatrix, polystable_locus
from symfano.polyhedral import Cone, common_refinement
from symfano.rationals import rat

def bench(fn, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best

def snf():
    rng = random.Random(1)
    for _ in range(120):
        rows, cols = rng.randint(2, 4), rng.randint(2, 4)
        smith_normal_form(IntMatrix([[rng.randint(-50, 50) for _ in range(cols)] for _ in range(rows)]))

def threshold():
    group = closure([MoebiusElement([[-1, -1], [1, 0]]), MoebiusElement([[1, 0], [-1, -1]])])
    pts = [ProjPoint.from_affine(rat(t)) for t in (0, -1)] + [ProjPoint.infinity()]
    pair = MarkedCurvePair([(p, rat(1, 2)) for p in pts])
    for _ in range(300):
        lct_g(pair, group)

def stability():
    wm = WeightMatrix(("a", "b", "c", "d"), IntMatrix([[-1, 1, -1, 1], [1, -1, -1, 1]]))
    for _ in range(40):
        polystable_locus(wm)

def refinement():
    cones = [
        Cone(2, [(1, 0), (0, 1)]),
        Cone(2, [(0, 1), (-1, -1)]),
        Cone(2, [(1, 0), (-1, -1)]),
        Cone(2, [(1, 2), (2, 1)]),
    ]
    for _ in range(10):
        common_refinement(cones)

repeat = int(sys.argv[1])
out = {"backend": BACKEND}
for name, fn in (("snf", snf), ("threshold", threshold), ("stability", stability), ("refinement", refinement)):
    out[name] = bench(fn, repeat)
print(json.dumps(out))
"""


def run_backend(backend: str, repeat: int) -> dict:
    env = dict(os.environ, SYMFANO_RATIONALS=backend)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(repeat)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    args = parser.parse_args()
    results = {}
    for backend in ("gmpy2", "fractions"):
        try:
            results[backend] = run_backend(backend, args.repeat)
        except subprocess.CalledProcessError as exc:
            print(f"{backend}: unavailable ({exc.stderr.strip().splitlines()[-1]})")
    if len(results) < 2:
        return
    names = ("snf", "threshold", "stability", "refinement")
    print(f"{'workload':<12} {'gmpy2':>10} {'fractions':>10} {'speedup':>8}")
    for name in names:
        fast = results["gmpy2"][name]
        slow = results["fractions"][name]
        print(f"{name:<12} {fast:>9.4f}s {slow:>9.4f}s {slow / fast:>7.1f}x")


if __name__ == "__main__":
    main()
