"""Time the exact LP kernel on the Fraction and gmpy2 backends.

    python benchmarks/bench_backends.py [--problems N] [--repeat R]

Workloads: random extension problems (R^4 -> qtilde-R^3, both engines) and
the hexagon non-injectivity pipeline.  The backend is switched through the
ASYMSPACE_BACKEND flag, exactly as a user would.
"""
from __future__ import annotations

import argparse
import os
import random
import statistics
import time

from asymspace.bip import MixedBallFamily
from asymspace.extend import ExtensionProblem, extend_coordinatewise, extend_operator, necessity_pipeline
from asymspace.geometry import PartialOperator, PolyAsymNorm, Subspace, hexagon, is_t1, qtilde
from asymspace.ratlp import ENV_FLAG, available_backends
from asymspace.ratlp.linalg import rank
from asymspace.sampling import integer_vector


def _source(rng, n):
    while True:
        gens = [integer_vector(rng, n, 3) for _ in range(rng.randint(n + 1, n + 3))]
        gens.append(tuple(-sum(g[k] for g in gens) for k in range(n)))
        try:
            p = PolyAsymNorm(tuple(gens))
        except ValueError:
            continue
        if is_t1(p):
            return p


def make_problems(count: int, seed: int = 0):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        p = _source(rng, 4)
        k = rng.randint(1, 3)
        while True:
            basis = [integer_vector(rng, 4, 2) for _ in range(k)]
            if rank(basis) == k:
                break
        T = PartialOperator(Subspace(4, tuple(basis)), tuple(integer_vector(rng, 3, 2) for _ in range(k)), p, qtilde(3))
        out.append(T)
    return out


def extension_workload(ops):
    for T in ops:
        prob = ExtensionProblem(T)
        extend_operator(prob)
        extend_coordinatewise(prob)


def pipeline_workload(_):
    necessity_pipeline(MixedBallFamily.uniform(hexagon(), [(0, 0), (2, 0), (0, 2)], 1))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--problems", type=int, default=30)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    ops = make_problems(args.problems)
    workloads = [("extension x%d" % args.problems, extension_workload), ("hexagon pipeline", pipeline_workload)]
    saved = os.environ.get(ENV_FLAG)
    print(f"{'workload':<20} {'backend':<10} {'median s':>10} {'min s':>10}")
    try:
        for label, fn in workloads:
            for backend in available_backends():
                os.environ[ENV_FLAG] = backend
                times = []
                for _ in range(args.repeat):
                    t0 = time.perf_counter()
                    fn(ops)
                    times.append(time.perf_counter() - t0)
                print(f"{label:<20} {backend:<10} {statistics.median(times):>10.3f} {min(times):>10.3f}")
    finally:
        if saved is None:
            os.environ.pop(ENV_FLAG, None)
        else:
            os.environ[ENV_FLAG] = saved


if __name__ == "__main__":
    main()
