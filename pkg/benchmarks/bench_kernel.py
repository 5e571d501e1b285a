"""Compare the compiled evaluation kernel against the numpy fallback.

    python3 benchmarks/bench_kernel.py [--models 20000] [--formulas 20] [--nodes 6]
"""
import argparse
import random
import time

import numpy as np

from provlogic import kernel
from provlogic.formula import random_formula
from provlogic.kernel import ModelBatch, compile_formula
from provlogic.kripke import FrameProperty, generate_random


def make_batch(n_models, nodes, seed):
    pool = [generate_random({FrameProperty.SEMI_PERFECT}, nodes, ["p", "q"], seed + i) for i in range(200)]
    rng = random.Random(seed)
    models = [rng.choice(pool) for _ in range(n_models)]
    return ModelBatch(models, ["p", "q"])


def timed(fn, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--models", type=int, default=20000)
    ap.add_argument("--formulas", type=int, default=20)
    ap.add_argument("--nodes", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    batch = make_batch(args.models, args.nodes, args.seed)
    rng = random.Random(args.seed)
    progs = [compile_formula(random_formula(rng, 10), ["p", "q"]) for _ in range(args.formulas)]
    print(f"backend at import: {kernel.BACKEND}")
    print(f"{args.models} models x {args.formulas} formulas, <= {args.nodes} nodes")

    t_py, out_py = timed(lambda: [batch.evaluate(p, pure=True) for p in progs])
    print(f"numpy   {t_py * 1e3:9.1f} ms")
    if kernel.BACKEND != "cython":
        print("compiled kernel not built; nothing to compare")
        return
    t_cy, out_cy = timed(lambda: [batch.evaluate(p) for p in progs])
    same = all(np.array_equal(a, b) for a, b in zip(out_py, out_cy))
    print(f"cython  {t_cy * 1e3:9.1f} ms   speedup x{t_py / t_cy:.1f}   outputs identical: {same}")


if __name__ == "__main__":
    main()
