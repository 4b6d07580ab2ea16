"""Compare the compiled and numpy codeword-sweep kernels.

Usage: python3 benchmarks/bench_kernels.py [--m 9] [--set complement:0] [--repeat 3]
"""
import argparse
import time

import numpy as np

from z4lee import kernels
from z4lee.codelab import DefiningSetSpec, _hash_coef, build_defining_set
from z4lee.galois import field_ctx


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=9)
    ap.add_argument("--set", default="complement:0")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    ctx = field_ctx(args.m)
    code = build_defining_set(ctx, DefiningSetSpec.parse(args.set))
    tables = (ctx.Tr, ctx.log, ctx.exp, ctx.lmask, code.coords, _hash_coef(code.n))
    print(f"m={args.m} set={args.set} n={code.n} codewords swept={ctx.q * ctx.q}")

    results = {}
    for backend in kernels.available_backends():
        best = float("inf")
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            out = kernels.sweep_block(*tables, 0, ctx.q, backend=backend)
            best = min(best, time.perf_counter() - t0)
        results[backend] = (best, out)
        print(f"{backend:>9}: {best * 1000:9.1f} ms  ({ctx.q * ctx.q / best / 1e6:.2f} M codewords/s)")

    if len(results) == 2:
        (tp, (wp, fp)), (tc, (wc, fc)) = results["python"], results["compiled"]
        assert np.array_equal(wp, wc) and np.array_equal(fp, fc), "backends disagree"
        print(f"speedup: {tp / tc:.1f}x (outputs identical)")
    else:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
