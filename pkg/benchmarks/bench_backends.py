"""Compare the numba kernels against the pure-numpy fallback.

Times the two hot kernels (field matmul, echelon reduction) on growing
shapes, then a full two-stage decode, switching backends in place via
``backend.use``.  Run from the repo root:

    python3 benchmarks/bench_backends.py --reps 20
"""

import argparse
import time

import numpy as np

from maniac import backend
from maniac.codec import derive_params, lift_headers, noncoherent_decode, s1_encode, s2_encode
from maniac.fields import FieldTower
from maniac.matrix import Mat, rre
from maniac.netsim import AdversaryPlan, reference_network, transmit


def bench(fn, reps):
    fn()  # warm up jit compilation and caches
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t0) / reps


def kernel_cases(reps):
    tower = FieldTower(257, 3, 4)
    rng = np.random.default_rng(0)
    out = []
    for size in (8, 16, 32):
        a = Mat.random(tower.fq, size, size, rng)
        b = Mat.random(tower.fq, size, size, rng)
        out.append((f"mat_mul {size}x{size} deg2", reps, lambda a=a, b=b: a @ b))
        out.append((f"rre     {size}x{size} deg2", reps, lambda a=a: rre(a)))
    big = Mat.random(tower.fQ, 12, 12, rng)
    out.append(("rre     12x12 deg12", max(reps // 2, 1), lambda: rre(big)))
    return out


def decode_case(reps):
    net = reference_network(257)
    pr = derive_params(257, 1, 1, 2, 2, net.cuts())
    rng = np.random.default_rng(1)
    x1 = Mat.random(pr.tower.fq, pr.R1, pr.k * pr.N, rng)
    x2 = Mat.random(pr.tower.fQ, pr.R2, pr.k, rng)
    h1, h2 = lift_headers(pr, s1_encode(pr, x1), s2_encode(pr, x2))
    plan = AdversaryPlan(z=1, strategy="random-edges")
    for seed in range(50):
        tx = transmit(net, h1, h2, plan, seed)
        try:
            noncoherent_decode(pr, tx.Y)
            break
        except Exception:
            continue
    return [("noncoherent decode k=2", reps,
             lambda: noncoherent_decode(pr, tx.Y))]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=20)
    args = ap.parse_args()

    cases = kernel_cases(args.reps) + decode_case(args.reps)
    results = {}
    for name in ("numpy", "numba"):
        try:
            backend.use(name)
        except ImportError:
            print(f"backend {name} unavailable, skipping")
            continue
        for label, reps, fn in cases:
            results.setdefault(label, {})[name] = bench(fn, reps)

    width = max(len(label) for label in results)
    print(f"{'case':<{width}}  {'numpy':>10}  {'numba':>10}  speedup")
    for label, by in results.items():
        np_ms = by.get("numpy", float("nan")) * 1e3
        nb_ms = by.get("numba", float("nan")) * 1e3
        ratio = np_ms / nb_ms if nb_ms else float("nan")
        print(f"{label:<{width}}  {np_ms:>8.3f}ms  {nb_ms:>8.3f}ms  {ratio:>6.2f}x")


if __name__ == "__main__":
    main()
