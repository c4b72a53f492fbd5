"""Benchmark the compiled kernel against the pure-Python fallback.

Times three representative workloads: 5x5 determinants of random rational
matrices, nullspaces of random 4x5 systems, and full stability decisions over
random parabolic structures (the dominant acceptance-suite loop).

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time


def rand_triple(rng, norm, span=40, den=9):
    return norm(
        rng.randrange(-span, span + 1),
        rng.randrange(-span, span + 1),
        rng.randrange(1, den + 1),
    )


def bench_kernel(kernel, repeat):
    rng = random.Random(271828)
    dets = [
        [[rand_triple(rng, kernel.t_norm) for _ in range(5)] for _ in range(5)]
        for _ in range(repeat)
    ]
    start = time.perf_counter()
    for m in dets:
        kernel.mat_det(m, 5)
    det_time = time.perf_counter() - start

    systems = [
        [[rand_triple(rng, kernel.t_norm) for _ in range(5)] for _ in range(4)]
        for _ in range(repeat)
    ]
    start = time.perf_counter()
    for m in systems:
        kernel.mat_nullspace(m, 4, 5)
    null_time = time.perf_counter() - start
    return det_time, null_time


def bench_stability(repeat):
    from paramod.parastruct import B, MarkedConfiguration, ParabolicStructure
    from paramod.stability import WeightVector, is_stable
    from paramod.exactnum import Scalar

    rng = random.Random(314159)
    cfg = MarkedConfiguration([0, 1, 2, 3, 4])
    w = WeightVector.uniform(Scalar.rational(4, 15))
    structures = [
        ParabolicStructure(
            B,
            [Scalar.rational(rng.randrange(-40, 41), rng.randrange(1, 8)) for _ in range(5)],
        )
        for _ in range(repeat)
    ]
    start = time.perf_counter()
    for s in structures:
        is_stable(s, cfg, w)
    return time.perf_counter() - start


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=2000)
    args = ap.parse_args()

    from paramod._kernels import pykernel

    try:
        from paramod._kernels import cykernel
    except ImportError:
        cykernel = None

    print(f"{'workload':<28}{'pure python':>14}{'cython':>14}{'speedup':>10}")
    py_det, py_null = bench_kernel(pykernel, args.repeat)
    if cykernel is not None:
        cy_det, cy_null = bench_kernel(cykernel, args.repeat)
    else:
        cy_det = cy_null = float("nan")
    print(f"{'det 5x5 x' + str(args.repeat):<28}{py_det:>13.3f}s{cy_det:>13.3f}s{py_det / cy_det:>9.2f}x")
    print(f"{'nullspace 4x5 x' + str(args.repeat):<28}{py_null:>13.3f}s{cy_null:>13.3f}s{py_null / cy_null:>9.2f}x")

    import os
    import subprocess
    import sys

    n_stab = max(args.repeat // 10, 50)
    times = {}
    for backend in ("py", "c") if cykernel is not None else ("py",):
        out = subprocess.run(
            [
                sys.executable,
                "-c",
                "import sys; sys.argv=['x']; "
                "from benchmarks.bench_kernels import bench_stability; "
                f"print(bench_stability({n_stab}))",
            ],
            env={**os.environ, "PARAMOD_BACKEND": backend},
            capture_output=True,
            text=True,
            cwd=os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
        )
        times[backend] = float(out.stdout.strip().splitlines()[-1])
    if "c" in times:
        print(
            f"{'stability x' + str(n_stab):<28}{times['py']:>13.3f}s{times['c']:>13.3f}s"
            f"{times['py'] / times['c']:>9.2f}x"
        )
    else:
        print(f"{'stability x' + str(n_stab):<28}{times['py']:>13.3f}s{'n/a':>14}")


if __name__ == "__main__":
    main()
