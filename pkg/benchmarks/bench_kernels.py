"""Compare the compiled and pure-Python integer kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--end-to-end]

Each workload is first run on both backends and the results compared; then the
best-of-N wall time is reported.  ``--end-to-end`` also times a full C15:D16
quotient in subprocesses, one per backend (backend choice happens at import).
"""
import argparse
import os
import random
import subprocess
import sys
import time

from charlat import _pykernels
from charlat.zlat import det

try:
    from charlat import _ckernels
except ImportError:
    sys.exit("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")


def _rand(rng, r, c, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(c)] for _ in range(r)]


def workloads():
    rng = random.Random(1)
    A = _rand(rng, 48, 48)
    D = abs(det(A))
    yield "hnf_mod 48x48", lambda k: k.hnf_mod([r[:] for r in A], 48, D)
    B = _rand(rng, 40, 40)
    yield "local_valuations 40x40 p=2", lambda k: k.local_valuations(B, 40, 2, 12)
    C = _rand(rng, 120, 120, -10**6, 10**6)
    yield "det_mod_p 120x120", lambda k: k.det_mod_p(C, 2**61 - 1)
    M1, M2 = _rand(rng, 64, 64, 0, 10**9), _rand(rng, 64, 64, 0, 10**9)
    yield "matmul_mod 64x64", lambda k: k.matmul_mod(M1, M2, 10**9 + 7)


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def end_to_end():
    code = ("from charlat.groups import dixon_table; from charlat.families import c15_d16_group;"
            "from charlat.orders import group_order_report; group_order_report(dixon_table(c15_d16_group()))")
    out = {}
    for name, flag in (("cython", "0"), ("python", "1")):
        env = dict(os.environ, CHARLAT_PURE_PYTHON=flag)
        t0 = time.perf_counter()
        subprocess.run([sys.executable, "-c", code], env=env, check=True)
        out[name] = time.perf_counter() - t0
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args()

    print(f"{'workload':32} {'cython':>10} {'python':>10} {'speedup':>8}")
    for name, run in workloads():
        if run(_ckernels) != run(_pykernels):
            sys.exit(f"{name}: backends disagree")
        tc = best(lambda: run(_ckernels), args.repeat)
        tp = best(lambda: run(_pykernels), args.repeat)
        print(f"{name:32} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f}x")
    if args.end_to_end:
        t = end_to_end()
        print(f"{'C15:D16 quotient (process)':32} {t['cython']:10.2f} {t['python']:10.2f} "
              f"{t['python'] / t['cython']:8.1f}x")


if __name__ == "__main__":
    main()
