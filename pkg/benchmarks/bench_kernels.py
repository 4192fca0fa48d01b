"""Compare the compiled and numpy kernel backends at the q=2, d=2, n=12, m=2048 scale.

    python benchmarks/bench_kernels.py [--repeats 3] [--q 2 --d 2 --m 2048 --n 12]

Each kernel runs on identical inputs in both backends; results are checked
for equality before timings are reported (best of ``--repeats``).
"""

import argparse
import time

import numpy as np

from almostnet import _kernels
from almostnet.generator import _Plan, derive_params, sample_translates
from almostnet.verifier import compositions


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--m", type=int, default=2048)
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--t", type=int, default=None)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)

    params = derive_params(args.q, args.d, args.m, args.n, args.t, seed=0)
    H = sample_translates(params)
    plan = _Plan(params)
    rh = plan.translate_digits(H.coeffs)
    rf = plan.rf
    q, D = params.q, params.D
    comps = list(compositions(params.n, params.d))
    print(f"q={q} d={params.d} m={params.m} n={params.n} t={params.t}: "
          f"{params.n_points:,} points, {len(comps)} compositions")

    backends = _kernels.available()
    outputs, rows = {}, []
    for name in backends:
        k = _kernels.load(name)
        out = np.empty((len(H) * rf.shape[0], params.d), dtype=np.uint64)
        t_comb = best_of(lambda: k.combine_translates(rh, rf, q, out), args.repeats)
        counts = np.zeros(q**params.n, dtype=np.int64)

        def count_all():
            for ks in comps:
                k.prefix_counts(out, q, D, list(ks), counts)

        t_count = best_of(count_all, args.repeats)
        outputs[name] = (out.copy(), counts.copy())
        rows.append((name, t_comb, t_count))

    ref = outputs[backends[0]]
    for name in backends[1:]:
        assert np.array_equal(outputs[name][0], ref[0]), f"{name} combine differs"
        assert np.array_equal(outputs[name][1], ref[1]), f"{name} counts differ"

    base = dict((r[0], r) for r in rows).get("numpy")
    print(f"{'backend':<8} {'combine [s]':>12} {'all counts [s]':>15} {'speedup':>8}")
    for name, tc, tn in rows:
        speed = (base[1] + base[2]) / (tc + tn) if base else float("nan")
        print(f"{name:<8} {tc:>12.3f} {tn:>15.3f} {speed:>7.2f}x")
    if len(backends) == 1:
        print("compiled backend not available; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
