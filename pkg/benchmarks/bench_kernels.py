"""Time the compiled and pure-Python kernels on the same workloads.

    python3 benchmarks/bench_kernels.py [--series 60] [--days 160] [--permutations 200]

Reports wall time per sweep and checks that both backends return identical
statistics. The Python backend is slow by design; keep the sizes modest.
"""

import argparse
import time

import numpy as np

from marketnet import _backend, synth
from marketnet.network import build_network, weighted_betweenness
from marketnet.permval import PermutationConfig, validate_all_pairs


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return time.perf_counter() - start, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--series", type=int, default=60)
    ap.add_argument("--days", type=int, default=160)
    ap.add_argument("--permutations", type=int, default=200)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    names = _backend.available()
    if "compiled" not in names:
        print("compiled kernels not built; only the python backend is available")
    panel, _ = synth.generate(synth.SynthSpec(args.series, args.days, factor_loading=0.5,
                                              sentiment_loading=0.4, couple_fraction=0.3,
                                              coupling=0.8, missing_rate=0.05, seed=1))
    price, pos = panel.rows("price"), panel.rows("pos")
    corr = PermutationConfig(n_permutations=args.permutations)
    te = PermutationConfig(n_permutations=args.permutations, min_obs=40)

    workloads = {
        "kendall sweep": lambda k: validate_all_pairs(panel, price, price, "kendall", corr,
                                                      n_threads=args.threads, kernels=k).stat,
        "te sweep": lambda k: validate_all_pairs(panel, pos, price, "te", te,
                                                 n_threads=args.threads, kernels=k).stat,
    }
    net = build_network(validate_all_pairs(panel, price, price, "kendall", corr), 1.0)
    workloads["betweenness"] = lambda k: weighted_betweenness(net, args.threads, kernels=k)

    print(f"{args.series} series x {args.days} days, {args.permutations} permutations, "
          f"{args.threads} thread(s)")
    print(f"{'workload':<16}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for label, work in workloads.items():
        times, outs = [], []
        for name in names:
            t, out = timed(lambda: work(_backend.load(name)))
            times.append(t)
            outs.append(out)
        same = all(np.allclose(o, outs[0], rtol=1e-12, atol=1e-12, equal_nan=True) for o in outs)
        speedup = f"{times[-1] / times[0]:.0f}x" if len(times) > 1 else "-"
        print(f"{label:<16}" + "".join(f"{t:>11.2f}s" for t in times) + f"{speedup:>10}"
              + ("" if same else "  MISMATCH"))


if __name__ == "__main__":
    main()
