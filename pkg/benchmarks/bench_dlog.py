"""Compare the numba and numpy brute-force discrete-log kernels.

Runs both backends on the same random targets in the demo group (and a
larger one if asked), checks they agree, and prints mean time per search.

    python benchmarks/bench_dlog.py [--targets 20] [--bits 21 25]
"""

import argparse
import random
import time

from czkcke import _kernels
from czkcke.group import DEMO, generate_params


def time_backend(fn, params, targets, budget):
    out = []
    start = time.perf_counter()
    for t in targets:
        out.append(fn(params.g, t, params.p, budget))
    return (time.perf_counter() - start) / len(targets), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--targets", type=int, default=20)
    ap.add_argument("--bits", type=int, nargs="*", default=[21])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba unavailable (or CZKCKE_DISABLE_NUMBA set); timing numpy only")
    rng = random.Random(args.seed)
    for bits in args.bits:
        params = DEMO if bits == DEMO.bits else generate_params(bits, seed=args.seed)
        targets = [params.gexp(rng.randrange(params.q)) for _ in range(args.targets)]
        budget = params.q
        t_np, r_np = time_backend(_kernels.dlog_scan_numpy, params, targets, budget)
        line = f"bits={bits:3d} q={params.q:>10d}  numpy {t_np * 1e3:9.2f} ms"
        if _kernels.HAVE_NUMBA:
            _kernels.dlog_scan_numba(params.g, 1, params.p, 1)  # compile outside the timing
            t_nb, r_nb = time_backend(_kernels.dlog_scan_numba, params, targets, budget)
            assert r_nb == r_np, "backends disagree"
            line += f"  numba {t_nb * 1e3:9.2f} ms  speedup {t_np / t_nb:5.1f}x"
        print(line)


if __name__ == "__main__":
    main()
