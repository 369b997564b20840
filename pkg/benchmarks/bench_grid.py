"""Benchmark the triple-grid scan: numba kernel vs pure-numpy fallback.

Builds the same pair-probability sheets the violation search precomputes
(singlet pair law, 0.5 * sin^2((x - y) / 2)) on square angle grids of
growing size, scans each with both backends, checks the results agree bit
for bit, and prints a timing table. The numpy fallback materializes the
full (n, n, n) score cube, so its sizes are capped; the numba kernel never
materializes it and gets one extra, larger row.

Usage: python3 benchmarks/bench_grid.py [--sizes 64,128,192,256] [--repeats 3]
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from tfuprob.kernels import HAVE_NUMBA, available_backends, scan_triple


def pair_sheet(thetas: np.ndarray) -> np.ndarray:
    return 0.5 * np.sin(0.5 * (thetas[:, None] - thetas[None, :])) ** 2


def time_scan(jab, jbc, jac, backend: str, repeats: int):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = scan_triple(jab, jbc, jac, backend=backend)
        best = min(best, time.perf_counter() - start)
    return result, best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="64,128,192,256",
                        help="comma-separated grid sizes run on both backends")
    parser.add_argument("--numba-extra", type=int, default=512,
                        help="extra size run on numba only (0 to skip)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timed repeats per cell; best time is reported")
    args = parser.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    if HAVE_NUMBA:
        # compile outside the timed region
        warm = pair_sheet(np.linspace(0.0, np.pi, 8))
        scan_triple(warm, warm, warm, backend="numba")

    header = f"{'size':>6} {'tuples':>12}"
    for b in backends:
        header += f" {b + ' [s]':>12}"
    if len(backends) == 2:
        header += f" {'speedup':>9} {'agree':>6}"
    print(header)

    ok = True
    for n in sizes:
        thetas = np.linspace(0.0, np.pi, n)
        sheet = pair_sheet(thetas)
        row = f"{n:>6} {n**3:>12}"
        results, timings = {}, {}
        for b in backends:
            results[b], timings[b] = time_scan(sheet, sheet, sheet, b, args.repeats)
            row += f" {timings[b]:>12.4f}"
        if len(backends) == 2:
            agree = results["numba"] == results["numpy"]
            ok &= agree
            row += f" {timings['numpy'] / timings['numba']:>8.1f}x {'yes' if agree else 'NO':>6}"
        print(row)

    if HAVE_NUMBA and args.numba_extra:
        n = args.numba_extra
        sheet = pair_sheet(np.linspace(0.0, np.pi, n))
        _, t = time_scan(sheet, sheet, sheet, "numba", args.repeats)
        print(f"{n:>6} {n**3:>12} {t:>12.4f} {'(numba only)':>12}")

    if not ok:
        print("backend results disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
