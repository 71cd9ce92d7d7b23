"""Compare the numba and numpy kernel paths on realistic workloads.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both implementations are called directly, so the HCPADIC_DISABLE_NUMBA flag
does not matter here.  Outputs are checked for equality before timing.
"""

import argparse
import time

import numpy as np

from hcpadic import kernels
from hcpadic.model import ModelParams, ti_polynomial, u_polynomial
from hcpadic.oracle import Topology, build_volume, count_admissible


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def scan_case(p, k, lam, m, use_u=False):
    P = ModelParams.from_fugacity(p, k, lam, m + 4)
    F = u_polynomial(P, m) if use_u else ti_polynomial(P, m)
    coeffs = np.asarray(F.residues, dtype=np.int64)
    mod = p**m
    args = (coeffs, np.int64(mod), np.int64(1), np.int64(p), p ** (m - 1))
    name = f"root_scan {'U' if use_u else 'F'} p={p} k={k} mod {p}^{m}"
    return name, kernels._root_scan_loop, kernels._root_scan_numpy, args


def mask_case(k, n, topo):
    vol = build_volume(k, n, topo)
    total = count_admissible(vol)
    return (f"admissible_masks k={k} n={n} {topo.value} ({total} configs)",
            kernels._admissible_masks_loop, kernels._admissible_masks_numpy, (vol.parent, total))


def popcount_case(k, n, topo):
    vol = build_volume(k, n, topo)
    masks = kernels._admissible_masks_numpy(vol.parent, count_admissible(vol))
    return (f"popcount over {masks.shape[0]} masks",
            kernels._popcount_loop, kernels._popcount_numpy, (masks, np.int64(vol.boundary_mask)))


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if kernels.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")

    cases = [
        scan_case(127, 7, 128, 3),
        scan_case(7, 9, 8, 8, use_u=True),
        scan_case(3, 2, 13, 14),
        mask_case(2, 3, Topology.FULL_CAYLEY),
        mask_case(4, 2, Topology.KBRANCH),
        popcount_case(2, 3, Topology.FULL_CAYLEY),
    ]
    print(f"{'kernel':52s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, fast, slow, fargs in cases:
        a, b = fast(*fargs), slow(*fargs)  # also compiles the numba path
        assert sorted(np.asarray(a).tolist()) == sorted(np.asarray(b).tolist()), name
        tn = best_of(lambda: fast(*fargs), args.repeat)
        tp = best_of(lambda: slow(*fargs), args.repeat)
        print(f"{name:52s} {tn * 1e3:9.2f}ms {tp * 1e3:9.2f}ms {tp / tn:7.1f}x")


if __name__ == "__main__":
    main()
