"""Compare the compiled and numpy implementations of the pairwise kernels.

    python benchmarks/bench_core.py [--repeat 5] [--json out.json]

Each case times one call on the nodes of a grid (all node pairs) and checks
that both backends agree before reporting.
"""
import argparse
import json
import sys
import timeit

import numpy as np

from ousector import _backend
from ousector.domination import g_peak, margin
from ousector.grid import GridSpec
from ousector.mehler import one_minus_exp2, prefactor
from ousector.sector_geometry import compute_params, s_map

Z = 0.6 + 0.3j
PARAMS = compute_params(4)


def cases():
    for label, spec in (("d=1 R=5 h=0.05", GridSpec(5, 0.05, 1)),
                        ("d=1 R=10 h=0.05", GridSpec(10, 0.05, 1)),
                        ("d=2 R=3 h=0.1", GridSpec(3, 0.1, 2))):
        pts = np.ascontiguousarray(spec.points())
        d = spec.d
        c = 0.5 - 1.0 / PARAMS.p
        yield label, "mehler_pairs", (pts, pts, prefactor(Z, d), np.exp(-Z), 1.0 / (2.0 * one_minus_exp2(Z)))
        yield label, "alt_pairs", (pts, pts, prefactor(Z, d), s_map(Z), c)
        yield label, "domination_scan", (pts, pts, g_peak(Z, d), s_map(Z), c, margin(Z, PARAMS))


def _agree(a, b):
    if isinstance(a, tuple):
        return abs(a[0] - b[0]) <= 1e-14 and a[1:] == b[1:]
    return np.allclose(a, b, rtol=1e-12, atol=0)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="write timings to this file")
    args = ap.parse_args(argv)

    backends = _backend.available()
    if "cython" not in backends:
        print("compiled extension not built; timing the numpy fallback only", file=sys.stderr)

    rows = []
    print(f"{'grid':18s} {'kernel':16s} {'pairs':>10s} " + " ".join(f"{b:>10s}" for b in backends)
          + ("   speedup" if len(backends) > 1 else ""))
    for label, name, fargs in cases():
        results, times = {}, {}
        for bname, mod in backends.items():
            fn = getattr(mod, name)
            results[bname] = fn(*fargs)
            times[bname] = min(timeit.repeat(lambda: fn(*fargs), number=1, repeat=args.repeat))
        if len(results) > 1 and not _agree(results["cython"], results["python"]):
            raise SystemExit(f"backends disagree on {name} / {label}")
        pairs = fargs[0].shape[0] * fargs[1].shape[0]
        row = {"grid": label, "kernel": name, "pairs": pairs, "seconds": times}
        line = f"{label:18s} {name:16s} {pairs:10d} " + " ".join(f"{times[b]:10.4f}" for b in backends)
        if len(backends) > 1:
            row["speedup"] = times["python"] / times["cython"]
            line += f"   {row['speedup']:6.1f}x"
        print(line)
        rows.append(row)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
