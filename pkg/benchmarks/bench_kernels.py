"""Compare the numba and numpy kernel backends.

Each backend runs in its own interpreter because KNOTCHAR_DISABLE_JIT is read
at import time.  Timings exclude numba compilation (one warm-up call first).

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --repeat 5 --json bench.json
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from knotchar import kernels
from knotchar.pipeline import Knot
from knotchar.regulator import circle, coefficient_matrix, integrate_forms, loop_library, refined

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
curve = Knot("fig8").eigencurve
C = curve.C

def best(fn):
    fn()  # warm-up (compilation for numba)
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter(); fn(); ts.append(time.perf_counter() - t0)
    return min(ts)

polys = [rng.normal(size=17) + 1j * rng.normal(size=17) for _ in range(200)]
arc = circle(0j, 0.5)
grid = np.linspace(0, 1, 1025)
l0 = complex(np.roots((arc.start ** np.arange(C.shape[0]) @ C)[::-1])[0])
pts = rng.normal(size=(2000, 2)) + 1j * rng.normal(size=(2000, 2))

out = {
    "backend": kernels.BACKEND,
    "poly_roots x200 (deg 16)": best(lambda: [kernels.poly_roots(c, 1e-15, 500) for c in polys]),
    "eval_partials x2000": best(lambda: [kernels.eval_partials(C, m, l) for m, l in pts]),
    "track_piece (1025 samples)": best(lambda: kernels.track_piece(C, arc.kind, arc.params(), grid, l0,
                                                                  1e-6, 40, 1e-14)),
    "loop library": best(lambda: loop_library(curve)),
}
loops = loop_library(curve)
out["loop refinement 4x"] = best(lambda: [integrate_forms(refined(lp, curve, 2)) for lp, _ in loops])
print(json.dumps(out))
"""


def run(backend: str, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("KNOTCHAR_DISABLE_JIT", None)
    if backend == "numpy":
        env["KNOTCHAR_DISABLE_JIT"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=3, help="timed repetitions (best is reported)")
    ap.add_argument("--json", help="also write the raw timings here")
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    res = {b: run(b, args.repeat) for b in ("numba", "numpy")}
    assert res["numba"]["backend"] == "numba" and res["numpy"]["backend"] == "numpy"
    keys = [k for k in res["numba"] if k != "backend"]
    width = max(map(len, keys))
    print(f"{'kernel':<{width}}  {'numba [s]':>10}  {'numpy [s]':>10}  {'speedup':>8}")
    for k in keys:
        a, b = res["numba"][k], res["numpy"][k]
        print(f"{k:<{width}}  {a:10.4f}  {b:10.4f}  {b / a:7.1f}x")
    print(f"(total wall time {time.perf_counter() - t0:.1f}s, best of {args.repeat})")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(res, fh, indent=2)


if __name__ == "__main__":
    main()
