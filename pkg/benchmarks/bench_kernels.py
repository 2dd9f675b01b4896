"""Compare the compiled and NumPy finite-volume kernels.

Usage::

    python benchmarks/bench_kernels.py [--cells 4000] [--repeat 20]

Times primitive recovery, interface sampling and one full LxF run on the
symmetric colliding-flow problem for each available backend.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from chaplygin_riemann import kernels


def _data(cells, seed=0):
    rng = np.random.default_rng(seed)
    n = rng.uniform(0.1, 5.0, cells)
    rho = rng.uniform(1.05, 20.0, cells)
    v = rng.uniform(-0.95, 0.95, cells)
    return n, rho, v


def bench_backend(name, cells, repeat):
    k = kernels.get_backend(name)
    n, rho, v = _data(cells)
    D, M, En = k.prim_to_cons(n, rho, v, 1.0)
    nR, rR, vR = np.roll(n, 1), np.roll(rho, 1), np.roll(v, 1)
    results = {
        "prim_to_cons": min(timeit.repeat(lambda: k.prim_to_cons(n, rho, v, 1.0), number=1, repeat=repeat)),
        "recover": min(timeit.repeat(lambda: k.recover(D, M, En, 1.0), number=1, repeat=repeat)),
        "godunov_states": min(
            timeit.repeat(lambda: k.godunov_states(n, rho, v, nR, rR, vR, 1.0), number=1, repeat=repeat)
        ),
    }
    return results


def bench_run(name, cells):
    """Wall time of a full LxF run in a fresh interpreter pinned to ``name``."""
    env = dict(os.environ)
    env.pop("CHAPLYGIN_RIEMANN_PURE", None)
    if name == "numpy":
        env["CHAPLYGIN_RIEMANN_PURE"] = "1"
    code = (
        "import time\n"
        "from chaplygin_riemann import fvm, kernels\n"
        "from chaplygin_riemann.state import PrimitiveState\n"
        f"g = fvm.Grid1D(-1.0, 1.0, {cells})\n"
        "ini = fvm.riemann_initial(PrimitiveState(1, 2, 0.8), PrimitiveState(1, 2, -0.8))\n"
        "t0 = time.perf_counter()\n"
        "fvm.run(ini, g, fvm.SimConfig(t_end=0.5, flux='lxf'))\n"
        "print(kernels.BACKEND, time.perf_counter() - t0)\n"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    backend, seconds = out.stdout.split()
    return backend, float(seconds)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cells", type=int, default=4000)
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args(argv)

    names = ["numpy"]
    try:
        kernels.get_backend("cython")
        names.insert(0, "cython")
    except ImportError:
        print("compiled backend not built; timing the NumPy kernels only")

    table = {name: bench_backend(name, args.cells, args.repeat) for name in names}
    print(f"kernel timings, {args.cells} cells, best of {args.repeat} (ms)")
    print(f"{'kernel':<16}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for kernel in table[names[0]]:
        cells = [table[n][kernel] * 1e3 for n in names]
        line = f"{kernel:<16}" + "".join(f"{x:>12.3f}" for x in cells)
        if len(names) == 2:
            line += f"{cells[1] / cells[0]:>11.1f}x"
        print(line)

    print(f"\nfull LxF run to t = 0.5, {args.cells} cells")
    for name in names:
        backend, seconds = bench_run(name, args.cells)
        print(f"{backend:<16}{seconds:>12.3f} s")


if __name__ == "__main__":
    main()
