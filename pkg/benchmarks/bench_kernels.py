"""Time the batch kernels under both backends.

    python3 benchmarks/bench_kernels.py [--n 100000] [--repeat 5]

Prints one row per kernel with the best wall time of each backend and the
speed-up of the compiled one.  Outputs are compared before timing.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from kwradial import kernels


def _inputs(rng: np.random.Generator, n: int) -> dict:
    a1 = rng.normal(size=(n, 4, 3))
    a2 = rng.normal(size=(n, 4, 3))
    w1 = rng.normal(size=(n, 6, 3))
    w2 = rng.normal(size=(n, 6, 3))
    return {
        "qmul": (rng.normal(size=(n, 4)), rng.normal(size=(n, 4))),
        "im_basis": (rng.normal(size=(n, 4)), rng.normal(size=(3, 4)), rng.uniform(0.5, 2.0, 3)),
        "wedge11": (a1, a2),
        "trace_density": (w1, w2),
        "bracket_sum": (a1, a2),
    }


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    py = kernels.get_backend("python")
    try:
        cy = kernels.get_backend("cython")
    except ImportError:
        cy = None
        print("compiled extension not built; timing the numpy fallback only")

    inputs = _inputs(np.random.default_rng(args.seed), args.n)
    print(f"{'kernel':<14}{'python [ms]':>14}{'cython [ms]':>14}{'speed-up':>10}")
    for name, call_args in inputs.items():
        f_py = getattr(py, name)
        t_py = min(timeit.repeat(lambda: f_py(*call_args), number=1, repeat=args.repeat))
        if cy is None:
            print(f"{name:<14}{1e3 * t_py:>14.3f}{'-':>14}{'-':>10}")
            continue
        f_cy = getattr(cy, name)
        if not np.allclose(f_py(*call_args), f_cy(*call_args), rtol=1e-12, atol=1e-12):
            raise SystemExit(f"{name}: backends disagree")
        t_cy = min(timeit.repeat(lambda: f_cy(*call_args), number=1, repeat=args.repeat))
        print(f"{name:<14}{1e3 * t_py:>14.3f}{1e3 * t_cy:>14.3f}{t_py / t_cy:>10.2f}")


if __name__ == "__main__":
    main()
