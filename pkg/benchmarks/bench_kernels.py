"""Time the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--dims 64,128,256]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from qdeform.kernels import _pykernels
from qdeform.oscillator import preset, structure_sequence
from qdeform.polynomials import recurrence_coefficients

try:
    from qdeform.kernels import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _best(fn, repeat: int) -> float:
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timing repeats, best is reported (default 5)")
    ap.add_argument("--dims", default="64,128,256", help="matrix sizes and recurrence depths (default 64,128,256)")
    args = ap.parse_args(argv)
    dims = [int(d) for d in args.dims.split(",")]
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled extension not built; timing the fallback only")
    params = preset("hermite_I", 0.5)
    xs = np.linspace(-2.0, 2.0, 200)
    print(f"{'kernel':<28}{'size':>6}" + "".join(f"{name:>14}" for name, _ in backends) + ("   speedup" if len(backends) == 2 else ""))
    for d in dims:
        a, b = recurrence_coefficients("discrete_I", params, d)
        off = structure_sequence(params, d - 1)
        for label, call in (
            ("recurrence_table (200 x)", lambda m: m.recurrence_table(xs, a, b, d)),
            ("zero_diagonal_jacobi_eigvals", lambda m: m.zero_diagonal_jacobi_eigvals(off)),
        ):
            times = [_best(lambda m=m: call(m), args.repeat) for _, m in backends]
            row = f"{label:<28}{d:>6}" + "".join(f"{t * 1e3:>12.3f}ms" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>9.1f}x"
            print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
