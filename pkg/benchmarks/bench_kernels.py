"""Time the compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Both
backends are imported directly, so the environment switch is not needed.
Prints one line per kernel with the per-call time of each backend and the
speed-up, and checks that the two backends agree bit for bit.
"""
import argparse
import timeit

from hyperfront import _pykernels as py

try:
    from hyperfront import _ckernels as cy
except ImportError:  # pragma: no cover
    cy = None

ARGS = (1.4, 0.5, 0.1)

CASES = {
    "axial_velocity": lambda k: k.axial_velocity(1.01, 0.02, *ARGS),
    "eigen": lambda k: k.eigen(1, 1.01, 0.02, *ARGS),
    "rarefaction": lambda k: k.rarefaction(2, 0.01, 1.01, 0.02, *ARGS),
    "shock": lambda k: k.shock(1, -0.01, 1.01, 0.02, *ARGS),
    "interior": lambda k: k.interior(1.01, 0.02, 0.99, -0.01, *ARGS),
    "boundary": lambda k: k.boundary(1.01, 0.02, -0.05, *ARGS),
}


def bench(fn, mod, repeat):
    number = max(1, repeat)
    return min(timeit.repeat(lambda: fn(mod), number=number, repeat=3)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args(argv)
    if cy is None:
        print("compiled backend not built; only the fallback is available")
    print("%-16s %12s %12s %8s  %s" % ("kernel", "python [us]", "cython [us]",
                                      "speedup", "agree"))
    for name, fn in CASES.items():
        tp = bench(fn, py, args.repeat)
        if cy is None:
            print("%-16s %12.2f" % (name, tp * 1e6))
            continue
        tc = bench(fn, cy, args.repeat)
        agree = fn(py) == fn(cy)
        print("%-16s %12.2f %12.2f %8.1f  %s" % (name, tp * 1e6, tc * 1e6, tp / tc, agree))


if __name__ == "__main__":
    main()
