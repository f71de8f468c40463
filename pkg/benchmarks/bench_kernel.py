"""Benchmark: compiled Cython kernel vs the pure-Python fallback.

Times the exponent-dict convolution on its own and inside a realistic
workload (the Hall-Littlewood four-punctured-sphere gauging), and checks
that both backends produce identical results.

    python benchmarks/bench_kernel.py [--orders 6 8]
"""

import argparse
import importlib
import random
import time
from fractions import Fraction

from scindex import _kernel_py

try:
    from scindex import _kernel_c
except ImportError:
    _kernel_c = None


def random_poly(rng, nvars, nterms):
    p = {}
    for _ in range(nterms):
        e = tuple(rng.randrange(-6, 7) for _ in range(nvars))
        c = rng.randrange(-9, 10) or 1
        if rng.random() < 0.1:
            c = Fraction(c, rng.randrange(2, 5))
        p[e] = c
    return p


def bench_raw_mul(impl, polys, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for pa, pb in polys:
            acc = {}
            impl.poly_mul_into(acc, pa, pb)
            impl.poly_canonize(acc)
        best = min(best, time.perf_counter() - t0)
    return best, acc


def bench_index_workload(impl, order):
    """S_{SU(2),0,4} Hall-Littlewood gauging with the kernel swapped in."""
    import scindex.kernel as kernel
    kernel.poly_mul_into = impl.poly_mul_into
    kernel.poly_axpy = impl.poly_axpy
    kernel.poly_canonize = impl.poly_canonize
    import scindex.series
    importlib.reload(scindex.series)
    import scindex.gammas
    importlib.reload(scindex.gammas)
    import scindex.nilpotent
    importlib.reload(scindex.nilpotent)
    import scindex.lie
    importlib.reload(scindex.lie)
    import scindex.engine
    importlib.reload(scindex.engine)
    from scindex.engine import (Gauge, Hyp, LimitKind, Product, SlotDecl,
                                eval_expr, rep_weights, tensor_weights)

    def trin(a, b, c):
        return Hyp((SlotDecl(a, "su2"), SlotDecl(b, "su2"), SlotDecl(c, "su2")),
                   tuple(tensor_weights(rep_weights("su2"), rep_weights("su2"),
                                        rep_weights("su2"))))

    expr = Gauge("su2", "x", Product((trin("a", "b", "x"), trin("x", "c", "d"))))
    t0 = time.perf_counter()
    series = eval_expr(expr, LimitKind.HALL_LITTLEWOOD, order)
    return time.perf_counter() - t0, series.to_json()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--orders", type=int, nargs="+", default=[8, 10])
    args = ap.parse_args()

    if _kernel_c is None:
        print("compiled kernel not available; rebuild with `pip install -e .` "
              "to compare (running pure-only numbers)")
    rng = random.Random(1)
    polys = [(random_poly(rng, 4, 400), random_poly(rng, 4, 400)) for _ in range(12)]

    print("raw convolution (12 products of 400-term 4-variable polynomials):")
    t_pure, acc_pure = bench_raw_mul(_kernel_py, polys)
    print(f"  pure      {t_pure * 1000:8.1f} ms")
    if _kernel_c is not None:
        t_c, acc_c = bench_raw_mul(_kernel_c, polys)
        print(f"  compiled  {t_c * 1000:8.1f} ms   ({t_pure / t_c:.2f}x)")
        assert acc_pure == acc_c, "kernels disagree!"

    for order in args.orders:
        print(f"\nS_{{SU(2),0,4}} Hall-Littlewood gauging at order {order}:")
        t_pure, json_pure = bench_index_workload(_kernel_py, order)
        print(f"  pure      {t_pure:8.3f} s")
        if _kernel_c is not None:
            t_c, json_c = bench_index_workload(_kernel_c, order)
            print(f"  compiled  {t_c:8.3f} s   ({t_pure / t_c:.2f}x)")
            assert json_pure == json_c, "kernels disagree!"
    # restore the default selection for any later imports
    import scindex.kernel
    importlib.reload(scindex.kernel)


if __name__ == "__main__":
    main()
