"""Compare the compiled and pure-Python kernels on the workloads that matter.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import time

from hjpolytope import certify, hj, kernels
from hjpolytope.realize import DrawingConfig, realize_pipeline


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def workloads():
    real = realize_pipeline(DrawingConfig(5, 2, seed=1))
    rows = certify.homogeneous_integer_rows(real.point_list())
    hull = certify.enumerate_facets(real)[0]
    rng = random.Random(0)
    big = [[rng.randint(-2**200, 2**200) for _ in range(12)] for _ in range(12)]
    h33 = hj.hj_hypergraph(3, 3)
    triples = sorted({tuple(sorted(rng.sample(range(40), 3))) for _ in range(120)})
    tri_masks = [sum(1 << v for v in e) for e in triples]
    return {
        "facets (5,2), C(25,5) subsets": lambda k: k.enumerate_facets(rows, 5),
        "hitting set HJ(3,3)": lambda k: k.hitting_set(27, h33.edge_masks()),
        "hitting set, 120 random triples": lambda k: k.hitting_set(40, tri_masks),
        "hitting set H(Q) at (5,2)": lambda k: k.hitting_set(25, hull.edge_masks()),
        "det 12x12, 200-bit entries": lambda k: k.bareiss_det(big),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    found = kernels.backends()
    if "cython" not in found:
        print("compiled kernels unavailable; only the Python backend will run")
    names = sorted(found)
    print(f"{'workload':34s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, fn in workloads().items():
        times = {n: best_of(lambda: fn(found[n]), args.repeat) for n in names}
        row = f"{label:34s}" + "".join(f"{times[n]:11.4f}s" for n in names)
        if len(names) == 2:
            row += f"{times['python'] / times['cython']:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
