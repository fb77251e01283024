"""Time the numba and numpy kernel backends on the workloads the package runs.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from wittconics import kernels
from wittconics._accel import HAVE_NUMBA
from wittconics.finitefield import field_as_hyperfield
from wittconics.localglobal import local_square_class_hyperfield


def workloads():
    F = field_as_hyperfield(31)
    TF, mulF, negF = F.add_tensor(), np.array(F.mul), np.array(F.neg)
    Q2 = local_square_class_hyperfield(2)
    T2 = Q2.add_tensor()
    return [
        ("assoc F_31", lambda b: kernels.assoc_violation(TF, backend=b)),
        ("distributivity F_31", lambda b: kernels.distributivity_violation(TF, mulF, backend=b)),
        ("reversibility F_31", lambda b: kernels.reversibility_violation(TF, negF, backend=b)),
        ("assoc Q(Q_2)", lambda b: kernels.assoc_violation(T2, backend=b)),
        ("point search (2, 3) H=1500", lambda b: kernels.point_search(3, 2, 1500, backend=b)),
        ("point search (-23, 29) H=1500", lambda b: kernels.point_search(-23, 29, 1500, backend=b)),
        ("local witness 2^8", lambda b: kernels.local_witness((1, 1, 1), 2, 8, backend=b)),
        ("local witness 47^3", lambda b: kernels.local_witness((1, 5, -47), 47, 3, backend=b)),
    ]


def best_of(fn, backend, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(backend)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    jobs = workloads()
    for name, fn in jobs:
        results = {b: fn(b) for b in backends}  # also compiles the numba kernels
        assert len(set(map(str, results.values()))) == 1, (name, results)
    print(f"{'workload':32s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, fn in jobs:
        ts = [best_of(fn, b, args.repeat) for b in backends]
        row = f"{name:32s}" + "".join(f"{t * 1e3:10.2f}ms" for t in ts)
        if len(ts) == 2:
            row += f"{ts[0] / ts[1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
