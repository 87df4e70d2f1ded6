"""Timing comparison of the two kernel paths (numba JIT vs pure numpy).

Runs the three workloads that dominate production runs:

  * statevector batch: one preparation + evolution circuit applied to a
    (2^width, members) batch, the shape used by ensemble sampling;
  * density march: row+column gate application on a 2^width x 2^width
    matrix, the shape used by exact-initialization and noisy runs;
  * protocol cell: a full grid_probs call for one (site, time) cell.

Usage: python benchmarks/bench_kernels.py [--width 8] [--members 256]
       [--repeats 5]

The numba path is warmed once before timing so JIT compilation is not
counted.  Expect modest wins only: the numpy path is already vectorised,
so the JIT mostly helps the many-small-slices regime (density marches).
"""

import argparse
import time

import numpy as np

from scramble_probe import backends
from scramble_probe.ising import TrotterPlan, build_hamiltonian, trotter_circuit
from scramble_probe.protocol import ProtocolConfig, grid_probs
from scramble_probe.sim import apply_gate_inplace, random_state_circuit


def batch_workload(width, members, rng):
    circ = random_state_circuit(width, 4, rng).concat(
        trotter_circuit(build_hamiltonian(width, 1.0, 1.0, 0.3), TrotterPlan.for_time(1.0, 0.1)).widened(width)
    )
    a0 = rng.normal(size=(2**width, members)) + 1j * rng.normal(size=(2**width, members))

    def run():
        a = np.ascontiguousarray(a0.copy())
        for g in circ.gates:
            apply_gate_inplace(a, g, width)
        return a

    return run


def density_workload(width, rng):
    circ = trotter_circuit(
        build_hamiltonian(width, 1.0, 1.0, 0.3), TrotterPlan.for_time(1.0, 0.1)
    )
    rho0 = rng.normal(size=(2**width, 2**width)) + 1j * rng.normal(size=(2**width, 2**width))

    def run():
        rho = np.ascontiguousarray(rho0.copy())
        for g in circ.gates:
            apply_gate_inplace(rho, g, width)
            apply_gate_inplace(rho, g, width, cols=True, conj=True)
        return rho

    return run


def protocol_workload(width, members):
    cfg = ProtocolConfig(
        hamiltonian=build_hamiltonian(width - 1, 1.0, 1.0, 0.3),
        op_site=(width - 1 + 1) // 2,
        op_pair=("X", "Y"),
        ensemble_size=members,
        seed=0,
    )

    def run():
        return grid_probs(cfg, ["X", "Y"], [cfg.op_site], [1.0])

    return run


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--width", type=int, default=8)
    parser.add_argument("--members", type=int, default=256)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    workloads = [
        ("statevector batch", batch_workload(args.width, args.members, rng)),
        ("density march", density_workload(args.width, rng)),
        ("protocol cell", protocol_workload(args.width, args.members)),
    ]

    paths = ["numpy"]
    try:
        with backends.using("numba"):
            for _, fn in workloads:
                fn()  # warm the JIT cache
        paths.append("numba")
    except ImportError:
        print("numba not importable; timing the numpy path only")

    print(f"width={args.width} members={args.members} best of {args.repeats}")
    header = f"{'workload':<20}" + "".join(f"{p:>12}" for p in paths)
    if len(paths) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name, fn in workloads:
        cells = []
        for p in paths:
            with backends.using(p):
                cells.append(best_of(fn, args.repeats))
        line = f"{name:<20}" + "".join(f"{c * 1e3:>10.1f}ms" for c in cells)
        if len(cells) == 2:
            line += f"{cells[0] / cells[1]:>9.2f}x"
        print(line)


if __name__ == "__main__":
    main()
