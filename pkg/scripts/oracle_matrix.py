"""Closed form against the finite-difference oracle over a grid of cases.

Prints one line per (parameter set, l) with the worst relative error over
the lowest levels and the observed convergence order.

    python3 scripts/oracle_matrix.py --levels 6
"""
import argparse
import time

import numpy as np

from qdisloc.analytic import energy
from qdisloc.errors import PreconditionError
from qdisloc.oracle import solve_oracle
from qdisloc.params import QuantumNumbers, ScalarPotential, SystemParams

CASES = {
    "oscillator": (SystemParams(), None),
    "case1-a": (SystemParams(m=1, Q=1, lam=0.01, Cm=1, beta=0.5, k=0.5), None),
    "case1-b": (SystemParams(m=2, Q=-0.5, lam=0.3, Cm=1.5, beta=0.2, k=1.3), None),
    "case1-c": (SystemParams(m=0.7, Q=1.5, lam=-0.2, Cm=-0.8, beta=1.1, k=-0.4), None),
    "fig1-Q1": (SystemParams(m=1, Q=1, lam=1, Cm=1, beta=0.5, k=0.5), ScalarPotential(1, 1, 1)),
    "fig1-Q0.5": (SystemParams(m=1, Q=0.5, lam=1, Cm=1, beta=0.5, k=0.5), ScalarPotential(1, 1, 1)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=6)
    ap.add_argument("--lmax", type=int, default=3)
    args = ap.parse_args()

    print(f"{'case':<10} {'l':>3} {'max_rel_err':>12} {'order':>14} {'seconds':>8}")
    for name, (p, v) in CASES.items():
        for l in range(-args.lmax, args.lmax + 1):
            t0 = time.perf_counter()
            try:
                res = solve_oracle(p, v, QuantumNumbers(0, l), args.levels, vectors=False)
            except PreconditionError as exc:
                print(f"{name:<10} {l:>3} {type(exc).__name__}")
                continue
            exact = np.array([energy(p, v, QuantumNumbers(n, l)) for n in range(args.levels)])
            err = np.max(np.abs(res.energies - exact) / np.abs(exact))
            finite = res.order[np.isfinite(res.order)]
            order = f"{finite.min():.3f}-{finite.max():.3f}" if finite.size else "n/a"
            print(f"{name:<10} {l:>3} {err:12.2e} {order:>14} {time.perf_counter() - t0:8.2f}")


if __name__ == "__main__":
    main()
