"""Energy levels n = 1, 2, 3 against the magnetic field constant Cm (case 2).

Fixed inputs: l = lambda = m = Q = C1 = C2 = C3 = 1, k = beta = 0.5.

    python3 scripts/fig2_sweep.py --outdir results --verify
"""
import argparse
from pathlib import Path

from qdisloc.params import ScalarPotential, SystemParams
from qdisloc.sweep import SweepSpec, emit_csv, emit_plot, run_sweep, summarize


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", type=Path, default=Path("results"))
    ap.add_argument("--from", dest="start", type=float, default=0.5)
    ap.add_argument("--to", dest="stop", type=float, default=3.0)
    ap.add_argument("--steps", type=int, default=51)
    ap.add_argument("--verify", action="store_true", help="fill the oracle columns")
    args = ap.parse_args()

    spec = SweepSpec(
        "Cm", args.start, args.stop, args.steps, (1, 2, 3),
        SystemParams(m=1, Q=1, lam=1, Cm=1, beta=0.5, k=0.5),
        ScalarPotential(1, 1, 1), l=1,
    )
    rows = run_sweep(spec, verify=args.verify)
    args.outdir.mkdir(parents=True, exist_ok=True)
    emit_csv(rows, args.outdir / "fig2_Cm.csv")
    emit_plot(rows, args.outdir / "fig2_Cm.svg")
    print(summarize(rows))


if __name__ == "__main__":
    main()
