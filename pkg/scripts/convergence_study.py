"""Refinement tables for the path integral and for the GV pairing identities.

    python scripts/convergence_study.py --config default --halvings 2
"""
import argparse

import numpy as np

from folichar import gvnum
from folichar.cli import resolve_config
from folichar.folmodel import CircleDiffeo, Germ, SuspensionModel
from folichar.suites import ensemble_order, gv_ladder


def path_table(model, steps=(4, 8, 16, 32, 64)):
    print("path integral: |error| against delta, per Simpson step count")
    print("  n     z   " + "".join(f"{s:>11d}" for s in steps))
    for n in (1, 2, 3, -1, -3):
        for z in (0.4, 2.9):
            d = float(model.delta_analytic(Germ(n, z)))
            errs = [abs(model.path_integral_curvature(Germ(n, z), steps=s) - d) for s in steps]
            print(f"{n:3d} {z:5.2f} " + "".join(f"{e:11.2e}" for e in errs))


def gv_table(cfg, model, halvings):
    ks = cfg.gv.kernels
    pairs = list(zip(ks, ks[1:]))[:4]
    triples = [tuple(ks[i:i + 3]) for i in range(len(ks) - 2)][:4]
    print("\nGV pairing residuals (ensemble RMS) under grid halving")
    print(f"{'grid':>12s} {'antisym rms':>12s} {'order':>6s} {'hochschild rms':>15s} {'order':>6s}")
    prev = None
    for g in gv_ladder(cfg.gv.grid, halvings):
        anti = [gvnum.antisymmetry(a.sample(g), b.sample(g), model).value for a, b in pairs]
        hoch = [gvnum.hochschild_b(a.sample(g), b.sample(g), c.sample(g), model).value for a, b, c in triples]
        rms = lambda v: float(np.sqrt(np.mean(np.square(v))))
        oa = ensemble_order(prev[0], anti) if prev else float("nan")
        oh = ensemble_order(prev[1], hoch) if prev else float("nan")
        print(f"{g.nx:>4d}x{g.nz}x{g.nt:<4d} {rms(anti):12.3e} {oa:6.2f} {rms(hoch):15.3e} {oh:6.2f}")
        prev = (anti, hoch)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="default")
    ap.add_argument("--halvings", type=int, default=2)
    ap.add_argument("--skip-gv", action="store_true")
    args = ap.parse_args()
    cfg = resolve_config(args.config)
    model = SuspensionModel(CircleDiffeo(cfg.model.a, cfg.model.b), cfg.model.profile_order, cfg.model.steps)
    path_table(model)
    if not args.skip_gv:
        gv_table(cfg, model, args.halvings)


if __name__ == "__main__":
    main()
