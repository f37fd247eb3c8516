"""How often does the witness decay check pass at random interior member points?

The check compares successive ensemble means of V.  For each seed it repeats
the sampled-point run and records the failures, their second and fourth
moment radii, and the effective ensemble size ``(sum V)^2 / sum V^2`` at
several steps of one failing trajectory set.

    python3 scripts/witness_decay_study.py --seeds 800-811
"""
import argparse

import numpy as np

from psoqe.acceptance import criterion_8b
from psoqe.model import SwarmParams
from psoqe.qe import union_membership
from psoqe.simulate import SimConfig, trajectories


def effective_size(c: float, w: float, seed: int, trials: int, steps: int) -> np.ndarray:
    params = SwarmParams.sigma1(c, w)
    p1, p2, p3 = union_membership(params).witness.as_tuple()
    z = trajectories(SimConfig(params, trials=trials, steps=steps, seed=seed))
    V = p1 * z[..., 0] ** 2 + 2 * p2 * z[..., 0] * z[..., 1] + p3 * z[..., 1] ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        return V.sum(1) ** 2 / (V ** 2).sum(1)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", default="800-811")
    ap.add_argument("--level", default="full", choices=["quick", "full"])
    args = ap.parse_args()
    lo, hi = map(int, args.seeds.split("-"))
    passed = 0
    example = None
    for seed in range(lo, hi + 1):
        res = criterion_8b(args.level, seed=seed)
        passed += res.passed
        fails = res.detail["failures"]
        print(f"seed {seed}: {'pass' if res.passed else 'FAIL'}", end="")
        for f in fails:
            print(f"  ({f['c']:.4f}, {f['w']:.4f}) rho2={f['second_moment_radius']:.3f}"
                  f" rho4={f['fourth_moment_radius']:.3f}", end="")
            if example is None:
                example = (f["c"], f["w"], seed)
        print()
    print(f"{passed} of {hi - lo + 1} seeds pass")
    if example is not None:
        c, w, seed = example
        ess = effective_size(c, w, seed, res.detail["trials"], 500)
        steps = [0, 10, 50, 100, 200]
        print(f"effective ensemble size at ({c:.4f}, {w:.4f}), steps {steps}: "
              f"{np.round(ess[steps], 1).tolist()}")


if __name__ == "__main__":
    main()
