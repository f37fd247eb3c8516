"""Write raster CSVs for every region plus the Sigma1 diagonal branch curves.

    python3 scripts/region_rasters.py --out results/rasters --n 400
"""
import argparse
import csv
import json
from pathlib import Path

import numpy as np

from psoqe import __version__
from psoqe.model import Variant
from psoqe.raster import GridSpec, rasterize, write_csv
from psoqe.regions import RegionId, sys1_diagonal_boundary

SETS = {
    "sys1": [(RegionId.ORACLE_IDENTITY, Variant.SIGMA1), (RegionId.ORACLE_DIAGONAL, Variant.SIGMA1),
             (RegionId.ORACLE_OFFDIAG, Variant.SIGMA1), (RegionId.ORACLE_UNION_SYS1, None),
             (RegionId.SYS1_IDENTITY, None), (RegionId.SYS1_DIAGONAL, None),
             (RegionId.SYS1_OFFDIAG, None)],
    "sys2": [(RegionId.ORACLE_IDENTITY, Variant.SIGMA2), (RegionId.ORACLE_DIAGONAL, Variant.SIGMA2),
             (RegionId.ORACLE_OFFDIAG, Variant.SIGMA2), (RegionId.ORACLE_UNION_SYS2, None),
             (RegionId.SYS2_IDENTITY, None), (RegionId.SYS2_DIAGONAL, None),
             (RegionId.SYS2_OFFDIAG, None)],
    "comparison": [(RegionId.ORACLE_UNION_SYS1, None), (RegionId.ORACLE_UNION_SYS2, None),
                   (RegionId.GAZI, None), (RegionId.POLI, None),
                   (RegionId.KADIRKAMANATHAN, None)],
}


def write_branches(path: Path, n: int) -> None:
    w = np.linspace(-1, 1, n)
    lower, upper = sys1_diagonal_boundary(w)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["w", "c_lower", "c_upper"])
        for row in zip(w, lower, upper):
            out.writerow([f"{x:.9g}" for x in row])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/rasters")
    ap.add_argument("--n", type=int, default=400, help="cells per axis")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    grid = GridSpec(0.0, 4.0, -1.0, 1.0, args.n, args.n)
    manifest = {"version": __version__, "grid": grid.as_dict(), "files": {}}
    for group, regions in SETS.items():
        folder = Path(args.out) / group
        folder.mkdir(parents=True, exist_ok=True)
        for region, variant in regions:
            ras = rasterize(region, grid, variant, threads=args.threads)
            name = region.value if variant is None else f"{region.value}_{variant.value}"
            write_csv(ras, folder / f"{name}.csv")
            manifest["files"][f"{group}/{name}.csv"] = ras.count
            print(f"{group}/{name}: {ras.count} member cells")
    write_branches(Path(args.out) / "sys1" / "diagonal_branches.csv", 2001)
    (Path(args.out) / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
