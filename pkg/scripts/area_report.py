"""Print areas, overlap, size gain and containment counts for one grid.

    python3 scripts/area_report.py --n 2000
"""
import argparse

from psoqe.raster import GridSpec, compare_regions


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000, help="cells per axis")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    rep = compare_regions(GridSpec(0.0, 4.0, -1.0, 1.0, args.n, args.n), args.threads)
    print(f"grid {args.n} x {args.n} on c in (0, 4], w in (-1, 1)")
    for name, value in rep["areas"].items():
        print(f"  area {name:<18} {value:.5f}")
    print(f"  |sys2 & Gazi| / |Gazi|       {rep['overlap_fraction']:.5f}")
    print(f"  A_sys2 / A_gazi - 1          {rep['relative_size_gain']:.5f}")
    print(f"  (A_sys2 - A_gazi) / A_sys2   {rep['relative_size_gain_of_sys2']:.5f}")
    print(f"  |sys1 \\ sys2| / |sys1|       {rep['sys1_outside_sys2_fraction']:.5f}")
    for name, count in rep["subset_checks"].items():
        print(f"  violations {name}: {count}")
    for name, frac in rep["agreement"].items():
        print(f"  agreement {name}: {frac:.5f}")


if __name__ == "__main__":
    main()
