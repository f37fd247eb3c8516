"""Boolean rasters of regions over a (c, w) window and their set statistics."""
from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .model import DomainError, Variant
from .regions import MATCHED_PAIRS, RegionId, region_mask


@dataclass(frozen=True)
class GridSpec:
    """Cell-centred grid; ``c_min`` may be 0 since samples sit at cell centres."""

    c_min: float = 0.0
    c_max: float = 4.0
    w_min: float = -1.0
    w_max: float = 1.0
    n_c: int = 2000
    n_w: int = 2000

    def __post_init__(self) -> None:
        if not 0 <= self.c_min < self.c_max:
            raise DomainError(f"need 0 <= c_min < c_max, got {self.c_min}, {self.c_max}")
        if not -1 <= self.w_min < self.w_max <= 1:
            raise DomainError(f"need -1 <= w_min < w_max <= 1, got {self.w_min}, {self.w_max}")
        if self.n_c < 16 or self.n_w < 16:
            raise DomainError("grids need at least 16 cells per axis")

    @classmethod
    def parse(cls, text: str) -> GridSpec:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 6:
            raise ValueError("grid is cMin,cMax,wMin,wMax,nC,nW")
        c0, c1, w0, w1 = (float(p) for p in parts[:4])
        return cls(c0, c1, w0, w1, int(parts[4]), int(parts[5]))

    @property
    def c_centers(self) -> np.ndarray:
        return self.c_min + (np.arange(self.n_c) + 0.5) * (self.c_max - self.c_min) / self.n_c

    @property
    def w_centers(self) -> np.ndarray:
        return self.w_min + (np.arange(self.n_w) + 0.5) * (self.w_max - self.w_min) / self.n_w

    @property
    def cell_area(self) -> float:
        return (self.c_max - self.c_min) * (self.w_max - self.w_min) / (self.n_c * self.n_w)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """``(C, W)`` arrays of shape ``(n_c, n_w)``."""
        return np.meshgrid(self.c_centers, self.w_centers, indexing="ij")

    def as_dict(self) -> dict:
        return asdict(self)

    def scaled(self, n_c: int, n_w: int) -> GridSpec:
        return GridSpec(self.c_min, self.c_max, self.w_min, self.w_max, n_c, n_w)


def boundary_mask(bits: np.ndarray) -> np.ndarray:
    """Cells with at least one 4-neighbour of different membership."""
    out = np.zeros_like(bits, dtype=bool)
    dc = bits[1:, :] != bits[:-1, :]
    dw = bits[:, 1:] != bits[:, :-1]
    out[1:, :] |= dc
    out[:-1, :] |= dc
    out[:, 1:] |= dw
    out[:, :-1] |= dw
    return out


@dataclass(frozen=True)
class Raster:
    grid: GridSpec
    bits: np.ndarray  # shape (n_c, n_w)
    region: str

    def __post_init__(self) -> None:
        if self.bits.shape != (self.grid.n_c, self.grid.n_w):
            raise ValueError("bits shape does not match grid")

    @property
    def boundary(self) -> np.ndarray:
        return boundary_mask(self.bits)

    @property
    def count(self) -> int:
        return int(self.bits.sum())


def rasterize_fn(fn, grid: GridSpec, label: str, threads: int = 1) -> Raster:
    """Rasterize an arbitrary vectorized predicate ``fn(C, W) -> bool array``."""
    cs, ws = grid.c_centers, grid.w_centers
    n_chunks = max(1, min(grid.n_c, 4 * threads))
    chunks = np.array_split(np.arange(grid.n_c), n_chunks)

    def run(idx):
        C, W = np.meshgrid(cs[idx], ws, indexing="ij")
        return np.broadcast_to(np.asarray(fn(C, W), dtype=bool), C.shape)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(idx) for idx in chunks]
    return Raster(grid, np.concatenate(parts, axis=0), label)


def rasterize(region: RegionId | str, grid: GridSpec, variant: Variant | str | None = None,
              threads: int = 1) -> Raster:
    region = RegionId.parse(region, variant)
    label = region.value
    if region.needs_variant:
        label = f"{label}[{Variant.parse(variant).value}]"
    return rasterize_fn(lambda C, W: region_mask(region, C, W, variant), grid, label, threads)


def area(r: Raster) -> float:
    return r.count * r.grid.cell_area


def _same_grid(a: Raster, b: Raster) -> None:
    if a.grid != b.grid:
        raise ValueError("rasters live on different grids")


@dataclass(frozen=True)
class SetOps:
    intersection: Raster
    union: Raster
    a_minus_b: Raster
    subset_fraction_a_in_b: float
    overlap_fraction_of_b: float


def set_ops(a: Raster, b: Raster) -> SetOps:
    _same_grid(a, b)
    inter = a.bits & b.bits
    n_inter = int(inter.sum())
    return SetOps(
        intersection=Raster(a.grid, inter, f"({a.region})&({b.region})"),
        union=Raster(a.grid, a.bits | b.bits, f"({a.region})|({b.region})"),
        a_minus_b=Raster(a.grid, a.bits & ~b.bits, f"({a.region})-({b.region})"),
        subset_fraction_a_in_b=1.0 if a.count == 0 else n_inter / a.count,
        overlap_fraction_of_b=(1.0 if b.count == 0 else n_inter / b.count),
    )


def agreement(a: Raster, b: Raster) -> float:
    """Fraction of cells outside both boundary bands on which a and b agree."""
    _same_grid(a, b)
    keep = ~(a.boundary | b.boundary)
    if not keep.any():
        return 1.0
    return float((a.bits == b.bits)[keep].mean())


def subset_violations(a: Raster, b: Raster) -> int:
    """Cells in a but not in b, outside both boundary bands."""
    _same_grid(a, b)
    keep = ~(a.boundary | b.boundary)
    return int((a.bits & ~b.bits & keep).sum())


def write_csv(r: Raster, path) -> None:
    """``c,w,member`` rows, w outer and c inner."""
    cs, ws = r.grid.c_centers, r.grid.w_centers
    c_txt = [f"{c:.9g}" for c in cs]
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["c", "w", "member"])
        for j, w in enumerate(ws):
            w_txt = f"{w:.9g}"
            col = r.bits[:, j]
            out.writerows((c_txt[i], w_txt, int(col[i])) for i in range(len(cs)))


def read_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    return data[:, 0], data[:, 1], data[:, 2].astype(bool)


# reference value of the relative size gain of the Sigma2 union over Gazi
REFERENCE_SIZE_GAIN = 0.2309


def compare_regions(grid: GridSpec | None = None, threads: int = 1) -> dict:
    """Areas, overlaps, containments and oracle agreement on one grid.

    The size gain of the Sigma2 union over Gazi is given both as
    ``A_sys2 / A_gazi - 1`` and as ``(A_sys2 - A_gazi) / A_sys2``;
    ``size_gain_reference_match`` names the one closer to ``REFERENCE_SIZE_GAIN``.
    """
    grid = grid or GridSpec()
    ras = {}

    def get(region, variant=None):
        key = (region, variant)
        if key not in ras:
            ras[key] = rasterize(region, grid, variant, threads)
        return ras[key]

    u1 = get(RegionId.ORACLE_UNION_SYS1)
    u2 = get(RegionId.ORACLE_UNION_SYS2)
    gz = get(RegionId.GAZI)
    pl = get(RegionId.POLI)
    kd = get(RegionId.KADIRKAMANATHAN)
    areas = {r.region: area(r) for r in (u1, u2, gz, pl, kd)}

    subset_checks = {}
    for var in Variant:
        ident = get(RegionId.ORACLE_IDENTITY, var)
        for other in (RegionId.ORACLE_DIAGONAL, RegionId.ORACLE_OFFDIAG):
            name = f"{var.value}: OracleIdentity <= {other.value}"
            subset_checks[name] = subset_violations(ident, get(other, var))
    subset_checks["Kadirkamanathan <= OracleUnionSys2"] = subset_violations(kd, u2)
    subset_checks["OracleUnionSys2 <= Poli"] = subset_violations(u2, pl)

    agreements = {}
    for analytic, (var, oracle) in MATCHED_PAIRS.items():
        agreements[analytic.value] = agreement(get(analytic), get(oracle, var))

    ops = set_ops(u2, gz)
    a2, ag = areas[u2.region], areas[gz.region]
    gain_ratio = a2 / ag - 1 if ag > 0 else float("nan")
    gain_share = (a2 - ag) / a2 if a2 > 0 else float("nan")
    ref = REFERENCE_SIZE_GAIN
    match = ("ratio_minus_one" if abs(gain_ratio - ref) < abs(gain_share - ref)
             else "difference_over_sys2")
    sys1_only = set_ops(u1, u2).a_minus_b.count / max(u1.count, 1)
    return {
        "areas": areas,
        "overlap_fraction": ops.overlap_fraction_of_b,
        "relative_size_gain": gain_ratio,
        "relative_size_gain_of_sys2": gain_share,
        "size_gain_reference_match": match,
        "subset_violations": int(sum(subset_checks.values())),
        "subset_checks": subset_checks,
        "agreement_fraction": min(agreements.values()),
        "agreement": agreements,
        "sys1_outside_sys2_fraction": sys1_only,
        "grid": grid.as_dict(),
    }
