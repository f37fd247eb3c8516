"""Release criteria, runnable from the CLI (``psoqe verify``) and from pytest.

Each ``criterion_*`` function returns a :class:`CriterionResult`; tolerances
are fixed here and do not depend on the level.  ``level`` only selects the
grid and ensemble sizes where the criterion allows it.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .lyapunov import delta_v_coeffs, expected_delta_v, mc_expected_delta_v
from .model import PMatrix, StateVec, SwarmParams, Template, Variant, scaled_moments
from .qe import (TAU_MARGIN, UniPoly, certificate_margin, decide_membership, real_roots,
                 union_membership)
from .raster import (GridSpec, agreement, area, boundary_mask, rasterize, set_ops,
                     subset_violations)
from .regions import MATCHED_PAIRS, RegionId, sys1_diagonal_boundary
from .simulate import (Dynamics, SimConfig, Verdict, classify, run_ensemble,
                       moment_radius, trajectories, witness_decay_check)

LEVELS = {
    "quick": {"area_grid": 400, "trials": 1_000},
    "full": {"area_grid": 2000, "trials": 10_000},
}

WINDOW = GridSpec(0.0, 4.0, -1.0, 1.0, 400, 400)


@dataclass
class CriterionResult:
    number: int | str
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def __post_init__(self) -> None:
        self.passed = bool(self.passed)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.name}"

    def as_dict(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "seconds": round(self.seconds, 3), "detail": self.detail}


def _uniform_moment(k: int) -> Fraction:
    return Fraction(1, k + 1)


def _exact_drive_moments(variant: Variant) -> tuple[Fraction, Fraction]:
    """E r, E r^2 from the moments of U[0, 1], by exact expansion."""
    if variant is Variant.SIGMA1:
        m1 = 2 * _uniform_moment(1)
        m2 = 2 * _uniform_moment(2) + 2 * _uniform_moment(1) ** 2
        return m1, m2
    return _uniform_moment(1), _uniform_moment(2)


def criterion_1(level: str = "quick", seed: int = 101) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        for variant in Variant:
            if variant is Variant.SIGMA1:
                params = SwarmParams.sigma1(rng.uniform(0.01, 5), rng.uniform(-1, 1))
            else:
                params = SwarmParams.sigma2(rng.uniform(0, 3), rng.uniform(0.01, 3),
                                            rng.uniform(-1, 1))
            got = scaled_moments(params)
            r1, r2 = _exact_drive_moments(variant)
            g = Fraction(params.gain)
            want = (float(g * r1), float(g * g * r2))
            for a, b in zip((got.m1, got.m2), want):
                worst = max(worst, abs(a - b) / abs(b))
    return CriterionResult(1, "moment identities", worst <= 4 * np.finfo(float).eps,
                           {"max_rel_error": worst})


def criterion_2(level: str = "quick", seed: int = 202, trials: int = 1_000_000,
                cases: int = 50) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = 0
    for k in range(cases):
        variant = Variant.SIGMA1 if k % 2 == 0 else Variant.SIGMA2
        params = SwarmParams.from_gain(variant, rng.uniform(0.05, 4), rng.uniform(-1, 1))
        P = PMatrix(rng.uniform(0.1, 2), rng.uniform(-1, 1), rng.uniform(0.1, 2))
        z = StateVec(rng.uniform(-2, 2), rng.uniform(-2, 2))
        mean, se = mc_expected_delta_v(params, P, z, trials, seed=seed * 1000 + k)
        exact = expected_delta_v(params, P)(z.x, z.v)
        score = abs(mean - exact) / se if se > 0 else (0.0 if mean == exact else math.inf)
        worst = max(worst, score)
        failures += score > 4
    return CriterionResult(2, "E{dV} Monte-Carlo agreement", failures == 0,
                           {"max_abs_error_in_stderr": worst, "cases": cases,
                            "trials": trials})


def criterion_3(level: str = "quick", grid: GridSpec = WINDOW) -> CriterionResult:
    scores = {}
    for analytic, (variant, oracle) in MATCHED_PAIRS.items():
        scores[analytic.value] = agreement(rasterize(analytic, grid),
                                           rasterize(oracle, grid, variant))
    return CriterionResult(3, "oracle vs closed-form agreement >= 0.995",
                           min(scores.values()) >= 0.995, scores)


def criterion_4(level: str = "quick") -> CriterionResult:
    n = LEVELS[level]["area_grid"]
    grid = GridSpec(0.0, 4.0, -1.0, 1.0, n, n)
    u2 = rasterize(RegionId.ORACLE_UNION_SYS2, grid)
    gz = rasterize(RegionId.GAZI, grid)
    a2, ag = area(u2), area(gz)
    overlap = set_ops(u2, gz).overlap_fraction_of_b
    ok = abs(a2 - 3.44) <= 0.03 and abs(ag - 2.65) <= 0.02 and abs(overlap - 0.98) <= 0.01
    return CriterionResult(4, "region areas and overlap", ok,
                           {"grid": n, "area_sys2_union": a2, "area_gazi": ag,
                            "overlap_of_gazi": overlap,
                            "size_gain_ratio_minus_one": a2 / ag - 1,
                            "size_gain_over_sys2": (a2 - ag) / a2})


def criterion_5(level: str = "quick", grid: GridSpec = WINDOW) -> CriterionResult:
    viol = {}
    for variant in Variant:
        ident = rasterize(RegionId.ORACLE_IDENTITY, grid, variant)
        for other in (RegionId.ORACLE_DIAGONAL, RegionId.ORACLE_OFFDIAG):
            viol[f"{variant.value}: identity <= {other.value}"] = subset_violations(
                ident, rasterize(other, grid, variant))
    u1 = rasterize(RegionId.ORACLE_UNION_SYS1, grid)
    u2 = rasterize(RegionId.ORACLE_UNION_SYS2, grid)
    viol["Kadirkamanathan <= sys2 union"] = subset_violations(
        rasterize(RegionId.KADIRKAMANATHAN, grid), u2)
    viol["sys2 union <= Poli"] = subset_violations(u2, rasterize(RegionId.POLI, grid))
    outside = set_ops(u1, u2).a_minus_b.count / max(u1.count, 1)
    ok = all(v == 0 for v in viol.values()) and outside < 0.05
    return CriterionResult(5, "containments", ok,
                           {"violations": viol, "sys1_union_outside_sys2": outside})


def _scan_slacks(params: SwarmParams, template: Template, n: int = 10_000) -> np.ndarray:
    if template is Template.DIAGONAL:
        t = np.logspace(-6, 6, n)
        p1, p2, p3 = np.ones_like(t), np.zeros_like(t), t
    else:
        t = np.linspace(-1, 1, n + 2)[1:-1]
        p1, p2, p3 = np.ones_like(t), t, np.ones_like(t)
    d, e, a = delta_v_coeffs(params.variant, params.gain, params.w, p1, p2, p3)
    return np.minimum.reduce([-d, 4 * a * d - e * e, p1, p1 * p3 - p2 * p2])


def criterion_6(level: str = "quick", seed: int = 606, points: int = 500) -> CriterionResult:
    rng = np.random.default_rng(seed)
    stats = {"scan_found_but_missed": 0, "bad_witness": 0, "scale_mismatch": 0,
             "w_symmetry_mismatch": 0, "members": 0}
    for k in range(points):
        variant = Variant.SIGMA1 if k % 2 == 0 else Variant.SIGMA2
        gain = rng.uniform(0.01, 2.5)
        w = rng.uniform(-0.99, 0.99)
        params = SwarmParams.from_gain(variant, gain, w)
        mirrored = SwarmParams.from_gain(variant, gain, -w)
        for template in Template:
            dec = decide_membership(params, template)
            if template is not Template.IDENTITY:
                if (_scan_slacks(params, template) > TAU_MARGIN).any() and not dec.member:
                    stats["scan_found_but_missed"] += 1
            if dec.member:
                stats["members"] += 1
                if not certificate_margin(params, dec.witness) > TAU_MARGIN:
                    stats["bad_witness"] += 1
                for beta in (1e-3, 1.0, 1e3):
                    if not decide_membership(params, dec.witness.scaled(beta)).member:
                        stats["scale_mismatch"] += 1
            if template is not Template.OFFDIAG:
                if decide_membership(mirrored, template).member != dec.member:
                    stats["w_symmetry_mismatch"] += 1
    ok = all(v == 0 for key, v in stats.items() if key != "members")
    return CriterionResult(6, "QE soundness/completeness properties", ok, stats)


def criterion_7(level: str = "quick", seed: int = 707) -> CriterionResult:
    rng = np.random.default_rng(seed)
    w = rng.uniform(-math.sqrt(7), math.sqrt(7), 10_000)
    w2 = w * w
    lhs = (48 * w2 - 168) ** 2 - 196 * (24 * w2 * w2 - 168 * w2 + 144)
    rhs = 2400 * w2 * (7 - w2)
    scale = np.maximum((48 * w2 - 168) ** 2, 196 * np.abs(24 * w2 * w2 - 168 * w2 + 144))
    rel = float(np.max(np.abs(lhs - rhs) / scale))
    lo, hi = sys1_diagonal_boundary(0.0)
    isolated = real_roots(UniPoly([144.0, -168.0, 49.0]), 0.0, math.inf)
    root_err = max(abs(lo - 12 / 7), abs(hi - 12 / 7))
    if len(isolated) != 1:
        root_err = math.inf
    else:
        root_err = max(root_err, abs(isolated[0] - 12 / 7))
    return CriterionResult(7, "quartic boundary algebra", rel <= 1e-9 and root_err <= 1e-12,
                           {"max_rel_identity_error": rel, "double_root_error": root_err})


def _interior_member_points(rng, count: int, grid: GridSpec = WINDOW):
    ras = rasterize(RegionId.ORACLE_UNION_SYS1, grid)
    cand = np.argwhere(ras.bits & ~boundary_mask(ras.bits))
    pick = cand[rng.choice(len(cand), size=count, replace=False)]
    cs, ws = grid.c_centers, grid.w_centers
    return [(float(cs[i]), float(ws[j])) for i, j in pick]


def criterion_8a(level: str = "quick", seed: int = 808, points: int = 200) -> CriterionResult:
    """No Divergent verdict inside the Sigma1 union."""
    rng = np.random.default_rng(seed)
    trials = LEVELS[level]["trials"]
    divergent = []
    for k, (c, w) in enumerate(_interior_member_points(rng, points)):
        cfg = SimConfig(SwarmParams.sigma1(c, w), trials=trials, steps=500, seed=seed + k)
        if classify(run_ensemble(cfg), cfg.theta_conv, cfg.theta_div) is Verdict.DIVERGENT:
            divergent.append((c, w))
    return CriterionResult("8a", "simulation soundness inside sys1 union", not divergent,
                           {"trials": trials, "points": points,
                            "divergent_points": divergent})


def criterion_8b(level: str = "quick", seed: int = 808, points: int = 20) -> CriterionResult:
    """Witness decay at member points; failures carry moment diagnostics."""
    rng = np.random.default_rng(seed)
    trials = LEVELS[level]["trials"]
    failures = []
    for k, (c, w) in enumerate(_interior_member_points(rng, points)):
        params = SwarmParams.sigma1(c, w)
        dec = union_membership(params)
        cfg = SimConfig(params, trials=trials, steps=500, seed=seed + k)
        if not (dec.member and witness_decay_check(cfg, dec.witness)):
            failures.append({"c": c, "w": w,
                             "second_moment_radius": moment_radius(params, 2),
                             "fourth_moment_radius": moment_radius(params, 4)})
    return CriterionResult("8b", "witness decay at sampled member points", not failures,
                           {"trials": trials, "points": points, "failures": failures})


def criterion_8c(level: str = "quick") -> CriterionResult:
    """Original update and system form give the same paths on shared draws."""
    worst = 0.0
    for k, (c, w) in enumerate([(0.5, 0.2), (1.2, -0.3), (0.3, 0.7), (2.5, 0.1)]):
        base = SimConfig(SwarmParams.sigma1(c, w), trials=64, steps=100, seed=k)
        a = trajectories(base)
        b = trajectories(SimConfig(base.params, 64, 100, k, dynamics=Dynamics.ORIGINAL_UPDATE))
        scale = np.maximum(np.abs(a).max(axis=(1, 2), keepdims=True), 1e-300)
        worst = max(worst, float(np.max(np.abs(a - b) / scale)))
    # the two forms differ only in floating-point association
    return CriterionResult("8c", "sys1 dynamics forms agree on shared draws", worst <= 1e-12,
                           {"max_rel_path_difference": worst})


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8a, criterion_8b, criterion_8c)


def run_all(level: str = "quick", echo=None) -> list[CriterionResult]:
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    results = []
    for fn in CRITERIA:
        t0 = time.perf_counter()
        res = fn(level)
        res.seconds = time.perf_counter() - t0
        results.append(res)
        if echo is not None:
            echo(res)
    return results
