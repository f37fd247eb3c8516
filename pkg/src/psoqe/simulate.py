"""Monte-Carlo ensembles of the stagnating one-particle PSO.

Random numbers come from Philox, a counter-based generator: trial ``k`` of a
run with seed ``s`` uses the key ``(s, k)`` and step ``t`` consumes the
counter block ``t``, so each trial's stream depends on ``(seed, trial, step)``
only and never on execution order.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .model import PMatrix, StateVec, SwarmParams, Variant

DIVERGENCE_LIMIT = 1e150


class Dynamics(enum.Enum):
    ORIGINAL_UPDATE = "original"
    SYSTEM_FORM = "system"


class Verdict(enum.Enum):
    CONVERGENT = "Convergent"
    DIVERGENT = "Divergent"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SimConfig:
    params: SwarmParams
    trials: int = 10_000
    steps: int = 500
    seed: int = 0
    init_box: float = 1.0
    dynamics: Dynamics = Dynamics.SYSTEM_FORM
    theta_conv: float = 0.1
    theta_div: float = 10.0

    def __post_init__(self) -> None:
        if self.trials < 1 or self.steps < 1:
            raise ValueError("trials and steps must be >= 1")
        if not self.init_box > 0:
            raise ValueError("init_box must be > 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "dynamics", Dynamics(self.dynamics))

    def as_dict(self) -> dict:
        return {"params": self.params.as_dict(), "trials": self.trials,
                "steps": self.steps, "seed": self.seed, "init_box": self.init_box,
                "dynamics": self.dynamics.value, "theta_conv": self.theta_conv,
                "theta_div": self.theta_div}


@dataclass(frozen=True)
class EnsembleStats:
    mean_sq: np.ndarray
    mean_v: np.ndarray | None
    se_v: np.ndarray | None
    finite_fraction: float

    @property
    def decay_ratio(self) -> float:
        if self.mean_sq[0] == 0:
            return 1.0
        return float(self.mean_sq[-1] / self.mean_sq[0])


def draws_per_step(variant: Variant) -> int:
    return 2 if variant is Variant.SIGMA1 else 1


def _coefficients(params: SwarmParams) -> tuple[float, float]:
    if params.variant is Variant.SIGMA1:
        return params.c, params.c
    return params.c1, params.c2


def step_arrays(params: SwarmParams, x, v, u, dynamics: Dynamics):
    """One update for arrays of states; ``u[..., k]`` are the uniform draws."""
    w = params.w
    if params.variant is Variant.SIGMA1:
        r1, r2 = u[..., 0], u[..., 1]
    else:
        r1 = r2 = u[..., 0]
    if dynamics is Dynamics.ORIGINAL_UPDATE:
        ca, cb = _coefficients(params)
        v_new = w * v + ca * r1 * (0.0 - x) + cb * r2 * (0.0 - x)
        return x + v_new, v_new
    r = r1 + r2 if params.variant is Variant.SIGMA1 else r1
    g = params.gain
    # z+ = A z + B z r with A = [[1, w], [0, w]], B = [[-g, 0], [-g, 0]]
    kick = -g * x * r
    return x + w * v + kick, w * v + kick


def step_once(params: SwarmParams, z: StateVec, randoms,
              dynamics: Dynamics = Dynamics.SYSTEM_FORM) -> StateVec:
    """``randoms`` is ``(r1, r2)`` for SIGMA1 and ``(r,)`` for SIGMA2."""
    u = np.asarray(randoms, dtype=float)
    if u.shape != (draws_per_step(params.variant),):
        raise ValueError(f"expected {draws_per_step(params.variant)} uniform draws")
    x, v = step_arrays(params, z.x, z.v, u, Dynamics(dynamics))
    return StateVec(float(x), float(v))


def trial_uniforms(seed: int, trial: int, steps: int, k: int) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(key=np.array([seed, trial], dtype=np.uint64)))
    return gen.random((steps, k))


def ensemble_uniforms(cfg: SimConfig) -> np.ndarray:
    """Draws of shape ``(steps, trials, k)``."""
    k = draws_per_step(cfg.params.variant)
    u = np.empty((cfg.steps, cfg.trials, k))
    for trial in range(cfg.trials):
        u[:, trial, :] = trial_uniforms(cfg.seed, trial, cfg.steps, k)
    return u


def initial_states(cfg: SimConfig) -> np.ndarray:
    # key (seed, 2**64-1) is reserved for initial conditions
    gen = np.random.Generator(np.random.Philox(key=np.array([cfg.seed, 2**64 - 1],
                                                            dtype=np.uint64)))
    return gen.uniform(-cfg.init_box, cfg.init_box, size=(cfg.trials, 2))


def run_ensemble(cfg: SimConfig, witness: PMatrix | None = None,
                 z0: np.ndarray | None = None) -> EnsembleStats:
    """Simulate ``cfg.trials`` independent trajectories and average per step.

    Trajectories whose state leaves ``|.| <= 1e150`` (or turns non-finite)
    are frozen at their last admissible state and counted as not finite.
    """
    z0 = initial_states(cfg) if z0 is None else np.asarray(z0, dtype=float)
    if z0.shape != (cfg.trials, 2):
        raise ValueError("z0 must have shape (trials, 2)")
    u = ensemble_uniforms(cfg)
    x, v = z0[:, 0].copy(), z0[:, 1].copy()
    frozen = np.zeros(cfg.trials, dtype=bool)
    mean_sq = np.empty(cfg.steps + 1)
    mean_v = se_v = None
    if witness is not None:
        p1, p2, p3 = witness.as_tuple()
        mean_v = np.empty(cfg.steps + 1)
        se_v = np.empty(cfg.steps + 1)

    def record(t):
        mean_sq[t] = np.mean(x * x + v * v)
        if witness is not None:
            vals = p1 * x * x + 2 * p2 * x * v + p3 * v * v
            mean_v[t] = vals.mean()
            se_v[t] = vals.std(ddof=1) / np.sqrt(cfg.trials) if cfg.trials > 1 else 0.0

    record(0)
    for t in range(cfg.steps):
        with np.errstate(over="ignore", invalid="ignore"):
            xn, vn = step_arrays(cfg.params, x, v, u[t], cfg.dynamics)
            bad = ~(np.isfinite(xn) & np.isfinite(vn)
                    & (np.abs(xn) <= DIVERGENCE_LIMIT) & (np.abs(vn) <= DIVERGENCE_LIMIT))
        frozen |= bad
        x = np.where(frozen, x, xn)
        v = np.where(frozen, v, vn)
        record(t + 1)
    return EnsembleStats(mean_sq, mean_v, se_v, float(1.0 - frozen.mean()))


def trajectories(cfg: SimConfig, z0: np.ndarray | None = None) -> np.ndarray:
    """Full paths, shape ``(steps + 1, trials, 2)``; no divergence guard."""
    z0 = initial_states(cfg) if z0 is None else np.asarray(z0, dtype=float)
    u = ensemble_uniforms(cfg)
    out = np.empty((cfg.steps + 1, cfg.trials, 2))
    out[0] = z0
    x, v = z0[:, 0], z0[:, 1]
    for t in range(cfg.steps):
        x, v = step_arrays(cfg.params, x, v, u[t], cfg.dynamics)
        out[t + 1, :, 0], out[t + 1, :, 1] = x, v
    return out


def classify(stats: EnsembleStats, theta_conv: float = 0.1,
             theta_div: float = 10.0) -> Verdict:
    ratio = stats.decay_ratio
    if stats.finite_fraction < 1 or ratio > theta_div:
        return Verdict.DIVERGENT
    if ratio < theta_conv:
        return Verdict.CONVERGENT
    return Verdict.INCONCLUSIVE


def decay_fraction(stats: EnsembleStats) -> float:
    """Share of steps above the noise floor on which the mean of V decreased.

    A step t counts when ``mean_v[t]`` exceeds four standard errors; with no
    counted steps the check is vacuous and 1.0 is returned.
    """
    if stats.mean_v is None:
        raise ValueError("stats carry no Lyapunov averages")
    mv, se = stats.mean_v, stats.se_v
    counted = mv[:-1] > 4 * se[:-1]
    if not counted.any():
        return 1.0
    return float((mv[1:] < mv[:-1])[counted].mean())


def witness_decay_check(cfg: SimConfig, witness: PMatrix,
                        z0: np.ndarray | None = None, required: float = 0.95) -> bool:
    if not witness.is_positive_definite():
        raise ValueError("witness must be positive definite")
    return decay_fraction(run_ensemble(cfg, witness, z0)) >= required


def moment_radius(params: SwarmParams, order: int = 2) -> float:
    """Spectral radius of ``E{M(r)^(x order)}`` with ``z+ = M(r) z``.

    Below 1 the ``order``-th moments of the state decay geometrically.  The
    expectation is exact: Gauss-Legendre with enough nodes for the
    degree-``order`` polynomial in the uniforms.
    """
    nodes, weights = np.polynomial.legendre.leggauss(order // 2 + 1)
    nodes, weights = (nodes + 1) / 2, weights / 2
    w, g = params.w, params.gain
    if params.variant is Variant.SIGMA1:
        grid = [(a + b, wa * wb) for a, wa in zip(nodes, weights)
                for b, wb in zip(nodes, weights)]
    else:
        grid = list(zip(nodes, weights))
    acc = 0.0
    for r, wt in grid:
        M = np.array([[1 - g * r, w], [-g * r, w]])
        K = M
        for _ in range(order - 1):
            K = np.kron(K, M)
        acc = acc + wt * K
    return float(np.max(np.abs(np.linalg.eigvals(acc))))


def stats_document(cfg: SimConfig, stats: EnsembleStats) -> dict:
    verdict = classify(stats, cfg.theta_conv, cfg.theta_div)
    return {
        "config": cfg.as_dict(),
        "mean_sq": stats.mean_sq.tolist(),
        "mean_v": None if stats.mean_v is None else stats.mean_v.tolist(),
        "finite_fraction": stats.finite_fraction,
        "verdict": verdict.value,
        "decay_ratio": stats.decay_ratio,
    }
