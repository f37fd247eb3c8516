"""Expected one-step difference of the quadratic Lyapunov candidate.

For ``V(z) = z^T P z`` the conditional expectation ``E{V(z+) | z} - V(z)`` is
a quadratic form ``d x^2 + e x v + a v^2`` whose coefficients are linear in
``(p1, p2, p3)``.  :func:`expected_delta_v` evaluates the closed forms;
:func:`mc_expected_delta_v` estimates the same quantity by sampling the drive
and pushing ``z`` through the system matrices, which is independent of the
closed forms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (PMatrix, StateVec, SwarmParams, Variant, system_matrices)


@dataclass(frozen=True)
class QuadForm:
    """``q(x, v) = d x^2 + e x v + a v^2`` (``e`` is the full cross coefficient)."""

    d: float
    e: float
    a: float

    def __call__(self, x, v):
        return self.d * x * x + self.e * x * v + self.a * v * v

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.d, self.e, self.a)


def delta_v_coeffs(variant: Variant, gain, w, p1, p2, p3):
    """Closed-form ``(d, e, a)``; broadcasts over numpy arrays."""
    a = -p3 + (p1 + 2 * p2 + p3) * w ** 2
    if variant is Variant.SIGMA1:
        c = gain
        e = -2 * (p2 + w * ((-1 + c) * p1 + (-1 + 2 * c) * p2 + c * p3))
        d = (c / 6) * ((-12 + 7 * c) * p1 + 2 * (-6 + 7 * c) * p2 + 7 * c * p3)
    else:
        s = gain
        e = -(2 * p2 + w * ((-2 + s) * p1 + 2 * (-1 + s) * p2 + s * p3))
        d = (s / 3) * ((-3 + s) * p1 - 3 * p2 + s * (2 * p2 + p3))
    return d, e, a


def expected_delta_v(params: SwarmParams, P: PMatrix) -> QuadForm:
    """``E{dV}`` as a quadratic form in the shifted state ``(x, v)``.

    P need not be positive definite here.
    """
    d, e, a = delta_v_coeffs(params.variant, params.gain, params.w,
                             P.p1, P.p2, P.p3)
    return QuadForm(float(d), float(e), float(a))


def eval_quad_form(q: QuadForm, z: StateVec) -> float:
    return float(q(z.x, z.v))


def sample_drive(variant: Variant, rng: np.random.Generator, size) -> np.ndarray:
    """Draws of ``r``: ``r1 + r2`` for SIGMA1, one uniform for SIGMA2."""
    if variant is Variant.SIGMA1:
        u = rng.random((2,) + tuple(np.atleast_1d(size)))
        return u[0] + u[1]
    return rng.random(size)


def mc_expected_delta_v(params: SwarmParams, P: PMatrix, z: StateVec,
                        trials: int = 1_000_000, seed: int = 0) -> tuple[float, float]:
    """Sample mean and standard error of ``V(Az + Bz r) - V(z)``."""
    if trials < 1000:
        raise ValueError("trials must be >= 1000")
    sysm = system_matrices(params)
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    r = sample_drive(params.variant, rng, trials)
    z0 = z.as_array()
    Pm = P.as_array()
    nxt = (sysm.A @ z0)[:, None] + (sysm.B @ z0)[:, None] * r[None, :]
    v_next = np.einsum("it,ij,jt->t", nxt, Pm, nxt)
    diff = v_next - z0 @ Pm @ z0
    mean = float(diff.mean())
    stderr = float(diff.std(ddof=1) / np.sqrt(trials))
    return mean, stderr
