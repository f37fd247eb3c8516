"""PSO stagnation dynamics as a linear system with multiplicative noise.

States are expressed relative to the (common) best position, so the
equilibrium sits at the origin and the input term of the update vanishes:

    z(t+1) = A z(t) + B z(t) r(t),    z = (x - p, v)

Two aggregations of the random pulls are supported.  ``SIGMA1`` uses one
coefficient ``c`` for both pulls and the drive ``r = r1 + r2``; ``SIGMA2``
uses separate ``c1``, ``c2`` and a single uniform ``r``.  Both give the same
matrices for ``c = c1 + c2`` but different second moments of the drive.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Raised when a parameter lies outside the domain of an operation."""


class Variant(enum.Enum):
    SIGMA1 = "sigma1"
    SIGMA2 = "sigma2"

    @classmethod
    def parse(cls, text: str | Variant) -> Variant:
        if isinstance(text, Variant):
            return text
        key = str(text).strip().lower().replace("σ", "sigma").replace("Σ", "sigma")
        aliases = {"1": cls.SIGMA1, "s1": cls.SIGMA1, "sys1": cls.SIGMA1,
                   "2": cls.SIGMA2, "s2": cls.SIGMA2, "sys2": cls.SIGMA2}
        if key in aliases:
            return aliases[key]
        for member in cls:
            if member.value == key:
                return member
        raise DomainError(f"unknown system variant {text!r}")


class Drive(enum.Enum):
    SUM_OF_TWO_UNIFORMS = "sum_of_two_uniforms"
    SINGLE_UNIFORM = "single_uniform"


@dataclass(frozen=True)
class SwarmParams:
    """One analysis point: inertia weight plus acceleration coefficient(s).

    ``c`` is used by ``SIGMA1`` only, ``c1``/``c2`` by ``SIGMA2`` only.
    Construction accepts a zero gain (the frozen, noise-free limit used by
    the simulator and the Lyapunov-difference formulas); operations that need
    a strictly positive gain check it themselves via :meth:`require_positive`.
    """

    variant: Variant
    w: float
    c: float | None = None
    c1: float | None = None
    c2: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        if not math.isfinite(self.w):
            raise DomainError(f"inertia weight must be finite, got {self.w}")
        if self.variant is Variant.SIGMA1:
            if self.c is None or self.c1 is not None or self.c2 is not None:
                raise DomainError("SIGMA1 takes c only")
            if not math.isfinite(self.c) or self.c < 0:
                raise DomainError(f"c must be finite and >= 0, got {self.c}")
        else:
            if self.c is not None or self.c1 is None or self.c2 is None:
                raise DomainError("SIGMA2 takes c1 and c2 only")
            for name in ("c1", "c2"):
                val = getattr(self, name)
                if not math.isfinite(val) or val < 0:
                    raise DomainError(f"{name} must be finite and >= 0, got {val}")

    @classmethod
    def sigma1(cls, c: float, w: float) -> SwarmParams:
        return cls(Variant.SIGMA1, w=float(w), c=float(c))

    @classmethod
    def sigma2(cls, c1: float, c2: float, w: float) -> SwarmParams:
        return cls(Variant.SIGMA2, w=float(w), c1=float(c1), c2=float(c2))

    @classmethod
    def from_gain(cls, variant: Variant | str, gain: float, w: float) -> SwarmParams:
        """Build a point from the aggregate gain (``c`` or ``c1 + c2``).

        For ``SIGMA2`` the gain is split evenly; every quantity in the
        analysis depends on the sum only.
        """
        variant = Variant.parse(variant)
        if variant is Variant.SIGMA1:
            return cls.sigma1(gain, w)
        return cls.sigma2(gain / 2.0, gain / 2.0, w)

    @property
    def gain(self) -> float:
        """``c`` for SIGMA1, ``s = c1 + c2`` for SIGMA2."""
        if self.variant is Variant.SIGMA1:
            return self.c
        return self.c1 + self.c2

    def require_positive(self) -> SwarmParams:
        if not self.gain > 0:
            name = "c" if self.variant is Variant.SIGMA1 else "c1 + c2"
            raise DomainError(f"{name} must be > 0, got {self.gain}")
        return self

    def as_dict(self) -> dict:
        out = {"variant": self.variant.value, "w": self.w}
        if self.variant is Variant.SIGMA1:
            out["c"] = self.c
        else:
            out.update(c1=self.c1, c2=self.c2)
        return out


@dataclass(frozen=True)
class SystemMatrices:
    A: np.ndarray
    B: np.ndarray
    drive: Drive


@dataclass(frozen=True)
class StateVec:
    x: float
    v: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.v)):
            raise DomainError("state entries must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.v])


@dataclass(frozen=True)
class Moments:
    """First and second moment of the scaled drive ``gain * r``."""

    m1: float
    m2: float

    @property
    def variance(self) -> float:
        return self.m2 - self.m1 ** 2


def system_matrices(params: SwarmParams) -> SystemMatrices:
    # no positivity check: the simulator runs the degenerate c = 0 case too
    g = params.gain
    A = np.array([[1.0, params.w], [0.0, params.w]])
    B = np.array([[-g, 0.0], [-g, 0.0]])
    drive = (Drive.SUM_OF_TWO_UNIFORMS if params.variant is Variant.SIGMA1
             else Drive.SINGLE_UNIFORM)
    return SystemMatrices(A, B, drive)


def build_system(params: SwarmParams) -> SystemMatrices:
    """Return ``(A, B, drive)`` for a point with strictly positive gain."""
    return system_matrices(params.require_positive())


def moments_of_gain(variant: Variant, gain):
    """``(E{g r}, E{g^2 r^2})``; works elementwise on arrays.

    SIGMA1: r = r1 + r2 with r1, r2 ~ U[0, 1] iid, so E r = 1, E r^2 = 7/6.
    SIGMA2: r ~ U[0, 1], so E r = 1/2, E r^2 = 1/3.
    """
    if variant is Variant.SIGMA1:
        return gain, 7.0 * gain ** 2 / 6.0
    return gain / 2.0, gain ** 2 / 3.0


def scaled_moments(params: SwarmParams) -> Moments:
    m1, m2 = moments_of_gain(params.variant, params.require_positive().gain)
    return Moments(float(m1), float(m2))


@dataclass(frozen=True)
class PMatrix:
    """Symmetric Lyapunov matrix ``[[p1, p2], [p2, p3]]``."""

    p1: float
    p2: float
    p3: float

    @classmethod
    def identity(cls) -> PMatrix:
        return cls(1.0, 0.0, 1.0)

    def is_positive_definite(self) -> bool:
        return is_positive_definite(self)

    def scaled(self, beta: float) -> PMatrix:
        return PMatrix(beta * self.p1, beta * self.p2, beta * self.p3)

    def as_array(self) -> np.ndarray:
        return np.array([[self.p1, self.p2], [self.p2, self.p3]])

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p1, self.p2, self.p3)


class Template(enum.Enum):
    """Lyapunov-candidate families with at most one free entry.

    DIAGONAL fixes p1 = 1, p2 = 0 and leaves p3 > 0 free; OFFDIAG fixes
    p1 = p3 = 1 and leaves p2 in (-1, 1) free.  Positive scaling of P does
    not change any strict inequality, so these normalizations lose nothing.
    """

    IDENTITY = "identity"
    DIAGONAL = "diagonal"
    OFFDIAG = "offdiag"

    @classmethod
    def parse(cls, text: str | Template) -> Template:
        if isinstance(text, Template):
            return text
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            raise DomainError(f"unknown template {text!r}") from None


def is_positive_definite(P: PMatrix) -> bool:
    """Sylvester criterion for the 2x2 case, strict."""
    return bool(P.p1 > 0 and P.p1 * P.p3 - P.p2 ** 2 > 0)
