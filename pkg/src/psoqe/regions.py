"""Closed-form convergence regions in the (c, w) plane.

Each analytic predicate is written with numpy operations so it evaluates
elementwise on grids as well as on scalars.  ``Oracle*`` ids are answered by
the decision procedure in :mod:`psoqe.qe` instead of a formula.

For the Sigma1 diagonal template the boundary is the zero set of

    F(c, w) = 49 c^2 + (48 w^2 - 168) c + 24 w^4 - 168 w^2 + 144,

read as a quadratic in c.  On the analysis window the region is the part
below the lower branch, ``c < c_lower(w)``; this reading agrees with the
decision procedure on every non-boundary cell of a 400 x 400 grid.
"""
from __future__ import annotations

import enum
import math

import numpy as np

from .model import DomainError, SwarmParams, Template, Variant
from .qe import decide_grid, decide_membership, union_grid, union_membership


class RegionId(enum.Enum):
    SYS1_IDENTITY = "Sys1_Identity"
    SYS1_DIAGONAL = "Sys1_Diagonal"
    SYS1_OFFDIAG = "Sys1_OffDiag"
    SYS2_IDENTITY = "Sys2_Identity"
    SYS2_DIAGONAL = "Sys2_Diagonal"
    SYS2_OFFDIAG = "Sys2_OffDiag"
    KADIRKAMANATHAN = "Kadirkamanathan"
    GAZI = "Gazi"
    POLI = "Poli"
    ORACLE_IDENTITY = "OracleIdentity"
    ORACLE_DIAGONAL = "OracleDiagonal"
    ORACLE_OFFDIAG = "OracleOffDiag"
    ORACLE_UNION_SYS1 = "OracleUnionSys1"
    ORACLE_UNION_SYS2 = "OracleUnionSys2"

    @property
    def is_oracle(self) -> bool:
        return self.value.startswith("Oracle")

    @property
    def needs_variant(self) -> bool:
        return self in _ORACLE_TEMPLATE

    @classmethod
    def parse(cls, text: str | RegionId, variant: Variant | None = None) -> RegionId:
        """Accept enum values (``Sys1_Identity``) or CLI names (``sys-identity``).

        CLI names without a system number (``sys-identity``, ``oracle-union``)
        are resolved with ``variant``.
        """
        if isinstance(text, RegionId):
            return text
        for member in cls:
            if text == member.value or text == member.name:
                return member
        key = str(text).strip().lower().replace("_", "-")
        num = None if variant is None else ("1" if Variant.parse(variant) is Variant.SIGMA1 else "2")
        short = {
            "kadirkamanathan": cls.KADIRKAMANATHAN, "kadir": cls.KADIRKAMANATHAN,
            "gazi": cls.GAZI, "poli": cls.POLI,
            "oracle-identity": cls.ORACLE_IDENTITY,
            "oracle-diagonal": cls.ORACLE_DIAGONAL,
            "oracle-offdiag": cls.ORACLE_OFFDIAG,
        }
        if key in short:
            return short[key]
        if num is not None:
            key = key.replace("sys-", f"sys{num}-")
            if key == "oracle-union":
                key = f"oracle-union-sys{num}"
        for member in cls:
            if key == member.value.lower().replace("_", "-"):
                return member
            if key == member.name.lower().replace("_", "-"):
                return member
        raise DomainError(f"unknown region {text!r}")


_ORACLE_TEMPLATE = {
    RegionId.ORACLE_IDENTITY: Template.IDENTITY,
    RegionId.ORACLE_DIAGONAL: Template.DIAGONAL,
    RegionId.ORACLE_OFFDIAG: Template.OFFDIAG,
}

# analytic region -> (system, template) of the oracle it must reproduce
MATCHED_PAIRS = {
    RegionId.SYS1_IDENTITY: (Variant.SIGMA1, RegionId.ORACLE_IDENTITY),
    RegionId.SYS1_DIAGONAL: (Variant.SIGMA1, RegionId.ORACLE_DIAGONAL),
    RegionId.SYS1_OFFDIAG: (Variant.SIGMA1, RegionId.ORACLE_OFFDIAG),
    RegionId.SYS2_IDENTITY: (Variant.SIGMA2, RegionId.ORACLE_IDENTITY),
    RegionId.SYS2_DIAGONAL: (Variant.SIGMA2, RegionId.ORACLE_DIAGONAL),
    RegionId.SYS2_OFFDIAG: (Variant.SIGMA2, RegionId.ORACLE_OFFDIAG),
}


def sys1_diagonal_boundary(w):
    """Lower and upper c-branches of ``F(c, w) = 0``; needs ``|w| <= sqrt(7)``."""
    w = np.asarray(w, dtype=float)
    if np.any(~np.isfinite(w)) or np.any(np.abs(w) > math.sqrt(7)):
        raise DomainError("no real c-branches for |w| > sqrt(7)")
    w2 = w * w
    disc = np.sqrt(np.maximum(2400.0 * w2 * (7.0 - w2), 0.0))
    lower = (168.0 - 48.0 * w2 - disc) / 98.0
    upper = (168.0 - 48.0 * w2 + disc) / 98.0
    if lower.ndim == 0:
        return float(lower), float(upper)
    return lower, upper


def sys1_diagonal_predicate(c, w):
    lower, _ = sys1_diagonal_boundary(w)
    return c < lower


def sys1_identity(c, w):
    return (7 * c - 6 < 0) & (2 * c**2 * w**2 - 3 * w**2 - 7 * c**2 + 6 * c > 0)


def sys1_offdiag(c, w):
    return (7 * c - 6 < 0) & (7 * c**2 - 24 * w * c - 6 * c + 24 * w**2 + 12 * w - 12 < 0)


def sys2_identity(s, w):
    return (2 * s - 3 <= 0) & (w**2 * s**2 - 2 * s**2 + 3 * s - 3 * w**2 >= 0)


def sys2_diagonal(s, w):
    return ((3 * w**2 + s - 3 <= 0)
            & (3 * w**4 + 3 * w**2 * s + s**2 - 12 * w**2 - 6 * s + 9 >= 0))


def sys2_offdiag(s, w):
    return ((2 * s - 3 <= 0)
            & (2 * s**2 - 12 * w * s - 3 * s + 24 * w**2 + 12 * w - 12 <= 0))


def kadirkamanathan(c, w):
    return (c < 2 * (1 + w)) & (c < 2 * (1 - w) ** 2 / (1 + w))


def gazi(c, w):
    return c < 24 * (1 - 2 * np.abs(w) + w**2) / (7 * (1 + w))


def poli(c, w):
    return c < 24 * (1 - w**2) / (7 - 5 * w)


ANALYTIC = {
    RegionId.SYS1_IDENTITY: sys1_identity,
    RegionId.SYS1_DIAGONAL: sys1_diagonal_predicate,
    RegionId.SYS1_OFFDIAG: sys1_offdiag,
    RegionId.SYS2_IDENTITY: sys2_identity,
    RegionId.SYS2_DIAGONAL: sys2_diagonal,
    RegionId.SYS2_OFFDIAG: sys2_offdiag,
    RegionId.KADIRKAMANATHAN: kadirkamanathan,
    RegionId.GAZI: gazi,
    RegionId.POLI: poli,
}


def _check_domain(c, w) -> None:
    c = np.asarray(c, dtype=float)
    w = np.asarray(w, dtype=float)
    if not np.all(np.isfinite(c)) or not np.all(np.isfinite(w)):
        raise DomainError("c and w must be finite")
    if np.any(c <= 0):
        raise DomainError("c (or c1 + c2) must be > 0")
    if np.any(np.abs(w) >= 1):
        raise DomainError("w must lie in (-1, 1)")


def region_mask(region: RegionId | str, c, w, variant: Variant | str | None = None) -> np.ndarray:
    """Membership of every ``(c[k], w[k])``; ``c`` is ``c1 + c2`` for Sigma2 ids."""
    region = RegionId.parse(region, variant)
    c = np.asarray(c, dtype=float)
    w = np.asarray(w, dtype=float)
    _check_domain(c, w)
    if region in ANALYTIC:
        return np.asarray(ANALYTIC[region](c, w), dtype=bool)
    if region is RegionId.ORACLE_UNION_SYS1:
        return union_grid(Variant.SIGMA1, c, w)
    if region is RegionId.ORACLE_UNION_SYS2:
        return union_grid(Variant.SIGMA2, c, w)
    if variant is None:
        raise DomainError(f"{region.value} needs a system variant")
    return decide_grid(Variant.parse(variant), c, w, _ORACLE_TEMPLATE[region])


def region_predicate(region: RegionId | str, c: float, w: float,
                     variant: Variant | str | None = None) -> bool:
    """Scalar membership; oracle ids go through the witness-producing path."""
    region = RegionId.parse(region, variant)
    _check_domain(c, w)
    if region in ANALYTIC:
        return bool(ANALYTIC[region](float(c), float(w)))
    if region is RegionId.ORACLE_UNION_SYS1:
        return union_membership(SwarmParams.from_gain(Variant.SIGMA1, c, w)).member
    if region is RegionId.ORACLE_UNION_SYS2:
        return union_membership(SwarmParams.from_gain(Variant.SIGMA2, c, w)).member
    if variant is None:
        raise DomainError(f"{region.value} needs a system variant")
    params = SwarmParams.from_gain(variant, c, w)
    return decide_membership(params, _ORACLE_TEMPLATE[region]).member
