"""Decision procedure for the existence of a stabilizing Lyapunov matrix.

The question at each parameter point is

    exists P:  E{dV}(x, v) < 0 for all (x, v) != 0,  p1 > 0,  p1 p3 - p2^2 > 0.

The universal block over ``(x, v)`` is removed exactly: a binary quadratic
form ``d x^2 + e x v + a v^2`` is negative definite iff ``d < 0`` and
``4 a d - e^2 > 0``.  For the one-parameter templates the coefficients are
affine in the free entry ``t`` of P, so what remains is a conjunction of
strict univariate polynomial inequalities in ``t`` of degree <= 2.  That is
decided by a sign table: isolate every root, test one point per open cell.

Two entry points share this logic: the scalar path (:func:`decide_membership`)
goes through the general :func:`real_roots` / :func:`feasible_1d` machinery and
returns a witness; :func:`decide_grid` is a vectorized specialization for
rasters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .lyapunov import QuadForm, delta_v_coeffs, expected_delta_v
from .model import PMatrix, SwarmParams, Template, Variant

TAU_TRIM = 1e-13
TAU_ROOT = 1e-12
TAU_MARGIN = 1e-10

_EPS = np.finfo(float).eps


@dataclass(frozen=True, init=False)
class UniPoly:
    """Real univariate polynomial of degree <= 4, coefficients lowest first.

    Leading coefficients below ``TAU_TRIM`` relative to the largest
    coefficient are dropped on construction.
    """

    coeffs: tuple[float, ...]

    def __init__(self, coeffs) -> None:
        cs = [float(x) for x in coeffs]
        if not all(math.isfinite(x) for x in cs):
            raise ValueError("polynomial coefficients must be finite")
        scale = max((abs(x) for x in cs), default=0.0)
        while cs and abs(cs[-1]) <= TAU_TRIM * scale:
            cs.pop()
        if len(cs) > 5:
            raise ValueError(f"degree {len(cs) - 1} > 4 not supported")
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0.0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def derivative(self) -> UniPoly:
        return UniPoly([k * a for k, a in enumerate(self.coeffs)][1:])

    def magnitude(self, x: float) -> float:
        """``sum |a_k| |x|^k``, the scale of rounding error in ``p(x)``."""
        return sum(abs(a) * abs(x) ** k for k, a in enumerate(self.coeffs))


def _quadratic_roots(c0: float, c1: float, c2: float) -> list[float]:
    disc = c1 * c1 - 4 * c2 * c0
    if abs(disc) <= 16 * _EPS * (c1 * c1 + 4 * abs(c2 * c0)):
        return [-c1 / (2 * c2)]
    if disc < 0:
        return []
    q = -0.5 * (c1 + math.copysign(math.sqrt(disc), c1))
    return sorted([q / c2, c0 / q])


def _polish(p: UniPoly, dp: UniPoly, r: float) -> float:
    slope = dp(r)
    if slope == 0:
        return r
    cand = r - p(r) / slope
    return cand if abs(p(cand)) <= abs(p(r)) else r


def _all_real_roots(p: UniPoly) -> list[float]:
    n = p.degree
    if n <= 0:
        return []
    cs = p.coeffs
    if n == 1:
        return [-cs[0] / cs[1]]
    if n == 2:
        return _quadratic_roots(*cs)
    # degree 3-4: roots are separated by the critical points
    crit = _all_real_roots(p.derivative())
    bound = 1 + max(abs(a / cs[-1]) for a in cs[:-1])
    found = [x for x in crit if abs(p(x)) <= 16 * _EPS * p.magnitude(x)]
    knots = [-bound] + [x for x in crit if -bound < x < bound] + [bound]
    for lo, hi in zip(knots, knots[1:]):
        flo, fhi = p(lo), p(hi)
        if flo * fhi < 0:
            found.append(brentq(p, lo, hi, xtol=1e-15, rtol=4 * _EPS, maxiter=200))
    return sorted(found)


def real_roots(p: UniPoly, lo: float = -math.inf, hi: float = math.inf) -> list[float]:
    """Distinct real roots of ``p`` in the open interval ``(lo, hi)``, sorted.

    Each root gets one Newton polish step; roots closer than ``TAU_ROOT``
    (relative to their magnitude) are merged.
    """
    if p.degree > 4:
        raise ValueError("degree > 4 not supported")
    if p.degree < 0:
        raise ValueError("zero polynomial has no isolated roots")
    dp = p.derivative()
    roots = sorted(_polish(p, dp, r) for r in _all_real_roots(p))
    merged: list[float] = []
    for r in roots:
        if merged and r - merged[-1] <= TAU_ROOT * max(1.0, abs(r)):
            continue
        merged.append(r)
    return [r for r in merged if lo < r < hi]


def _cell_point(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b):
        return 0.0
    if math.isinf(b):
        return a + 1.0
    if math.isinf(a):
        return b - 1.0
    return 0.5 * (a + b)


def feasible_1d(constraints, domain: tuple[float, float]) -> float | None:
    """Find ``t`` in the open ``domain`` with ``sign * p(t) > 0`` for all constraints.

    ``constraints`` is a sequence of ``(UniPoly, sign)`` with ``sign`` in
    ``{+1, -1}``.  Every root of every constraint inside the domain is
    isolated; one sample per open cell decides the cell, because no
    constraint changes sign inside it.  Returns the first sample satisfying
    all constraints with slack > ``TAU_MARGIN``, else ``None``.
    """
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise ValueError(f"empty domain {domain}")
    checked = []
    for item in constraints:
        p, sign = item
        if not isinstance(p, UniPoly) or sign not in (1, -1):
            raise ValueError(f"malformed constraint {item!r}")
        checked.append((p, sign))
    knots = {lo, hi}
    for p, _ in checked:
        if p.degree < 0:
            return None  # 0 > 0 never holds
        knots.update(real_roots(p, lo, hi))
    knots = sorted(knots)
    for a, b in zip(knots, knots[1:]):
        t = _cell_point(a, b)
        if all(sign * p(t) > TAU_MARGIN for p, sign in checked):
            return t
    return None


def neg_def_condition(q: QuadForm) -> bool:
    """True iff ``q(x, v) < 0`` for every ``(x, v) != 0``."""
    return bool(q.d < 0 and 4 * q.a * q.d - q.e ** 2 > 0)


@dataclass(frozen=True)
class Decision:
    member: bool
    witness: PMatrix | None
    certificate_margin: float
    template: str

    def as_dict(self) -> dict:
        return {"member": self.member,
                "witness": None if self.witness is None else list(self.witness.as_tuple()),
                "certificate_margin": self.certificate_margin,
                "template": self.template}


def certificate_margin(params: SwarmParams, P: PMatrix) -> float:
    """Smallest slack among ``-d``, ``4ad - e^2``, ``p1``, ``p1 p3 - p2^2``."""
    q = expected_delta_v(params, P)
    return min(-q.d, 4 * q.a * q.d - q.e ** 2, P.p1, P.p1 * P.p3 - P.p2 ** 2)


# (fixed part of P, direction of the free entry, domain of the free entry)
_TEMPLATE_LINE = {
    Template.DIAGONAL: ((1.0, 0.0, 0.0), (0.0, 0.0, 1.0), (0.0, math.inf)),
    Template.OFFDIAG: ((1.0, 0.0, 1.0), (0.0, 1.0, 0.0), (-1.0, 1.0)),
}


def _affine_coeffs(variant: Variant, gain, w, template: Template):
    base, unit, _ = _TEMPLATE_LINE[template]
    # coefficients are linear in P, so q(base + t unit) = q(base) + t q(unit)
    d0, e0, a0 = delta_v_coeffs(variant, gain, w, *base)
    d1, e1, a1 = delta_v_coeffs(variant, gain, w, *unit)
    return (d0, d1), (e0, e1), (a0, a1)


def _discriminant_coeffs(d, e, a):
    """Coefficients of ``4 a(t) d(t) - e(t)^2`` for affine ``a, d, e``."""
    (d0, d1), (e0, e1), (a0, a1) = d, e, a
    return (4 * a0 * d0 - e0 * e0,
            4 * (a0 * d1 + a1 * d0) - 2 * e0 * e1,
            4 * a1 * d1 - e1 * e1)


def constraint_system(params: SwarmParams, template: Template):
    """Univariate constraints and domain for a one-parameter template."""
    d, e, a = _affine_coeffs(params.variant, params.gain, params.w, template)
    g = _discriminant_coeffs(d, e, a)
    _, _, domain = _TEMPLATE_LINE[template]
    if template is Template.DIAGONAL:
        admissible = UniPoly([0.0, 1.0])  # p3 > 0
    else:
        admissible = UniPoly([1.0, 0.0, -1.0])  # 1 - p2^2 > 0
    return [(UniPoly(d), -1), (UniPoly(g), 1), (admissible, 1)], domain


def _point_on_template(template: Template, t: float) -> PMatrix:
    base, unit, _ = _TEMPLATE_LINE[template]
    return PMatrix(*(b + t * u for b, u in zip(base, unit)))


def decide_membership(params: SwarmParams, template: Template | PMatrix | str) -> Decision:
    """Decide whether the given Lyapunov family certifies the point."""
    params.require_positive()
    if isinstance(template, PMatrix):
        P, label = template, "explicit"
        norm = max(abs(P.p1), abs(P.p2), abs(P.p3))
        if not norm > 0:
            return Decision(False, None, 0.0, label)
        # the absolute margin threshold must not depend on the scale of P
        margin = certificate_margin(params, P.scaled(1.0 / norm))
    else:
        template = Template.parse(template)
        label = template.value
        if template is Template.IDENTITY:
            P = PMatrix.identity()
        else:
            constraints, domain = constraint_system(params, template)
            t = feasible_1d(constraints, domain)
            if t is None:
                return Decision(False, None, -math.inf, label)
            P = _point_on_template(template, t)
        margin = certificate_margin(params, P)
    if margin > TAU_MARGIN:
        return Decision(True, P, margin, label)
    return Decision(False, None, margin, label)


UNION_ORDER = (Template.IDENTITY, Template.DIAGONAL, Template.OFFDIAG)


def union_membership(params: SwarmParams) -> Decision:
    last = None
    for template in UNION_ORDER:
        last = decide_membership(params, template)
        if last.member:
            return last
    return Decision(False, None, last.certificate_margin, "union")


# ---------------------------------------------------------------------------
# vectorized path


def _vec_linear_root(c0, c1):
    scale = np.maximum(np.abs(c0), np.abs(c1))
    ok = np.abs(c1) > TAU_TRIM * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(ok, -c0 / np.where(ok, c1, 1.0), np.nan)


def _vec_quadratic_roots(c0, c1, c2):
    """Distinct real roots of ``c0 + c1 t + c2 t^2``, NaN where absent."""
    scale = np.maximum.reduce([np.abs(c0), np.abs(c1), np.abs(c2)])
    quad = np.abs(c2) > TAU_TRIM * scale
    lin = ~quad & (np.abs(c1) > TAU_TRIM * scale)
    disc = c1 * c1 - 4 * c2 * c0
    double = quad & (np.abs(disc) <= 16 * _EPS * (c1 * c1 + 4 * np.abs(c2 * c0)))
    two = quad & ~double & (disc > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        safe_c2 = np.where(quad, c2, 1.0)
        q = -0.5 * (c1 + np.copysign(np.sqrt(np.where(two, disc, 0.0)), c1))
        safe_q = np.where(two & (q != 0), q, 1.0)
        r_a = np.where(two, q / safe_c2, np.nan)
        r_b = np.where(two, c0 / safe_q, np.nan)
        r_a = np.where(double, -c1 / (2 * safe_c2), r_a)
        r_a = np.where(lin, -c0 / np.where(lin, c1, 1.0), r_a)
    return r_a, r_b


def _vec_polish(cs, r):
    c0, c1, c2 = cs
    with np.errstate(invalid="ignore", divide="ignore"):
        val = c0 + r * (c1 + r * c2)
        slope = c1 + 2 * c2 * r
        cand = r - val / np.where(slope == 0, 1.0, slope)
        cval = c0 + cand * (c1 + cand * c2)
        better = (slope != 0) & (np.abs(cval) <= np.abs(val))
    return np.where(better, cand, r)


def decide_grid(variant: Variant, gain, w, template: Template | str) -> np.ndarray:
    """Vectorized membership for arrays of ``gain`` and ``w`` (same shape)."""
    variant = Variant.parse(variant)
    template = Template.parse(template)
    gain = np.asarray(gain, dtype=float)
    w = np.asarray(w, dtype=float)
    if template is Template.IDENTITY:
        d, e, a = delta_v_coeffs(variant, gain, w, 1.0, 0.0, 1.0)
        margin = np.minimum(-d, 4 * a * d - e * e)
        return margin > TAU_MARGIN
    dd, ee, aa = _affine_coeffs(variant, gain, w, template)
    gg = _discriminant_coeffs(dd, ee, aa)
    lo, hi = _TEMPLATE_LINE[template][2]
    d0, d1 = np.broadcast_arrays(*dd)
    g0, g1, g2 = np.broadcast_arrays(*gg)

    def poly_d(t):
        return d0 + t * d1

    def poly_g(t):
        return g0 + t * (g1 + t * g2)

    r_d = _vec_linear_root(d0, d1)
    r_d = _vec_polish((d0, d1, np.zeros_like(d0)), r_d)
    r_g1, r_g2 = _vec_quadratic_roots(g0, g1, g2)
    r_g1 = _vec_polish((g0, g1, g2), r_g1)
    r_g2 = _vec_polish((g0, g1, g2), r_g2)
    roots = np.stack([r_d, r_g1, r_g2], axis=-1)
    with np.errstate(invalid="ignore"):
        inside = (roots > lo) & (roots < hi)
    roots = np.sort(np.where(inside, roots, np.nan), axis=-1)
    roots = np.where(np.isnan(roots), hi, roots)
    shape = roots.shape[:-1]
    knots = np.concatenate([np.full(shape + (1,), lo), roots,
                            np.full(shape + (1,), hi)], axis=-1)
    member = np.zeros(shape, dtype=bool)
    for k in range(knots.shape[-1] - 1):
        a, b = knots[..., k], knots[..., k + 1]
        valid = a < b
        t = np.where(np.isinf(b), a + 1.0, 0.5 * (a + b))
        t = np.where(valid, t, 0.5 * (lo + min(hi, lo + 2.0)))
        if template is Template.DIAGONAL:
            admissible = t
        else:
            admissible = 1.0 + t * (0.0 + t * -1.0)
        with np.errstate(invalid="ignore", over="ignore"):
            ok = ((-poly_d(t) > TAU_MARGIN) & (poly_g(t) > TAU_MARGIN)
                  & (admissible > TAU_MARGIN))
        member |= valid & ok
    return member


def union_grid(variant: Variant, gain, w) -> np.ndarray:
    out = None
    for template in UNION_ORDER:
        m = decide_grid(variant, gain, w, template)
        out = m if out is None else out | m
    return out

