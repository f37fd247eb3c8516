import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from psoqe.model import DomainError, Variant
from psoqe.regions import (ANALYTIC, RegionId, region_mask, region_predicate,
                           sys1_diagonal_boundary, sys1_diagonal_predicate)


@pytest.mark.parametrize("region,c,w,expected", [
    (RegionId.SYS1_IDENTITY, 0.5, 0.0, True),
    (RegionId.GAZI, 1.0, 0.0, True),
    (RegionId.GAZI, 3.5, 0.0, False),
    (RegionId.POLI, 24 / 7, 0.0, False),
    (RegionId.KADIRKAMANATHAN, 1.0, 0.5, False),
    (RegionId.SYS2_IDENTITY, 1.0, 0.0, True),
])
def test_region_predicate_examples(region, c, w, expected):
    assert region_predicate(region, c, w) is expected


@pytest.mark.parametrize("c,w", [(0.0, 0.1), (-1, 0.1), (1.0, 1.0), (1.0, -1.2), (math.nan, 0)])
def test_out_of_domain(c, w):
    with pytest.raises(DomainError):
        region_predicate(RegionId.GAZI, c, w)


def test_oracle_needs_variant():
    with pytest.raises(DomainError):
        region_predicate(RegionId.ORACLE_IDENTITY, 0.5, 0.0)
    assert region_predicate(RegionId.ORACLE_IDENTITY, 0.5, 0.0, Variant.SIGMA1)


def test_boundary_at_zero_and_half():
    lo, hi = sys1_diagonal_boundary(0.0)
    assert lo == pytest.approx(12 / 7, abs=1e-12) and hi == pytest.approx(12 / 7, abs=1e-12)
    lo, hi = sys1_diagonal_boundary(0.5)
    assert lo == pytest.approx((156 - 20 * math.sqrt(6) * 0.5 * math.sqrt(6.75)) / 98)
    assert lo == pytest.approx(0.9425, abs=1e-4)
    assert hi == pytest.approx(2.242, abs=1e-3)


def test_boundary_at_sqrt7():
    lo, hi = sys1_diagonal_boundary(math.sqrt(7))
    assert lo == pytest.approx(-12 / 7, abs=1e-9) and hi == pytest.approx(-12 / 7, abs=1e-9)
    with pytest.raises(DomainError):
        sys1_diagonal_boundary(2.7)


@pytest.mark.parametrize("c,w,expected", [(0.9, 0.5, True), (1.0, 0.5, False),
                                          (1.7, 0.0, True), (1.72, 0.0, False)])
def test_diagonal_predicate(c, w, expected):
    assert bool(sys1_diagonal_predicate(c, w)) is expected


@given(st.floats(-math.sqrt(7), math.sqrt(7)))
def test_branches_are_roots_of_the_quartic(w):
    # 49 c^2 + (48 w^2 - 168) c + 24 w^4 - 168 w^2 + 144 vanishes on both branches
    for c in sys1_diagonal_boundary(w):
        val = 49 * c * c + (48 * w * w - 168) * c + 24 * w**4 - 168 * w * w + 144
        assert abs(val) <= 1e-9 * (1 + 49 * c * c + 168 * abs(c) + 168 * w * w + 24 * w**4)


SYMMETRIC = [RegionId.SYS1_IDENTITY, RegionId.SYS1_DIAGONAL, RegionId.SYS2_IDENTITY,
             RegionId.SYS2_DIAGONAL]


@given(st.sampled_from(SYMMETRIC), st.floats(0.001, 4), st.floats(-0.999, 0.999))
def test_w_symmetry(region, c, w):
    assert region_predicate(region, c, w) == region_predicate(region, c, -w)


@given(st.sampled_from(sorted(ANALYTIC, key=lambda r: r.value)),
       st.lists(st.tuples(st.floats(0.001, 4), st.floats(-0.999, 0.999)), min_size=1,
                max_size=20))
def test_mask_matches_predicate(region, pts):
    c, w = np.array(pts).T
    mask = region_mask(region, c, w)
    assert list(mask) == [region_predicate(region, a, b) for a, b in pts]


def test_poli_maximum_inside_window():
    w = np.linspace(-0.999, 0.999, 200_001)
    bound = 24 * (1 - w**2) / (7 - 5 * w)
    k = int(np.argmax(bound))
    # the bound peaks slightly above 4, near w = 0.42, and is 24/7 at w = 0
    assert 4.0 < bound[k] < 4.05
    assert 0.40 < w[k] < 0.44
    assert 24 * 1 / 7 == pytest.approx(bound[100_000])


@pytest.mark.parametrize("text,variant,expected", [
    ("sys-identity", "s1", RegionId.SYS1_IDENTITY),
    ("sys-offdiag", "s2", RegionId.SYS2_OFFDIAG),
    ("oracle-union", "σ2", RegionId.ORACLE_UNION_SYS2),
    ("oracle-diagonal", None, RegionId.ORACLE_DIAGONAL),
    ("Sys1_Diagonal", None, RegionId.SYS1_DIAGONAL),
    ("poli", None, RegionId.POLI),
])
def test_region_parse(text, variant, expected):
    assert RegionId.parse(text, variant) is expected


def test_region_parse_unknown():
    with pytest.raises(DomainError):
        RegionId.parse("nowhere")
