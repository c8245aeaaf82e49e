"""Property-based checks over randomized ferromagnetic baths."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import assert_roots_match, spins, uniform_couplings
from leeyang.partition import (
    build_exact,
    build_long_range,
    build_ring,
    eval_ratio,
)
from leeyang.spins import HalfInt, ladder_product_coeff
from leeyang.zeros import find_zeros

BETA = st.floats(min_value=0.0, max_value=4.0, allow_nan=False)


def random_poly(kind, n, two_s, beta):
    s = HalfInt(two_s)
    if kind == "exact":
        return build_exact(spins(two_s, n), uniform_couplings(n, 1.0), beta)
    if kind == "long_range":
        return build_long_range(n, s, 1.0, beta)
    return build_ring(max(n, 3), s, 1.0, beta)


@settings(max_examples=60, deadline=None)
@given(
    kind=st.sampled_from(["exact", "long_range", "ring"]),
    n=st.integers(min_value=2, max_value=6),
    two_s=st.integers(min_value=1, max_value=3),
    beta=BETA,
)
def test_coefficient_symmetry(kind, n, two_s, beta):
    poly = random_poly(kind, n, two_s, beta)
    scale = max(1.0, np.abs(poly.log_coeffs).max())
    np.testing.assert_allclose(
        poly.log_coeffs, poly.log_coeffs[::-1], rtol=0, atol=1e-12 * scale
    )


@settings(max_examples=40, deadline=None)
@given(
    kind=st.sampled_from(["exact", "long_range", "ring"]),
    n=st.integers(min_value=3, max_value=6),
    two_s=st.integers(min_value=1, max_value=3),
    beta=st.floats(min_value=1e-3, max_value=4.0, allow_nan=False),
)
def test_root_set_structure(kind, n, two_s, beta):
    poly = random_poly(kind, n, two_s, beta)
    zs = find_zeros(poly)
    assert len(zs.roots) == poly.two_ns
    # closed under conjugation
    assert_roots_match(zs.roots, np.conj(zs.roots), atol=1e-9)
    # product of roots
    c = poly.coeffs()
    expected = (-1) ** poly.two_ns * c[0] / c[-1]
    assert np.prod(zs.roots) == pytest.approx(expected, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(
    kind=st.sampled_from(["exact", "long_range", "ring"]),
    n=st.integers(min_value=2, max_value=5),
    two_s=st.integers(min_value=1, max_value=3),
    beta=BETA,
    theta=st.floats(min_value=-np.pi, max_value=np.pi, allow_nan=False),
)
def test_eval_ratio_bounded_on_unit_circle(kind, n, two_s, beta, theta):
    poly = random_poly(kind, n, two_s, beta)
    assert abs(eval_ratio(poly, np.exp(1j * theta))) <= 1 + 1e-14
    assert eval_ratio(poly, 1.0) == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_ladder_coefficients_positive_and_symmetric(data):
    d0 = data.draw(st.integers(min_value=1, max_value=12))
    delta = data.draw(st.integers(min_value=1, max_value=d0))
    k = data.draw(st.integers(min_value=0, max_value=d0 - delta))
    l = HalfInt(-d0 + 2 * k)
    coeff = ladder_product_coeff(HalfInt(d0), l, delta)
    assert coeff > 0
    # (S+)^delta matrix elements are mirror symmetric: <l+d| |l> = <-l| |-l-d>
    mirror = HalfInt(-(l.doubled + 2 * delta))
    assert coeff == pytest.approx(
        ladder_product_coeff(HalfInt(d0), mirror, delta), rel=1e-13
    )
