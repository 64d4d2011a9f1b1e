from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mills.lemmas import PrecisionExhausted, XcInstance, xc_inequality_holds, xc_margin


def test_integer_examples():
    r = xc_inequality_holds(XcInstance(2, 3))
    assert r.holds and (r.lhs, r.rhs) == (13.0, 27.0)
    r = xc_inequality_holds(XcInstance(10, 3))
    assert r.holds and (r.lhs, r.rhs) == (1101.0, 1331.0)


def test_near_boundary():
    r = xc_inequality_holds(XcInstance("1.0001", "2.0001"))
    assert r.holds
    # oracle: 50-digit evaluation
    with mpmath.workdps(50):
        x, c = mpmath.mpf("1.0001"), mpmath.mpf("2.0001")
        margin = (1 + x) ** c - (1 + x**c + x ** (c - 1))
    assert r.margin == pytest.approx(float(margin), rel=1e-12)


def test_fraction_input():
    assert xc_inequality_holds(XcInstance(Fraction(3, 2), Fraction(5, 2))).holds


def test_domain():
    with pytest.raises(ValueError):
        XcInstance(1, 3)
    with pytest.raises(ValueError):
        XcInstance(2, 2)


def test_precision_escalation_limit():
    # at 4 bits (x+1)^c and x^c are too blurred to separate
    with pytest.raises(PrecisionExhausted):
        xc_inequality_holds(XcInstance(900.0, 19.5), start_bits=2, max_bits=4)


def test_escalates_when_needed():
    r = xc_inequality_holds(XcInstance(999.0, 19.9), start_bits=8)
    assert r.holds and r.bits > 8


@given(st.floats(min_value=1, max_value=1e3, exclude_min=True), st.floats(min_value=2, max_value=20, exclude_min=True))
def test_holds_on_random_samples(x, c):
    assert xc_inequality_holds(XcInstance(x, c)).holds


@given(
    st.floats(min_value=1.01, max_value=50),
    st.floats(min_value=2.01, max_value=10),
    st.floats(min_value=0.01, max_value=5),
)
def test_margin_increasing_in_c(x, c, dc):
    assert xc_margin(x, c + dc) > xc_margin(x, c)
