import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from chaplygin_riemann.eigen import characteristic_speeds, eigenvalues
from chaplygin_riemann.errors import OffCurveError
from chaplygin_riemann.state import ModelParams, PrimitiveState
from chaplygin_riemann.wavecurves import (
    ContactFamily,
    curve_point,
    hugoniot_identities,
    n_scaling,
    rh_residual,
)

from conftest import rel, states_with_c

BASE = PrimitiveState(1.0, 2.0, 0.5)
RHO_STAR = 3.7320508075688772


def test_family_one_through_base(unit):
    state, speed = curve_point(BASE, ContactFamily.FIRST, BASE.rho, unit)
    assert state == BASE
    assert speed == eigenvalues(BASE, unit)[0]


def test_family_three_keeps_third_speed(unit):
    state, speed = curve_point(BASE, 3, RHO_STAR, unit)
    assert speed == pytest.approx(0.8, abs=1e-15)
    lam3 = characteristic_speeds(state.rho, state.v, 1.0)[2]
    assert lam3 == pytest.approx(0.8, abs=1e-14)
    assert state.n == pytest.approx(n_scaling(1.0, 2.0, RHO_STAR, unit), rel=1e-15)


def test_family_two_changes_only_n(unit):
    state, speed = curve_point(BASE, 2, 7.0, unit)
    assert state == PrimitiveState(7.0, 2.0, 0.5)
    assert speed == 0.5


def test_off_curve(unit):
    # on J1 through (1,2,0.5) lambda1 = 0, so v = 1/rho reaches c as rho -> 1
    with pytest.raises(OffCurveError):
        curve_point(BASE, 1, 0.9, unit)


def test_n_scaling_identity_and_monotone(unit):
    assert n_scaling(2.0, 3.0, 3.0, unit) == 2.0
    values = [n_scaling(1.0, 2.0, r, unit) for r in np.linspace(1.01, 50, 40)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_rh_zero_for_equal_states(unit):
    res = rh_residual(BASE, BASE, 0.37, unit)
    assert (res.res1, res.res2, res.res3) == (0.0, 0.0, 0.0)


def test_rh_on_family_three(unit):
    right, speed = curve_point(BASE, 3, RHO_STAR, unit)
    assert rh_residual(BASE, right, speed, unit).max_abs < 1e-12


def test_rh_generic_pair_not_discontinuity(unit):
    assert rh_residual(BASE, PrimitiveState(1.0, 3.0, 0.1), 0.0, unit).max_abs > 1e-3


@settings(max_examples=200, deadline=None)
@given(states_with_c(), st.sampled_from([1, 2, 3]), st.floats(1.01, 50.0))
def test_curve_points_are_discontinuities(sc, family, value):
    base, params = sc
    c = params.c
    try:
        state, speed = curve_point(base, family, value / c if family != 2 else value, params)
    except OffCurveError:
        assume(False)
    assert rh_residual(base, state, speed, params).relative < 1e-12
    if family != 2:
        k = family - 1
        before = characteristic_speeds(base.rho, base.v, c)[k]
        after = characteristic_speeds(state.rho, state.v, c)[k]
        assert abs(after - before) <= 1e-13 * max(abs(before), c)


@settings(max_examples=200, deadline=None)
@given(states_with_c())
def test_family_speeds_ordered(sc):
    base, params = sc
    _, s1 = curve_point(base, 1, base.rho, params)
    _, s2 = curve_point(base, 2, base.n, params)
    _, s3 = curve_point(base, 3, base.rho, params)
    assert s1 < s2 < s3


@pytest.mark.parametrize("family, branch", [(1, "rhs20_plus"), (3, "rhs20_minus")])
@pytest.mark.parametrize("rho", [1.5, 2.7, 9.0])
def test_hugoniot_identities_on_curves(family, branch, rho):
    params = ModelParams(1.0)
    base = PrimitiveState(1.0, 2.0, 0.2)
    right, _ = curve_point(base, family, rho, params)
    ids = hugoniot_identities(base, right, params)
    assert ids.lhs18 == pytest.approx(ids.rhs18, rel=1e-12, abs=1e-15)
    assert rel(ids.lhs20, getattr(ids, branch)) < 1e-12


def test_hugoniot_identities_trivial(unit):
    ids = hugoniot_identities(BASE, BASE, unit)
    assert ids.lhs18 == 0.0 and ids.rhs18 == 0.0
