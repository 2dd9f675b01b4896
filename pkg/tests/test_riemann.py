import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaplygin_riemann.eigen import characteristic_speeds
from chaplygin_riemann.errors import InadmissibleStateError, RegimeError
from chaplygin_riemann.riemann import (
    ClassicalFan,
    DeltaShock,
    Region,
    RiemannData,
    WaveKind,
    classify,
    delta_coefficients,
    edge_speeds,
    sample,
    sample_xt,
    solve,
    solve_classical,
    solve_delta,
    star_density,
)
from chaplygin_riemann.state import ModelParams, PrimitiveState, validate_physical
from chaplygin_riemann.verify import grh_residual
from chaplygin_riemann.wavecurves import rh_residual

from conftest import ROOT3, admissible_states

RHO_STAR = 2.0 * (1.0 + ROOT3 / 2.0)


@st.composite
def riemann_data(draw):
    c = draw(st.sampled_from([0.5, 1.0, 3.0]))
    return RiemannData(draw(admissible_states(c)), draw(admissible_states(c)), ModelParams(c))


def test_classify_worked_cases(classical_case, delta_case):
    assert classify(RiemannData(*classical_case)) is WaveKind.CLASSICAL
    assert classify(RiemannData(*delta_case)) is WaveKind.DELTA
    assert edge_speeds(RiemannData(*delta_case)) == pytest.approx((0.5, -0.5), abs=1e-15)


def test_boundary_b_equals_a_is_delta():
    left = PrimitiveState(1.0, 2.0, 0.5)  # a = 0
    right = PrimitiveState(1.0, 2.0, -0.5)  # b = 0
    data = RiemannData(left, right)
    assert edge_speeds(data) == (0.0, 0.0)
    assert classify(data) is WaveKind.DELTA
    assert solve_delta(data).sigma == 0.0


def test_inadmissible_data_rejected():
    with pytest.raises(InadmissibleStateError):
        RiemannData(PrimitiveState(1.0, 2.0, 0.5), PrimitiveState(1.0, 0.5, 0.0))


def test_classical_worked_case(classical_case):
    fan = solve_classical(RiemannData(*classical_case))
    assert fan.rho_star == pytest.approx(RHO_STAR, rel=1e-13)
    assert fan.v_star == pytest.approx(2.0 - ROOT3, rel=1e-13)
    assert fan.speeds[0] == 0.0 and fan.speeds[2] == 0.5
    n_star = math.sqrt((RHO_STAR**2 - 1.0) / 3.0)
    assert fan.states[1].n == pytest.approx(n_star, rel=1e-13)
    assert fan.states[2].n == pytest.approx(n_star, rel=1e-13)


def test_star_density_formula_matches_expanded_form():
    a, b, c = -0.3, 0.6, 1.0
    expanded = (c**2 - a * b + math.sqrt(c**4 + a * a * b * b - c * c * (a * a + b * b))) / (c * c * (b - a))
    assert star_density(a, b, c) == pytest.approx(expanded, rel=1e-14)


def test_identity_data_gives_trivial_fan():
    s = PrimitiveState(1.5, 3.0, 0.2)
    fan = solve_classical(RiemannData(s, s))
    assert fan.rho_star == pytest.approx(3.0, rel=1e-14)
    assert fan.v_star == pytest.approx(0.2, rel=1e-14)


def test_solvers_reject_wrong_regime(classical_case, delta_case):
    with pytest.raises(RegimeError):
        solve_classical(RiemannData(*delta_case))
    with pytest.raises(RegimeError):
        solve_delta(RiemannData(*classical_case))


def test_symmetric_delta(delta_case):
    data = RiemannData(*delta_case)
    ds = solve_delta(data)
    assert ds.sigma == 0.0
    assert ds.w_slope == pytest.approx(20.0 / 3.0, rel=1e-13)
    assert ds.h_slope == pytest.approx(8.0 / 3.0, rel=1e-13)
    E, F, G, _, _ = delta_coefficients(data)
    assert E == 0.0 and G == 0.0
    assert F == pytest.approx(-20.0 / 3.0, rel=1e-13)


def test_delta_weights_grow_with_approach_speed():
    slow = solve_delta(RiemannData(PrimitiveState(1, 2, 0.6), PrimitiveState(1, 2, -0.6)))
    fast = solve_delta(RiemannData(PrimitiveState(1, 2, 0.9), PrimitiveState(1, 2, -0.9)))
    assert fast.w_slope > slow.w_slope > 0


def test_asymmetric_delta_moves_right():
    data = RiemannData(PrimitiveState(1.0, 3.0, 0.9), PrimitiveState(1.0, 2.0, -0.6))
    ds = solve_delta(data)
    a, b = edge_speeds(data)
    assert b <= ds.sigma <= a
    assert ds.sigma > 0


@settings(max_examples=300, deadline=None)
@given(riemann_data())
def test_random_solutions(data):
    sol = solve(data)
    c = data.params.c
    a, b = edge_speeds(data)
    if isinstance(sol.wave, ClassicalFan):
        fan = sol.wave
        assert a < fan.v_star < b
        for k in range(3):
            assert validate_physical(fan.states[k], data.params)
            res = rh_residual(fan.states[k], fan.states[k + 1], fan.speeds[k], data.params)
            assert res.relative < 1e-12
        lam1 = characteristic_speeds(fan.rho_star, fan.v_star, c)[0]
        assert abs(lam1 - a) < 1e-12 * c
    else:
        ds = sol.wave
        assert b <= ds.sigma <= a
        assert ds.h_slope >= 0 and ds.w_slope >= 0
        assert ds.F**2 - ds.E * ds.G >= -1e-13 * max(ds.F**2, abs(ds.E * ds.G))
        assert grh_residual(ds, data).relative < 1e-12


def test_sample_region_order(classical_case):
    sol = solve(RiemannData(*classical_case))
    xs = [-1 + 0.25 * i for i in range(9)]
    tags = [sample_xt(sol, 1.0, x).region for x in xs]
    order = [Region.LEFT, Region.STAR1, Region.STAR2, Region.RIGHT]
    ranks = [order.index(t) for t in tags]
    assert ranks == sorted(ranks)
    assert set(tags) == set(order)


def test_sample_boundaries(classical_case):
    sol = solve(RiemannData(*classical_case))
    a, v_s, b = sol.wave.speeds
    assert sample(sol, a).region is Region.STAR1
    assert sample(sol, v_s).region is Region.STAR1
    assert sample(sol, b).region is Region.STAR2
    assert sample(sol, math.nextafter(b, 2.0)).region is Region.RIGHT


def test_sample_delta_carrier(delta_case):
    sol = solve(RiemannData(*delta_case))
    hit = sample(sol, 0.0)
    assert hit.region is Region.DELTA and hit.state is None
    assert hit.carrier.w_slope == sol.wave.w_slope
    assert sample(sol, -1e-9).state == delta_case[0]
    assert sample(sol, 1e-9).state == delta_case[1]


def test_sample_xt_needs_positive_time(classical_case):
    with pytest.raises(ValueError):
        sample_xt(solve(RiemannData(*classical_case)), 0.0, 0.1)


def test_solution_kind(delta_case):
    sol = solve(RiemannData(*delta_case))
    assert sol.kind is WaveKind.DELTA
    assert isinstance(sol.wave, DeltaShock)
    assert sol.wave.v_delta == sol.wave.sigma
