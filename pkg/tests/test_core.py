from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contactrelapse import (DFE, ContactProfile, EpiState, ModelParams, derived_rates,
                            incidence_g, incidence_partials, params_from_mapping,
                            rescale_absolute, rhs)
from contactrelapse.errors import InvalidParameterError, SingularDenominatorError

from oracles import exact_incidence

simplex = st.tuples(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1)).filter(
    lambda t: sum(t) > 1e-3).map(lambda t: EpiState(*t, renormalize=True))
contacts = st.builds(ContactProfile, st.floats(0.1, 10), st.floats(0, 10), st.floats(0, 10))
rates = st.builds(ModelParams, st.floats(1e-4, 1), st.floats(1e-4, 1), st.floats(0, 1),
                  st.floats(1e-5, 0.1))


def test_r0_for_relapse_rates(relapse_params):
    d = derived_rates(relapse_params, ContactProfile(3.75, 3.0, 6.375))
    assert d.r0 == pytest.approx(0.00096 * 3 / 0.00285)
    assert abs(d.r0 - 1.0105) < 1e-3
    assert d.c0 == 3.0


def test_r0_influenza():
    p = ModelParams(beta=0.07943065, gamma=1 / 4.1, phi=0.0, mu=0.0005)
    assert derived_rates(p, ContactProfile(5, 5, 5)).r0 == pytest.approx(1.625, abs=1e-3)


def test_r0_zero_without_infected_contacts(relapse_params):
    assert derived_rates(relapse_params, ContactProfile(1, 0, 1)).r0 == 0.0


def test_rate_ratios(relapse_params):
    d = derived_rates(relapse_params, ContactProfile(1, 1, 1))
    assert d.r_mu == pytest.approx(0.00015 / 0.00285)
    assert d.r_phi == pytest.approx(0.0044 / 0.00285)


@pytest.mark.parametrize("kw", [
    dict(beta=0, gamma=1, phi=0, mu=1), dict(beta=1.5, gamma=1, phi=0, mu=1),
    dict(beta=0.5, gamma=0, phi=0, mu=1), dict(beta=0.5, gamma=1, phi=-1, mu=1),
    dict(beta=0.5, gamma=1, phi=0, mu=0), dict(beta=float("nan"), gamma=1, phi=0, mu=1)])
def test_invalid_rates(kw):
    with pytest.raises(InvalidParameterError):
        ModelParams(**kw)


def test_contact_validation():
    with pytest.raises(InvalidParameterError):
        ContactProfile(0, 1, 1)
    with pytest.raises(InvalidParameterError):
        ContactProfile(1, -1, 1)
    with pytest.raises(InvalidParameterError):
        ContactProfile.from_ratios(3, 0, 1)


def test_ratios_round_trip():
    c = ContactProfile.from_ratios(3.0, 0.8, 1.7)
    assert (c.c_s, c.c_i, c.c_r) == pytest.approx((3.75, 3.0, 6.375))
    assert c.kappa == pytest.approx(0.8) and c.theta == pytest.approx(1.7)


def test_state_must_lie_on_simplex():
    with pytest.raises(InvalidParameterError):
        EpiState(0.5, 0.5, 0.5)
    with pytest.raises(InvalidParameterError):
        EpiState(1.1, -0.1, 0.0)
    assert EpiState(2, 1, 1, renormalize=True).as_tuple() == (0.5, 0.25, 0.25)


def test_incidence_at_dfe_is_c_i():
    assert incidence_g(DFE, ContactProfile(2.0, 7.0, 1.0)) == pytest.approx(7.0)


def test_incidence_matches_exact_rationals():
    st_ = EpiState(0.7, 0.1, 0.2)
    got = incidence_g(st_, ContactProfile(3.75, 3.0, 6.375))
    want = exact_incidence("0.7", "0.1", "0.2", "3.75", "3", "6.375")
    assert got == pytest.approx(float(want), rel=1e-15)
    assert want == Fraction(75, 28)


@settings(max_examples=200, deadline=None)
@given(state=simplex, c=st.floats(0.1, 10), nu=st.floats(0, 5))
def test_incidence_reduces_to_saturating_relapse_form(state, c, nu):
    g = incidence_g(state, ContactProfile(c, c, c * (1 + nu)))
    assert abs(g - c / (1 + nu * state.r)) <= 1e-12 * max(1.0, c)


def test_zero_activity_raises():
    with pytest.raises(SingularDenominatorError):
        incidence_g(EpiState(0, 0, 1), ContactProfile(1, 1, 0))


@settings(max_examples=200, deadline=None)
@given(state=simplex, c=contacts, p=rates)
def test_rhs_conserves_total(state, c, p):
    if state.s * c.c_s + state.i * c.c_i + state.r * c.c_r < 1e-6:
        return
    assert abs(sum(rhs(state, p, c))) < 1e-14


def test_dfe_is_fixed(relapse_params, triple_contacts):
    assert rhs(DFE, relapse_params, triple_contacts) == (0.0, 0.0, 0.0)


@settings(max_examples=100, deadline=None)
@given(state=simplex, c=contacts)
def test_partials_follow_closed_form(state, c):
    if state.s * c.c_s + state.i * c.c_i + state.r * c.c_r < 1e-3 or c.c_i < 1e-6:
        return
    g, gs, gi, gr = incidence_partials(state, c)
    for dg, ch in ((gs, c.c_s), (gi, c.c_i), (gr, c.c_r)):
        assert dg == pytest.approx(-g * g * ch / (c.c_s * c.c_i), rel=1e-12, abs=1e-300)


def test_rescale_absolute():
    assert rescale_absolute(9890, 100, 10, 10000).as_tuple() == pytest.approx((0.989, 0.01, 0.001))
    assert rescale_absolute(5, 0, 0, 5).as_tuple() == (1.0, 0.0, 0.0)
    rho = 0.03574
    assert rescale_absolute(10000 - rho * 10000 - 10, rho * 10000, 10, 10000).i == pytest.approx(rho)
    with pytest.raises(InvalidParameterError):
        rescale_absolute(1, 1, 1, 10)


def test_params_from_mapping_forms():
    base = dict(beta=0.1, gamma=0.2, phi=0.0, mu=0.01)
    _, c = params_from_mapping({**base, "c_i": 3, "kappa": 0.5, "theta": 2})
    assert c.c_s == pytest.approx(6)
    _, c = params_from_mapping({**base, "c_s": 1, "c_i": 2, "c_r": 3})
    assert c.c_r == 3
    with pytest.raises(InvalidParameterError):
        params_from_mapping({**base, "c_s": 1, "c_i": 2, "c_r": 3, "kappa": 1})
    with pytest.raises(InvalidParameterError):
        params_from_mapping({**base, "c_i": 2})
