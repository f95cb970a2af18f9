import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contactrelapse import ContactProfile, ModelParams, derived_rates, endemic_equilibria, rhs
from contactrelapse.equilibria import (coefficients_from_ratios, count_endemic_roots,
                                       cubic_coefficients, disease_free, lift)
from contactrelapse.stability import MARGINAL, STABLE, UNSTABLE

from conftest import I_STARS, RELAPSE
from oracles import endemic_scan, exact_cubic


def test_triple_equilibrium(relapse_params, triple_contacts):
    eq = endemic_equilibria(relapse_params, triple_contacts)
    assert eq.i_stars == pytest.approx(I_STARS, abs=1e-4)
    assert [e.stability for e in eq.endemic] == [STABLE, UNSTABLE, STABLE]
    assert eq.points[0] is eq.dfe


def test_equilibria_are_fixed_points(relapse_params, triple_contacts):
    for e in endemic_equilibria(relapse_params, triple_contacts).endemic:
        assert max(abs(v) for v in rhs(e.state, relapse_params, triple_contacts)) < 1e-8
        s, i, r = lift(e.i_star, relapse_params)
        assert e.state.as_tuple() == pytest.approx((s, i, r), abs=1e-12)


def test_roots_match_growth_rate_scan(relapse_params, triple_contacts):
    got = endemic_equilibria(relapse_params, triple_contacts, classify=False).i_stars
    assert got == pytest.approx(endemic_scan(relapse_params, triple_contacts), abs=1e-6)


def test_coefficients_match_exact_rationals(relapse_params, triple_contacts):
    d = derived_rates(relapse_params, triple_contacts)
    cf = cubic_coefficients(d, 0.8, 1.7)
    want = exact_cubic(d.r0, d.r_mu, d.r_phi, 0.8, 1.7)
    assert cf.as_tuple() == pytest.approx([float(x) for x in want], rel=1e-12, abs=1e-18)
    assert cf.a0 < 0 < cf.a3


def test_a0_vanishes_at_threshold():
    assert coefficients_from_ratios(1.0, 0.05, 1.5, 0.8, 1.7).a0 == 0.0


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0, 20), st.floats(0.1, 3))
def test_kappa_one_leading_coefficient(r_mu, r_phi, r0):
    assert coefficients_from_ratios(r0, r_mu, r_phi, 1.0, 1.3).a3 == pytest.approx(r_phi ** 2 * r0)


def test_no_endemic_state_far_below_threshold(relapse_params):
    c = ContactProfile.from_ratios(0.5 * 0.00285 / 0.00096, 0.8, 1.7)
    assert endemic_equilibria(relapse_params, c).endemic == ()


def test_no_relapse_single_endemic_root():
    p = ModelParams(**{**RELAPSE, "phi": 0.0})
    c = ContactProfile.from_ratios(1.5 * 0.00285 / 0.00096, 0.8, 1.7)
    eq = endemic_equilibria(p, c)
    assert len(eq.endemic) == 1
    assert eq.i_stars == pytest.approx(endemic_scan(p, c), abs=1e-6)


@pytest.mark.parametrize("r0, label", [(0.9, STABLE), (1.1, UNSTABLE), (1.0, MARGINAL)])
def test_dfe_stability_threshold(relapse_params, r0, label):
    c = ContactProfile(1.0, r0 * 0.00285 / 0.00096, 1.0)
    if r0 == 1.0:
        p = ModelParams(beta=0.5, gamma=0.3, phi=0.1, mu=0.2)
        c = ContactProfile(1.0, 1.0, 1.0)
        assert derived_rates(p, c).r0 == 1.0
        assert disease_free(p, c).stability == label
    else:
        assert disease_free(relapse_params, c).stability == label


def test_count_endemic_roots_by_region(relapse_params):
    m, f = relapse_params.r_mu, relapse_params.r_phi
    assert count_endemic_roots(0.8, m, f, 0.8, 1.7) == 0
    assert count_endemic_roots(0.9, m, f, 0.8, 1.7) == 2
    assert count_endemic_roots(1.005, m, f, 0.8, 1.7) == 3
    assert count_endemic_roots(1.1, m, f, 0.8, 1.7) == 1
