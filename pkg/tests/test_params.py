"""Parameter handling: validation windows and the dimensionless reduction."""

import math

import pytest
from mpmath import mp

from jjphase.errors import UnsupportedOrderError
from jjphase.params import (ALPHA_MAX, ALPHA_MIN, DEFAULT_ABC, DEFAULT_BBC,
                            EPS0, MU0, PHI0, DimensionlessParams,
                            PhysicalJunctionParams, check_alpha,
                            derive_constants, nondimensionalize, validate)

# A plausible Nb/AlOx/Nb-style junction, used by all reduction tests.
REFERENCE = dict(d=1.0e-10, t_b=1.0e-7, width=5.0e-5, half_length=5.0e-4,
                 eps=10.0, sigma0=1.0e-3, area=2.5e-8, jc=100.0, jbias=50.0,
                 alpha=0.75)


def make_phys(**overrides):
    kwargs = dict(REFERENCE)
    kwargs.update(overrides)
    return PhysicalJunctionParams(**kwargs)


def mp_constants(phys):
    """50-digit reference for derive_constants."""
    mp.dps = 50
    d, t_b, eps = mp.mpf(phys.d), mp.mpf(phys.t_b), mp.mpf(phys.eps)
    eps0, mu0, phi0 = mp.mpf(EPS0), mp.mpf(MU0), mp.mpf(PHI0)
    cbar = mp.sqrt(d / (eps * eps0 * mu0 * t_b))
    lam_j = mp.sqrt(phi0 / (2 * mp.pi * mu0 * t_b * mp.mpf(phys.jc)))
    cap = eps * eps0 * mp.mpf(phys.area) / d
    beta = mp.mpf(phys.sigma0) / cap
    return cbar, lam_j, cap, beta


def test_derived_constants_match_extended_precision():
    phys = make_phys()
    con = derive_constants(phys)
    cbar, lam_j, cap, beta = mp_constants(phys)
    assert con.cbar == pytest.approx(float(cbar), rel=1e-14)
    assert con.lambda_j == pytest.approx(float(lam_j), rel=1e-14)
    assert con.capacitance == pytest.approx(float(cap), rel=1e-14)
    assert con.beta == pytest.approx(float(beta), rel=1e-14)


@pytest.mark.parametrize("alpha", [0.6, 0.75, 0.9, 1.0])
@pytest.mark.parametrize("eta", [None, 1.0e-12, 3.7e-11])
def test_damping_coefficients_match_extended_precision(alpha, eta):
    phys = make_phys(alpha=alpha, eta=eta)
    dp = nondimensionalize(phys)
    cbar, lam_j, _, beta = mp_constants(phys)
    a = mp.mpf(alpha)
    eta_mp = mp.mpf(eta) if eta is not None else lam_j / cbar
    g1 = beta * lam_j ** (2 - a) / (cbar ** (2 - a) * eta_mp ** (1 - a))
    g2 = (cbar * lam_j) ** (2 * (1 - a)) / eta_mp ** (1 - a)
    assert dp.gamma1 == pytest.approx(float(g1), rel=1e-13)
    assert dp.gamma2 == pytest.approx(float(g2), rel=1e-13)
    assert dp.lam == pytest.approx(float(mp.mpf(phys.jbias) / mp.mpf(phys.jc)),
                                   rel=1e-15)


@pytest.mark.parametrize("eta", [None, 1.0e-12, 5.0e-10])
def test_classical_limit_is_eta_independent(eta):
    # At alpha = 1 the time scale drops out: gamma1 = beta*lambda_j/cbar,
    # gamma2 = 1, whatever eta was chosen.
    phys = make_phys(alpha=1.0, eta=eta)
    con = derive_constants(phys)
    dp = nondimensionalize(phys)
    assert dp.gamma2 == 1.0
    assert dp.gamma1 == pytest.approx(con.beta * con.lambda_j / con.cbar,
                                      rel=1e-14)


def test_bias_ratio_invariant_under_joint_current_scaling():
    a = nondimensionalize(make_phys())
    b = nondimensionalize(make_phys(jc=300.0, jbias=150.0))
    assert a.lam == pytest.approx(b.lam, rel=1e-15)
    assert a.lam == 0.5


def test_boundary_slopes_from_field_and_feed_current():
    phys = make_phys(b_ext=2.0e-6, i_total=1.0e-4)
    dp = nondimensionalize(phys)
    con = derive_constants(phys)
    scale = 2.0 * math.pi * phys.t_b * con.lambda_j / PHI0
    feed = MU0 * phys.i_total / (2.0 * phys.width)
    assert dp.abc == pytest.approx(scale * (phys.b_ext - feed), rel=1e-14)
    assert dp.bbc == pytest.approx(scale * (phys.b_ext + feed), rel=1e-14)
    # Feed current alone: antisymmetric slopes.
    dp2 = nondimensionalize(make_phys(i_total=1.0e-4))
    assert dp2.abc == pytest.approx(-dp2.bbc, rel=1e-14)


def test_default_boundary_slopes_without_field_data():
    dp = nondimensionalize(make_phys())
    assert dp.abc == DEFAULT_ABC
    assert dp.bbc == DEFAULT_BBC


def test_check_alpha_window():
    assert check_alpha(1.0) == 1.0
    assert check_alpha(0.5000001) == 0.5000001
    for bad in (0.5, 0.4, 1.0000001, 0.0, -0.3):
        with pytest.raises(UnsupportedOrderError):
            check_alpha(bad)
    assert ALPHA_MIN == 0.5 and ALPHA_MAX == 1.0


@pytest.mark.parametrize("name,value", [
    ("d", 0.0), ("t_b", -1.0e-7), ("width", 0.0), ("half_length", -1.0),
    ("eps", 0.0), ("area", 0.0), ("jc", 0.0), ("eta", 0.0),
])
def test_physical_params_reject_nonpositive_naming_field(name, value):
    with pytest.raises(ValueError, match=name):
        make_phys(**{name: value})


def test_physical_params_reject_negative_conductance_and_bias():
    with pytest.raises(ValueError, match="sigma0"):
        make_phys(sigma0=-1.0)
    with pytest.raises(ValueError, match="jbias"):
        make_phys(jbias=-1.0)


def test_validate_names_every_violation():
    bad = DimensionlessParams(alpha=0.3, gamma1=-1.0, gamma2=0.0, c=1.5,
                              t_final=0.0)
    problems = "; ".join(validate(bad))
    for token in ("alpha", "gamma1", "gamma2", "c =", "t_final"):
        assert token in problems
    assert validate(DimensionlessParams()) == []


def test_default_bundle_values():
    dp = DimensionlessParams()
    assert (dp.alpha, dp.gamma1, dp.gamma2, dp.lam) == (0.9, 0.05, 5.0, 0.5)
    assert (dp.abc, dp.bbc) == (DEFAULT_ABC, DEFAULT_BBC)
    assert (dp.c, dp.t_final) == (0.9, 1.0)
