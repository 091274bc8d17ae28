import math

import pytest
from scipy.constants import c

from conftest import MHZ, make_params
from esomit.errors import ParameterError, ZeroModeVolume
from esomit.feasibility import FiberCouplingSpec, NanoparticleSpec, \
    check_ranges, coupling_from_nanoparticle, fiber_coupling_rate


def test_nanoparticle_scaling_homogeneity(rng):
    base = NanoparticleSpec(alpha_pol=2e-22, f_at_r=0.5, V_m=1e-16)
    omega0 = 193e12
    j0 = coupling_from_nanoparticle(base, omega0).J
    for _ in range(20):
        k = rng.uniform(0.1, 10)
        assert coupling_from_nanoparticle(
            NanoparticleSpec(base.alpha_pol * k, base.f_at_r, base.V_m),
            omega0).J == pytest.approx(k * j0, rel=1e-12)
        assert coupling_from_nanoparticle(
            NanoparticleSpec(base.alpha_pol, base.f_at_r, base.V_m * k),
            omega0).J == pytest.approx(j0 / k, rel=1e-12)
        assert coupling_from_nanoparticle(base, omega0 * k).J == \
            pytest.approx(k * j0, rel=1e-12)
    f2 = NanoparticleSpec(base.alpha_pol, 1.0, base.V_m)
    assert coupling_from_nanoparticle(f2, omega0).J == \
        pytest.approx(j0 / 0.25, rel=1e-12)


def test_nanoparticle_sign_and_value():
    spec = NanoparticleSpec(alpha_pol=2e-22, f_at_r=0.5, V_m=1e-16)
    out = coupling_from_nanoparticle(spec, 193e12)
    assert out.J == pytest.approx(0.5 * 2e-22 * 0.25 * 193e12 / 1e-16,
                                  rel=1e-12)
    assert out.sign == -1   # positive polarizability red-shifts


def test_reported_J_round_trip():
    """Choose alpha so J = 0.87 MHz, then verify range membership."""
    omega0 = 193e12
    target = 0.87 * MHZ
    alpha = 2.0 * target * 1e-16 / (0.25 * omega0)
    spec = NanoparticleSpec(alpha_pol=alpha, f_at_r=0.5, V_m=1e-16)
    assert coupling_from_nanoparticle(spec, omega0).J == \
        pytest.approx(target, rel=1e-12)
    p = make_params(J=target)
    report = check_ranges(p)
    row = [r for r in report["rows"]
           if "exceptional-surface" in r["source"]][0]
    assert row["J_in_range"]


def test_fiber_rate_formula():
    spec = FiberCouplingSpec(eta=1e-7, n=1.45, R=34.5e-6)
    expected = 1e-7 * c / (4.0 * 1.45 * math.pi * 34.5e-6)
    assert fiber_coupling_rate(spec) == pytest.approx(expected, rel=1e-15)


def test_check_ranges_in_union():
    report = check_ranges(make_params(gamma1="1 MHz", gamma2="1 MHz",
                                      J="1 MHz"))
    assert report["gamma1_in_union"] and report["gamma2_in_union"]
    assert report["J_in_union"]
    assert report["warnings"] == []


def test_check_ranges_warns():
    report = check_ranges(make_params(gamma1="20 MHz", J="300 MHz"))
    assert not report["gamma1_in_union"]
    assert not report["J_in_union"]
    assert len(report["warnings"]) == 2


def test_validation():
    with pytest.raises(ZeroModeVolume):
        NanoparticleSpec(alpha_pol=1e-22, f_at_r=0.5, V_m=0.0)
    with pytest.raises(ParameterError):
        NanoparticleSpec(alpha_pol=1e-22, f_at_r=1.5, V_m=1e-16)
    with pytest.raises(ParameterError):
        FiberCouplingSpec(eta=-0.1, n=1.45, R=1e-5)
    with pytest.raises(ParameterError):
        FiberCouplingSpec(eta=0.1, n=0.9, R=1e-5)
