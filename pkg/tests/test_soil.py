import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wpbusn.soil import (AIR_TO_SOIL, SOIL_TO_AIR, ComplexPermittivity, ModelValidityError,
                         PropagationConstants, SoilMedium, critical_angle, fresnel_reflectance,
                         fresnel_transmittance, propagation_constants, refraction_loss_db,
                         soil_path_loss_db, soil_permittivity)

F = 433e6


def peplinski_reference(freq, mv, sand, clay, rho_b, rho_s, temp_c=20.0):
    """Independent transcription: complex water permittivity from the
    temperature polynomials (Klein-Swift static value, Stogryn relaxation time)."""
    eps0 = 8.854e-12
    eps_w_inf = 4.9
    eps_w0 = 87.134 - 1.949e-1 * temp_c - 1.276e-2 * temp_c**2 + 2.491e-4 * temp_c**3
    rt = (1.1109e-10 - 3.824e-12 * temp_c + 6.938e-14 * temp_c**2
          - 5.096e-16 * temp_c**3) / (2 * np.pi)
    sigma = 0.0467 + 0.2204 * rho_b - 0.4111 * sand + 0.6614 * clay
    debye = eps_w_inf + (eps_w0 - eps_w_inf) / (1 + 1j * 2 * np.pi * freq * rt)
    e1 = debye.real
    e2 = -debye.imag + sigma / (2 * np.pi * eps0 * freq) * (rho_s - rho_b) / (rho_s * mv) if mv else 0
    es = (1.01 + 0.44 * rho_s) ** 2 - 0.062
    b1 = 1.2748 - 0.519 * sand - 0.152 * clay
    b2 = 1.33797 - 0.603 * sand - 0.166 * clay
    re = (1 + rho_b / rho_s * (es**0.65 - 1) + mv**b1 * e1**0.65 - mv) ** (1 / 0.65)
    re = 1.15 * re - 0.68
    im = (mv**b2 * e2**0.65) ** (1 / 0.65) if mv else 0.0
    return re, im


def test_dry_soil_permittivity():
    eps = soil_permittivity(SoilMedium(vwc=0.0), F)
    assert eps.real_part == pytest.approx(2.60, abs=0.05)
    assert eps.imag_part == 0.0


@pytest.mark.parametrize("mv", [0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5])
def test_matches_reference_implementation(mv):
    eps = soil_permittivity(SoilMedium(vwc=mv), F)
    re, im = peplinski_reference(F, mv, 0.22, 0.38, 1.5, 2.66)
    assert eps.real_part == pytest.approx(re, rel=5e-3)
    assert eps.imag_part == pytest.approx(im, rel=5e-3, abs=1e-12)


def test_moisture_raises_both_parts():
    dry = soil_permittivity(SoilMedium(vwc=0.0), F)
    wet = soil_permittivity(SoilMedium(vwc=0.1), F)
    wetter = soil_permittivity(SoilMedium(vwc=0.2), F)
    assert wet.real_part > dry.real_part and wet.imag_part > 0
    assert wetter.imag_part > wet.imag_part


def test_monotone_in_moisture_on_grid():
    parts = np.array([[e.real_part, e.imag_part] for e in
                      (soil_permittivity(SoilMedium(vwc=mv), F) for mv in np.linspace(0, 0.5, 11))])
    assert np.all(np.diff(parts[:, 0]) > 0)
    assert np.all(np.diff(parts[:, 1]) >= 0)


def test_validity_and_domain_errors():
    with pytest.raises(ModelValidityError):
        soil_permittivity(SoilMedium(), 2.4e9)
    with pytest.raises(ModelValidityError):
        soil_permittivity(SoilMedium(), 0.1e9)
    with pytest.raises(ValueError):
        SoilMedium(vwc=0.7)
    with pytest.raises(ValueError):
        SoilMedium(clay_fraction=0.8, sand_fraction=0.3)
    with pytest.raises(ValueError):
        SoilMedium(bulk_density=2.7)


def test_propagation_constants_lossless():
    pc = propagation_constants(ComplexPermittivity(2.60, 0.0), F)
    assert pc.alpha == 0.0
    assert pc.beta == pytest.approx(14.6, abs=0.05)
    k0 = 2 * math.pi * F / 299792458.0
    assert propagation_constants(ComplexPermittivity(1.0, 0.0), F).beta == pytest.approx(k0, rel=1e-12)
    assert k0 == pytest.approx(9.07, abs=0.01)


@given(st.floats(1.0, 80.0), st.one_of(st.just(0.0), st.floats(1e-12, 30.0)))
def test_propagation_constants_properties(re, im):
    pc = propagation_constants(ComplexPermittivity(re, im), F)
    k0 = 2 * math.pi * F / 299792458.0
    assert pc.alpha >= 0
    assert pc.beta >= k0 * (1 - 1e-12)
    assert (pc.alpha == 0) == (im == 0)
    if im == 0:
        assert pc.beta == pytest.approx(k0 * math.sqrt(re), rel=1e-12)
    # alpha^2 - beta^2 = -w^2 mu eps' and 2 alpha beta = w^2 mu eps''
    assert pc.beta**2 - pc.alpha**2 == pytest.approx(k0**2 * re, rel=1e-9)
    assert 2 * pc.alpha * pc.beta == pytest.approx(k0**2 * im, rel=1e-9, abs=1e-12)


def test_soil_path_loss_examples():
    assert soil_path_loss_db(1.0, PropagationConstants(0.0, 1.0)) == pytest.approx(6.4)
    assert soil_path_loss_db(2.0, PropagationConstants(0.0, 0.5)) == pytest.approx(6.4)
    assert soil_path_loss_db(1.0, PropagationConstants(0.0, 14.6)) == pytest.approx(29.69, abs=0.01)
    with pytest.raises(ValueError):
        soil_path_loss_db(0.0, PropagationConstants(0.0, 1.0))


@given(st.floats(0.01, 3.0), st.floats(0.0, 10.0), st.floats(1.0, 60.0))
def test_soil_path_loss_absorption_additive_and_increasing(d, alpha, beta):
    loss = soil_path_loss_db(d, PropagationConstants(alpha, beta))
    assert loss - soil_path_loss_db(d, PropagationConstants(0.0, beta)) == pytest.approx(
        8.69 * alpha * d, abs=1e-9)
    h = 1e-4
    assert soil_path_loss_db(d + h, PropagationConstants(alpha, beta)) > loss
    assert soil_path_loss_db(d, PropagationConstants(alpha + h, beta)) > loss
    assert soil_path_loss_db(d, PropagationConstants(alpha, beta + h)) > loss


def test_refraction_examples():
    vac = ComplexPermittivity(1.0, 0.0)
    for angle in (0.0, 0.3, 1.2):
        for direction in (SOIL_TO_AIR, AIR_TO_SOIL):
            assert refraction_loss_db(vac, angle, direction) == pytest.approx(0.0, abs=1e-12)
    eps = ComplexPermittivity(2.60, 0.0)
    n = math.sqrt(2.60)
    expected = -10 * math.log10(4 * n / (n + 1) ** 2)
    assert refraction_loss_db(eps, 0.0, SOIL_TO_AIR) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(0.25, abs=0.01)
    assert math.degrees(critical_angle(eps)) == pytest.approx(38.3, abs=0.1)
    assert refraction_loss_db(eps, math.radians(45), SOIL_TO_AIR) == math.inf
    assert math.isfinite(refraction_loss_db(eps, math.radians(45), AIR_TO_SOIL))


@settings(max_examples=200)
@given(st.floats(1.0, 40.0), st.floats(0.0, math.pi / 2 - 1e-6))
def test_refraction_properties(re, angle):
    eps = ComplexPermittivity(re, 0.0)
    up = refraction_loss_db(eps, angle, SOIL_TO_AIR)
    down = refraction_loss_db(eps, angle, AIR_TO_SOIL)
    assert up >= 0 and down >= 0
    crit = critical_angle(eps)
    if angle < crit * (1 - 1e-9):
        assert math.isfinite(up)
    elif angle > crit * (1 + 1e-9):
        assert up == math.inf
    assert refraction_loss_db(eps, 0.0, SOIL_TO_AIR) == pytest.approx(
        refraction_loss_db(eps, 0.0, AIR_TO_SOIL), rel=1e-9, abs=1e-15)


def test_bad_refraction_inputs():
    eps = ComplexPermittivity(4.0, 0.0)
    with pytest.raises(ValueError):
        refraction_loss_db(eps, math.pi / 2, SOIL_TO_AIR)
    with pytest.raises(ValueError):
        refraction_loss_db(eps, 0.0, "sideways")


@settings(max_examples=100)
@given(st.floats(1.0, 40.0), st.floats(0.0, 1.5))
def test_reflectance_and_transmittance_sum_to_one(re, angle):
    n = math.sqrt(re)
    for n1, n2 in ((1.0, n), (n, 1.0)):
        r = fresnel_reflectance(n1, n2, angle)
        t = fresnel_transmittance(n1, n2, angle)
        assert 0.0 <= r <= 1.0
        assert r + t == pytest.approx(1.0, abs=1e-12)
