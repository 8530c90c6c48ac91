"""RF propagation through moist soil and across the soil-air interface.

Permittivity follows the Peplinski semi-empirical mixing model (0.3-1.3 GHz
variant, with the linear correction on the real part). Path loss is the
modified Friis form used for underground links, and the interface loss is
the polarization-averaged Fresnel power transmittance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

C0 = 299792458.0
MU0 = 4e-7 * math.pi
EPS0 = 1.0 / (MU0 * C0**2)

# pure water (Debye relaxation, room temperature)
EPS_W_INF = 4.9
EPS_W_STATIC = 80.1
TWO_PI_TAU_W = 0.58e-10

SHAPE_ALPHA = 0.65
FREQ_MIN_HZ = 0.3e9
FREQ_MAX_HZ = 1.3e9

NP_TO_DB = 8.69

SOIL_TO_AIR = "soil_to_air"
AIR_TO_SOIL = "air_to_soil"


class ModelValidityError(ValueError):
    """Raised when an input falls outside the dielectric model's fitted range."""


@dataclass(frozen=True)
class SoilMedium:
    vwc: float = 0.1
    clay_fraction: float = 0.38
    sand_fraction: float = 0.22
    bulk_density: float = 1.5
    particle_density: float = 2.66

    def __post_init__(self):
        if not 0.0 <= self.vwc <= 0.5:
            raise ValueError(f"vwc must lie in [0, 0.5], got {self.vwc}")
        if self.clay_fraction < 0 or self.sand_fraction < 0:
            raise ValueError("soil texture fractions must be nonnegative")
        if self.clay_fraction + self.sand_fraction > 1.0:
            raise ValueError("clay_fraction + sand_fraction must not exceed 1")
        if not 0.0 < self.bulk_density < self.particle_density:
            raise ValueError("need 0 < bulk_density < particle_density")


@dataclass(frozen=True)
class ComplexPermittivity:
    real_part: float
    imag_part: float

    def __post_init__(self):
        if self.real_part < 1.0 or self.imag_part < 0.0:
            raise ValueError(f"unphysical permittivity {self.real_part} - j{self.imag_part}")

    @property
    def refractive_index(self) -> float:
        return math.sqrt(self.real_part)


@dataclass(frozen=True)
class PropagationConstants:
    alpha: float  # Np/m
    beta: float  # rad/m


def soil_permittivity(soil: SoilMedium, freq_hz: float) -> ComplexPermittivity:
    if not FREQ_MIN_HZ <= freq_hz <= FREQ_MAX_HZ:
        raise ModelValidityError(
            f"Peplinski model is fitted for 0.3-1.3 GHz, got {freq_hz / 1e9:.4g} GHz"
        )
    mv = soil.vwc
    sand, clay = soil.sand_fraction, soil.clay_fraction
    rho_b, rho_s = soil.bulk_density, soil.particle_density
    a = SHAPE_ALPHA

    eps_s = (1.01 + 0.44 * rho_s) ** 2 - 0.062
    beta_re = 1.2748 - 0.519 * sand - 0.152 * clay
    beta_im = 1.33797 - 0.603 * sand - 0.166 * clay
    sigma_eff = 0.0467 + 0.2204 * rho_b - 0.4111 * sand + 0.6614 * clay

    wt = freq_hz * TWO_PI_TAU_W
    eps_fw_re = EPS_W_INF + (EPS_W_STATIC - EPS_W_INF) / (1.0 + wt**2)

    mixed = 1.0 + (rho_b / rho_s) * (eps_s**a - 1.0) + mv**beta_re * eps_fw_re**a - mv
    real_part = 1.15 * mixed ** (1.0 / a) - 0.68

    if mv == 0.0:
        imag_part = 0.0
    else:
        eps_fw_im = wt * (EPS_W_STATIC - EPS_W_INF) / (1.0 + wt**2) + sigma_eff / (
            2.0 * math.pi * EPS0 * freq_hz
        ) * (rho_s - rho_b) / (rho_s * mv)
        imag_part = (mv**beta_im * eps_fw_im**a) ** (1.0 / a)
    return ComplexPermittivity(real_part, imag_part)


def propagation_constants(eps: ComplexPermittivity, freq_hz: float) -> PropagationConstants:
    omega = 2.0 * math.pi * freq_hz
    loss_tangent = eps.imag_part / eps.real_part
    root = math.sqrt(1.0 + loss_tangent**2)
    scale = math.sqrt(MU0 * EPS0 * eps.real_part / 2.0)
    # sqrt(root - 1) rewritten as x / sqrt(root + 1) to avoid cancellation
    alpha = omega * scale * loss_tangent / math.sqrt(root + 1.0)
    beta = omega * scale * math.sqrt(root + 1.0)
    return PropagationConstants(alpha, beta)


def soil_path_loss_db(dist_soil_m: float, pc: PropagationConstants) -> float:
    """Loss in dB of a soil segment of length ``dist_soil_m`` (m)."""
    if dist_soil_m <= 0:
        raise ValueError(f"soil path length must be positive, got {dist_soil_m}")
    return 6.4 + 20.0 * math.log10(dist_soil_m * pc.beta) + NP_TO_DB * pc.alpha * dist_soil_m


def critical_angle(eps: ComplexPermittivity) -> float:
    """Soil-side incidence angle beyond which soil->air transmission vanishes."""
    return math.asin(1.0 / eps.refractive_index)


def fresnel_transmittance(n1: float, n2: float, theta_i: float) -> float:
    """Polarization-averaged power transmittance from index n1 into n2.

    Returns 0 under total internal reflection.
    """
    sin_t = n1 / n2 * math.sin(theta_i)
    if sin_t >= 1.0:
        return 0.0
    cos_i = math.cos(theta_i)
    cos_t = math.sqrt(1.0 - sin_t**2)
    t_s = 2.0 * n1 * cos_i / (n1 * cos_i + n2 * cos_t)
    t_p = 2.0 * n1 * cos_i / (n2 * cos_i + n1 * cos_t)
    factor = (n2 * cos_t) / (n1 * cos_i)
    return 0.5 * factor * (t_s**2 + t_p**2)


def fresnel_reflectance(n1: float, n2: float, theta_i: float) -> float:
    """Polarization-averaged power reflectance; 1 under total internal reflection."""
    sin_t = n1 / n2 * math.sin(theta_i)
    if sin_t >= 1.0:
        return 1.0
    cos_i = math.cos(theta_i)
    cos_t = math.sqrt(1.0 - sin_t**2)
    r_s = (n1 * cos_i - n2 * cos_t) / (n1 * cos_i + n2 * cos_t)
    r_p = (n2 * cos_i - n1 * cos_t) / (n2 * cos_i + n1 * cos_t)
    return 0.5 * (r_s**2 + r_p**2)


def refraction_loss_db(
    eps: ComplexPermittivity, incidence_angle_rad: float, direction: str
) -> float:
    """Interface loss in dB; ``math.inf`` flags total internal reflection.

    ``incidence_angle_rad`` is measured on the incident side of the interface.
    """
    if not 0.0 <= incidence_angle_rad < math.pi / 2:
        raise ValueError(f"incidence angle must lie in [0, pi/2), got {incidence_angle_rad}")
    n = eps.refractive_index
    if direction == SOIL_TO_AIR:
        reflectance = fresnel_reflectance(n, 1.0, incidence_angle_rad)
    elif direction == AIR_TO_SOIL:
        reflectance = fresnel_reflectance(1.0, n, incidence_angle_rad)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if reflectance >= 1.0:
        return math.inf
    # log1p keeps full precision when the interface is nearly matched
    return max(0.0, -10.0 / math.log(10.0) * math.log1p(-reflectance))
