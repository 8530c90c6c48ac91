"""Direct and RIS-cascaded channel coefficients for buried devices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import NetworkScenario
from .soil import (AIR_TO_SOIL, C0, SOIL_TO_AIR, propagation_constants,
                   refraction_loss_db, soil_path_loss_db, soil_permittivity)

REFERENCE_DISTANCE_M = 1.0


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class ChannelSet:
    """Complex baseband coefficients; element axis last.

    ``a_pr`` PS->RIS (K,), ``b_ru`` RIS->UD (N, K), ``c_ur`` UD->RIS (N, K),
    ``d_ra`` RIS->AP (K,).
    """

    h_direct_pu: np.ndarray
    h_direct_ua: np.ndarray
    a_pr: np.ndarray
    b_ru: np.ndarray
    c_ur: np.ndarray
    d_ra: np.ndarray

    @property
    def num_uds(self) -> int:
        return self.h_direct_pu.shape[0]

    @property
    def num_elements(self) -> int:
        return self.a_pr.shape[0]

    @property
    def g_pu(self) -> np.ndarray:
        """Per-element cascaded PS->RIS->UD products, shape (N, K)."""
        return self.a_pr[None, :] * self.b_ru

    @property
    def g_ua(self) -> np.ndarray:
        """Per-element cascaded UD->RIS->AP products, shape (N, K)."""
        return self.c_ur * self.d_ra[None, :]

    def without_ris(self) -> "ChannelSet":
        n = self.num_uds
        empty = np.zeros(0, dtype=complex)
        return ChannelSet(self.h_direct_pu, self.h_direct_ua, empty,
                          np.zeros((n, 0), dtype=complex), np.zeros((n, 0), dtype=complex), empty)


def segment_split(endpoint_above, ud):
    """Split a buried-node path into (soil_dist, air_dist, incidence_angle).

    The ray leaves the soil vertically, so the soil segment is the burial
    depth and the air segment starts at the surface point above the UD.
    """
    endpoint_above = np.asarray(endpoint_above, dtype=float)
    ud = np.asarray(ud, dtype=float)
    if not ud[2] < 0 <= endpoint_above[2]:
        raise GeometryError("need ud below the surface and the endpoint at or above it")
    surface = np.array([ud[0], ud[1], 0.0])
    return -ud[2], float(np.linalg.norm(endpoint_above - surface)), 0.0


def free_space_loss_db(dist_m: float, freq_hz: float) -> float:
    return 20.0 * math.log10(freq_hz) + 20.0 * math.log10(dist_m) - 147.55


def link_loss_db(soil_dist, air_dist, incidence_angle, direction, pl_exponent,
                 scenario: NetworkScenario, gains_dbi=0.0) -> float:
    if air_dist < REFERENCE_DISTANCE_M:
        raise GeometryError(f"air segment {air_dist:.3g} m is shorter than the 1 m reference")
    radio = scenario.radio
    loss = free_space_loss_db(REFERENCE_DISTANCE_M, radio.freq_hz)
    loss += 10.0 * pl_exponent * math.log10(air_dist / REFERENCE_DISTANCE_M)
    if soil_dist > 0:
        eps = soil_permittivity(scenario.soil, radio.freq_hz)
        pc = propagation_constants(eps, radio.freq_hz)
        loss += soil_path_loss_db(soil_dist, pc)
        loss += refraction_loss_db(eps, incidence_angle, direction)
    return loss - gains_dbi


def link_coefficient(soil_dist, air_dist, incidence_angle, direction, pl_exponent,
                     scenario: NetworkScenario, rng: np.random.Generator | None = None,
                     gains_dbi=0.0) -> complex:
    """Complex coefficient of one hop.

    With ``rng`` the phase is uniform on [0, 2pi) (scattered NLOS link);
    otherwise it is the propagation phase of the soil and air segments.
    """
    loss = link_loss_db(soil_dist, air_dist, incidence_angle, direction, pl_exponent,
                        scenario, gains_dbi)
    if math.isinf(loss):
        return 0j
    amplitude = 10.0 ** (-loss / 20.0)
    if rng is not None:
        phase = rng.uniform(0.0, 2.0 * math.pi)
    else:
        freq = scenario.radio.freq_hz
        phase = -2.0 * math.pi * freq / C0 * air_dist
        if soil_dist > 0:
            pc = propagation_constants(soil_permittivity(scenario.soil, freq), freq)
            phase -= pc.beta * soil_dist
    return amplitude * complex(math.cos(phase), math.sin(phase))


def build_channels(scenario: NetworkScenario, rng_seed: int) -> ChannelSet:
    """Channel realization for ``scenario``; bit-identical for a given seed."""
    rng = np.random.default_rng(rng_seed)
    radio = scenario.radio
    ps, ris, ap = (np.asarray(p, dtype=float) for p in (scenario.ps_pos, scenario.ris_pos,
                                                         scenario.ap_pos))
    k = scenario.num_ris_elements
    n = scenario.num_uds
    g_ps_ud = radio.ps_gain_dbi + radio.ud_gain_dbi
    g_ud_ap = radio.ud_gain_dbi + radio.ap_gain_dbi

    h_pu = np.empty(n, dtype=complex)
    h_ua = np.empty(n, dtype=complex)
    b_ru = np.empty((n, k), dtype=complex)
    for i, ud in enumerate(scenario.ud_positions):
        soil, air, angle = segment_split(ps, ud)
        h_pu[i] = link_coefficient(soil, air, angle, AIR_TO_SOIL, radio.pl_exp_direct,
                                   scenario, rng, g_ps_ud)
        soil, air, angle = segment_split(ap, ud)
        h_ua[i] = link_coefficient(soil, air, angle, SOIL_TO_AIR, radio.pl_exp_direct,
                                   scenario, rng, g_ud_ap)
        if k:
            soil, air, angle = segment_split(ris, ud)
            # vertical exit at normal incidence: both directions see the same loss
            b_ru[i, :] = link_coefficient(soil, air, angle, AIR_TO_SOIL, radio.pl_exp_cascaded,
                                          scenario, None, radio.ris_gain_dbi + radio.ud_gain_dbi)
    c_ur = b_ru.copy()
    if k:
        a = link_coefficient(0.0, float(np.linalg.norm(ris - ps)), 0.0, AIR_TO_SOIL,
                             radio.pl_exp_cascaded, scenario, None,
                             radio.ps_gain_dbi + radio.ris_gain_dbi)
        d = link_coefficient(0.0, float(np.linalg.norm(ap - ris)), 0.0, SOIL_TO_AIR,
                             radio.pl_exp_cascaded, scenario, None,
                             radio.ris_gain_dbi + radio.ap_gain_dbi)
        a_pr = np.full(k, a, dtype=complex)
        d_ra = np.full(k, d, dtype=complex)
    else:
        a_pr = np.zeros(0, dtype=complex)
        d_ra = np.zeros(0, dtype=complex)
    return ChannelSet(h_pu, h_ua, a_pr, b_ru, c_ur, d_ra)


def composite_gain(h_direct, per_element_products, phases):
    """Coherent sum h_d + sum_k g_k exp(j theta_k); broadcasts over leading axes."""
    g = np.asarray(per_element_products)
    theta = np.asarray(phases, dtype=float)
    if g.shape[-1] != theta.shape[-1]:
        raise ValueError(f"{g.shape[-1]} element products but {theta.shape[-1]} phases")
    return h_direct + np.sum(g * np.exp(1j * theta), axis=-1)
