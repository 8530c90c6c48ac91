"""Network geometry and radio constants for the farm deployment."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import math

import numpy as np

from .soil import SoilMedium


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0) if np.ndim(db) else 10.0 ** (db / 10.0)


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class RadioConfig:
    freq_hz: float = 433e6
    bandwidth_hz: float = 125e3
    tx_power_w: float = 1.0
    ps_gain_dbi: float = 0.0
    ud_gain_dbi: float = 0.0
    ap_gain_dbi: float = 0.0
    # half-wavelength square element: aperture gain pi on each hop
    ris_gain_dbi: float = 10.0 * math.log10(math.pi)
    backscatter_coeff: float = 0.6
    eh_efficiency: float = 0.6
    eh_saturation_w: float = 5e-3
    eh_kind: str = "linear_saturation"
    noise_power_w: float = dbm_to_watt(-117.0)
    snr_threshold: float = 0.01
    pl_exp_direct: float = 3.2
    pl_exp_cascaded: float = 2.0
    block_duration_s: float = 1.0

    def __post_init__(self):
        for name in ("freq_hz", "bandwidth_hz", "tx_power_w", "eh_saturation_w",
                     "noise_power_w", "snr_threshold", "block_duration_s"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.backscatter_coeff <= 1:
            raise ValueError("backscatter_coeff must lie in (0, 1]")
        if not 0 < self.eh_efficiency <= 1:
            raise ValueError("eh_efficiency must lie in (0, 1]")
        if self.pl_exp_direct < 2 or self.pl_exp_cascaded < 2:
            raise ValueError("path loss exponents must be >= 2")


@dataclass(frozen=True)
class NetworkScenario:
    ps_pos: tuple = (-5.0, 0.0, 1.5)
    ris_pos: tuple = (0.0, 5.0, 1.5)
    ap_pos: tuple = (5.0, 0.0, 1.5)
    ud_positions: np.ndarray = field(default_factory=lambda: np.array([[0.0, 0.0, -0.4]]))
    deploy_radius: float = 5.0
    num_ris_elements: int = 25
    soil: SoilMedium = field(default_factory=SoilMedium)
    radio: RadioConfig = field(default_factory=RadioConfig)

    def __post_init__(self):
        uds = np.atleast_2d(np.asarray(self.ud_positions, dtype=float))
        object.__setattr__(self, "ud_positions", uds)
        if uds.shape[0] < 1 or uds.shape[1] != 3:
            raise ValueError("ud_positions must be an (N, 3) array with N >= 1")
        if np.any(uds[:, 2] >= 0):
            raise ValueError("every UD must be buried (z < 0)")
        for name in ("ps_pos", "ris_pos", "ap_pos"):
            if getattr(self, name)[2] <= 0:
                raise ValueError(f"{name} must lie above ground")
        if self.num_ris_elements < 0:
            raise ValueError("num_ris_elements must be >= 0")
        if self.deploy_radius <= 0:
            raise ValueError("deploy_radius must be positive")

    @property
    def num_uds(self) -> int:
        return self.ud_positions.shape[0]

    def with_(self, **changes) -> "NetworkScenario":
        return replace(self, **changes)


def sample_ud_positions(rng: np.random.Generator, num_uds: int, radius: float,
                        depth: float) -> np.ndarray:
    """Uniform placement in a disk of ``radius`` centered at the origin, buried at ``depth``."""
    r = radius * np.sqrt(rng.random(num_uds))
    phi = 2.0 * np.pi * rng.random(num_uds)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), np.full(num_uds, -depth)])
