"""Flat ``key = value`` scenario files with Table-1 defaults."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .scenario import NetworkScenario, RadioConfig, dbm_to_watt, sample_ud_positions
from .soil import SoilMedium
from .strategies import STRATEGIES

SWEEP_VARIABLES = ("ris_elements", "burial_depth", "vwc", "num_uds")
DEFAULT_K_GRID = (10, 25, 40, 55, 70, 85, 100)


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Deployment:
    """Everything about a scenario except the UD placement, which varies per trial."""

    num_uds: int = 64
    burial_depth: float = 0.4
    deploy_radius: float = 5.0
    node_height: float = 1.5
    ris_height: float = 1.5
    num_ris_elements: int = 25
    soil: SoilMedium = field(default_factory=SoilMedium)
    radio: RadioConfig = field(default_factory=RadioConfig)

    def scenario(self, ud_positions) -> NetworkScenario:
        h = self.node_height
        return NetworkScenario(
            ps_pos=(-5.0, 0.0, h), ris_pos=(0.0, 5.0, self.ris_height), ap_pos=(5.0, 0.0, h),
            ud_positions=ud_positions, deploy_radius=self.deploy_radius,
            num_ris_elements=self.num_ris_elements, soil=self.soil, radio=self.radio)

    def sample(self, seed: int) -> NetworkScenario:
        rng = np.random.default_rng(seed)
        return self.scenario(sample_ud_positions(rng, self.num_uds, self.deploy_radius,
                                                 self.burial_depth))

    def with_value(self, variable: str, value) -> "Deployment":
        if variable == "ris_elements":
            return replace(self, num_ris_elements=int(value))
        if variable == "burial_depth":
            return replace(self, burial_depth=float(value))
        if variable == "vwc":
            return replace(self, soil=replace(self.soil, vwc=float(value)))
        if variable == "num_uds":
            return replace(self, num_uds=int(value))
        raise ValueError(f"unknown sweep variable {variable!r}")


@dataclass(frozen=True)
class SweepSpec:
    variable: str = "ris_elements"
    values: tuple = DEFAULT_K_GRID
    trials: int = 100
    base_seed: int = 0
    strategies: tuple = STRATEGIES

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"sweep variable must be one of {SWEEP_VARIABLES}")
        if not self.values:
            raise ValueError("sweep needs at least one value")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for s in self.strategies:
            if s not in STRATEGIES:
                raise ValueError(f"unknown strategy {s!r}")
        for v in self.values:
            _check_sweep_value(self.variable, v)


def _check_sweep_value(variable, v):
    if variable == "vwc" and not 0 <= v <= 0.5:
        raise ValueError(f"vwc value {v} outside [0, 0.5]")
    if variable == "burial_depth" and not v > 0:
        raise ValueError(f"burial depth {v} must be positive")
    if variable in ("ris_elements", "num_uds"):
        if v != int(v) or v < (0 if variable == "ris_elements" else 1):
            raise ValueError(f"{variable} value {v} must be a count")


def _int(s):
    v = float(s)
    if v != int(v):
        raise ValueError(f"{s!r} is not an integer")
    return int(v)


def _csv(conv):
    def parse(s):
        items = [x.strip() for x in s.split(",") if x.strip()]
        if not items:
            raise ValueError("empty list")
        return tuple(conv(x) for x in items)
    return parse


def _positive(x):
    return x > 0


# key: (parser, validator or None, range text)
KEYS = {
    "block_duration_s": (float, _positive, "> 0"),
    "deploy_radius_m": (float, _positive, "> 0"),
    "num_uds": (_int, lambda v: v >= 1, ">= 1"),
    "node_height_m": (float, _positive, "> 0"),
    "ris_height_m": (float, _positive, "> 0"),
    "burial_depth_m": (float, _positive, "> 0"),
    "vwc": (float, lambda v: 0 <= v <= 0.5, "in [0, 0.5]"),
    "clay": (float, lambda v: 0 <= v <= 1, "in [0, 1]"),
    "sand": (float, lambda v: 0 <= v <= 1, "in [0, 1]"),
    "bulk_density": (float, _positive, "> 0"),
    "particle_density": (float, _positive, "> 0"),
    "freq_hz": (float, lambda v: 0.3e9 <= v <= 1.3e9, "in [0.3e9, 1.3e9]"),
    "bandwidth_hz": (float, _positive, "> 0"),
    "tx_power_dbm": (float, math.isfinite, "finite"),
    "antenna_gain_dbi": (float, math.isfinite, "finite"),
    "ris_gain_dbi": (float, math.isfinite, "finite"),
    "backscatter_coeff": (float, lambda v: 0 < v <= 1, "in (0, 1]"),
    "eh_efficiency": (float, lambda v: 0 < v <= 1, "in (0, 1]"),
    "eh_saturation_w": (float, _positive, "> 0"),
    "eh_kind": (str, lambda v: v in ("linear_saturation", "logistic"),
                "linear_saturation or logistic"),
    "noise_dbm": (float, math.isfinite, "finite"),
    "snr_threshold_db": (float, math.isfinite, "finite"),
    "ris_elements": (_int, lambda v: v >= 0, ">= 0"),
    "pl_exp_direct": (float, lambda v: v >= 2, ">= 2"),
    "pl_exp_cascaded": (float, lambda v: v >= 2, ">= 2"),
    "sweep_variable": (str, lambda v: v in SWEEP_VARIABLES, f"one of {SWEEP_VARIABLES}"),
    "sweep_values": (_csv(float), None, ""),
    "trials": (_int, lambda v: v >= 1, ">= 1"),
    "base_seed": (_int, lambda v: v >= 0, ">= 0"),
    "strategies": (_csv(str), lambda v: all(s in STRATEGIES for s in v), f"subset of {STRATEGIES}"),
}

DEFAULTS = {
    "block_duration_s": 1.0,
    "deploy_radius_m": 5.0,
    "num_uds": 64,
    "node_height_m": 1.5,
    "burial_depth_m": 0.4,
    "vwc": 0.1,
    "clay": 0.38,
    "freq_hz": 433e6,
    "bandwidth_hz": 125e3,
    "tx_power_dbm": 30.0,
    "antenna_gain_dbi": 0.0,
    "backscatter_coeff": 0.6,
    "eh_efficiency": 0.6,
    "noise_dbm": -117.0,
    "snr_threshold_db": -20.0,
    "ris_elements": 25,
    "pl_exp_direct": 3.2,
    "pl_exp_cascaded": 2.0,
}

DEFAULT_TEXT = """\
# physical defaults
block_duration_s = 1
deploy_radius_m = 5
num_uds = 64
node_height_m = 1.5
burial_depth_m = 0.4
vwc = 0.1
clay = 0.38
freq_hz = 433e6
bandwidth_hz = 125e3
antenna_gain_dbi = 0
tx_power_dbm = 30
backscatter_coeff = 0.6
eh_efficiency = 0.6
noise_dbm = -117
snr_threshold_db = -20
ris_elements = 25
pl_exp_direct = 3.2
pl_exp_cascaded = 2.0

# secondary model parameters
sand = 0.22
bulk_density = 1.5
particle_density = 2.66
ris_height_m = 1.5
ris_gain_dbi = 4.971498726941338
eh_kind = linear_saturation
eh_saturation_w = 5e-3

# sweep
sweep_variable = ris_elements
sweep_values = 10, 25, 40, 55, 70, 85, 100
trials = 100
base_seed = 0
strategies = proposed, random_phase, wpbusn, wpusn
"""


def parse_config(text: str) -> tuple[Deployment, SweepSpec]:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        parser, check, expect = KEYS[key]
        try:
            parsed = parser(val)
        except ValueError as exc:
            raise ConfigError(f"malformed value for {key}: {val!r} ({exc})", lineno) from None
        if check is not None and not check(parsed):
            raise ConfigError(f"{key} = {val} out of range (expected {expect})", lineno)
        values[key] = (parsed, lineno)
    try:
        return _build({k: v for k, (v, _) in values.items()})
    except ValueError as exc:
        # cross-field failures are attributed to the last line that took part
        lines = [ln for _, ln in values.values()]
        raise ConfigError(str(exc), max(lines) if lines else None) from None


def _build(v: dict) -> tuple[Deployment, SweepSpec]:
    get = lambda k, default=None: v.get(k, DEFAULTS.get(k, default))  # noqa: E731
    soil_defaults = SoilMedium()
    soil = SoilMedium(
        vwc=get("vwc"), clay_fraction=get("clay"),
        sand_fraction=get("sand", soil_defaults.sand_fraction),
        bulk_density=get("bulk_density", soil_defaults.bulk_density),
        particle_density=get("particle_density", soil_defaults.particle_density))
    base = RadioConfig()
    gain = get("antenna_gain_dbi")
    radio = RadioConfig(
        freq_hz=get("freq_hz"), bandwidth_hz=get("bandwidth_hz"),
        tx_power_w=dbm_to_watt(get("tx_power_dbm")),
        ps_gain_dbi=gain, ud_gain_dbi=gain, ap_gain_dbi=gain,
        ris_gain_dbi=get("ris_gain_dbi", base.ris_gain_dbi),
        backscatter_coeff=get("backscatter_coeff"), eh_efficiency=get("eh_efficiency"),
        eh_saturation_w=get("eh_saturation_w", base.eh_saturation_w),
        eh_kind=get("eh_kind", base.eh_kind),
        noise_power_w=dbm_to_watt(get("noise_dbm")),
        snr_threshold=10.0 ** (get("snr_threshold_db") / 10.0),
        pl_exp_direct=get("pl_exp_direct"), pl_exp_cascaded=get("pl_exp_cascaded"),
        block_duration_s=get("block_duration_s"))
    deployment = Deployment(
        num_uds=get("num_uds"), burial_depth=get("burial_depth_m"),
        deploy_radius=get("deploy_radius_m"), node_height=get("node_height_m"),
        ris_height=get("ris_height_m", get("node_height_m")),
        num_ris_elements=get("ris_elements"), soil=soil, radio=radio)
    spec = SweepSpec(
        variable=get("sweep_variable", "ris_elements"),
        values=get("sweep_values", DEFAULT_K_GRID),
        trials=get("trials", 100), base_seed=get("base_seed", 0),
        strategies=get("strategies", STRATEGIES))
    return deployment, spec


def load_config(path) -> tuple[Deployment, SweepSpec]:
    return parse_config(Path(path).read_text())
