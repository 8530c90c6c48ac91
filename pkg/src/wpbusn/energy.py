"""Saturating RF-to-DC conversion at the underground devices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LINEAR_SATURATION = "linear_saturation"
LOGISTIC = "logistic"


@dataclass(frozen=True)
class HarvesterModel:
    kind: str = LINEAR_SATURATION
    efficiency: float = 0.6
    saturation_w: float = 5e-3
    logistic_a: float = 150.0
    logistic_b: float = 0.014

    def __post_init__(self):
        if self.kind not in (LINEAR_SATURATION, LOGISTIC):
            raise ValueError(f"unknown harvester kind {self.kind!r}")
        if not 0 < self.efficiency <= 1:
            raise ValueError("efficiency must lie in (0, 1]")
        if self.saturation_w <= 0:
            raise ValueError("saturation_w must be positive")
        if self.kind == LOGISTIC and (self.logistic_a <= 0 or self.logistic_b <= 0):
            raise ValueError("logistic parameters must be positive")


def harvest_power(model: HarvesterModel, incident_w):
    """Harvested DC power (W) for incident RF power ``incident_w`` (scalar or array).

    The logistic curve is the normalized sigmoid that passes through the origin
    and approaches ``saturation_w``. It is capped by ``efficiency * incident_w``
    so that a steep curve never outputs more than the linear model would.
    """
    p = np.asarray(incident_w, dtype=float)
    if np.any(p < 0):
        raise ValueError("incident power must be nonnegative")
    if model.kind == LINEAR_SATURATION:
        out = np.minimum(model.efficiency * p, model.saturation_w)
    else:
        a, b, m = model.logistic_a, model.logistic_b, model.saturation_w
        omega = 1.0 / (1.0 + np.exp(a * b))
        sig = m / (1.0 + np.exp(-a * (p - b)))
        out = (sig - m * omega) / (1.0 - omega)
        out = np.minimum(out, model.efficiency * p)
    return out if out.ndim else float(out)


def harvester_from_radio(radio) -> HarvesterModel:
    return HarvesterModel(kind=radio.eh_kind, efficiency=radio.eh_efficiency,
                          saturation_w=radio.eh_saturation_w)
