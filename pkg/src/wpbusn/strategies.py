"""The proposed joint design and the three benchmark strategies."""

from __future__ import annotations

import numpy as np

from .allocation import ThroughputReport, allocate_time, evaluate_plan, slot_constants
from .channel import build_channels
from .phases import optimized_phase_plan, random_phase_plan
from .scenario import NetworkScenario

PROPOSED = "proposed"
RANDOM_PHASE = "random_phase"
WPBUSN = "wpbusn"
WPUSN = "wpusn"
STRATEGIES = (PROPOSED, RANDOM_PHASE, WPBUSN, WPUSN)


def run_strategy(scenario: NetworkScenario, strategy: str, seed: int) -> ThroughputReport:
    """One block of the given strategy on the channel realization fixed by ``seed``.

    The NLOS direct-link phases depend only on the seed, so all strategies see
    the same direct channels; the RIS-free benchmarks simply drop the surface.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    radio = scenario.radio
    if strategy in (WPBUSN, WPUSN):
        scenario = scenario.with_(num_ris_elements=0)
    channels = build_channels(scenario, seed)

    if strategy == RANDOM_PHASE:
        phases = random_phase_plan(channels, np.random.default_rng([seed, 0x5EED]))
    else:
        phases = optimized_phase_plan(channels)
    consts = slot_constants(channels, phases, radio)
    modes = np.zeros(channels.num_uds, dtype=bool) if strategy == WPUSN else None
    plan = allocate_time(channels, phases, radio, modes=modes, consts=consts)
    return evaluate_plan(plan, consts, radio)
