"""Simulation and joint RIS-phase / TDMA-time optimization for RIS-aided
wireless-powered backscatter underground sensor networks."""

from .allocation import (SlotConstants, SlotPlan, ThroughputReport, allocate_time,
                         evaluate_plan, select_modes, slot_constants, snr_bc)
from .channel import ChannelSet, build_channels, composite_gain, link_coefficient, segment_split
from .config import Deployment, SweepSpec, load_config, parse_config
from .energy import HarvesterModel, harvest_power
from .harness import SweepRow, emit_csv, emit_plot, run_sweep
from .phases import (PhasePlan, optimize_phases_bc, optimize_phases_single_link,
                     optimize_phases_wet)
from .scenario import NetworkScenario, RadioConfig, sample_ud_positions
from .soil import (ComplexPermittivity, PropagationConstants, SoilMedium, propagation_constants,
                   refraction_loss_db, soil_path_loss_db, soil_permittivity)
from .strategies import STRATEGIES, run_strategy

__version__ = "0.1.0"
