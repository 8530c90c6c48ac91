import math

import pytest

from wpbusn.config import (DEFAULT_K_GRID, DEFAULT_TEXT, ConfigError, Deployment, SweepSpec,
                           load_config, parse_config)
from wpbusn.scenario import RadioConfig
from wpbusn.strategies import STRATEGIES


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.cfg"
    path.write_text("")
    dep, spec = load_config(path)
    assert dep == Deployment()
    assert dep.num_uds == 64 and dep.burial_depth == 0.4 and dep.deploy_radius == 5
    assert dep.soil.vwc == 0.1 and dep.soil.clay_fraction == 0.38
    r = dep.radio
    assert r.freq_hz == 433e6 and r.bandwidth_hz == 125e3
    assert r.tx_power_w == pytest.approx(1.0)
    assert r.noise_power_w == pytest.approx(10 ** (-147 / 10))
    assert (r.backscatter_coeff, r.eh_efficiency) == (0.6, 0.6)
    assert (r.pl_exp_direct, r.pl_exp_cascaded, r.block_duration_s) == (3.2, 2.0, 1.0)
    assert spec.values == DEFAULT_K_GRID and spec.trials == 100
    assert tuple(spec.strategies) == STRATEGIES


def test_default_text_round_trips():
    dep, spec = parse_config(DEFAULT_TEXT)
    assert dep == Deployment()
    assert spec == parse_config("")[1]


def test_snr_threshold_in_db():
    dep, _ = parse_config("snr_threshold_db = -20\n")
    assert dep.radio.snr_threshold == pytest.approx(0.01)


def test_comments_and_blank_lines():
    dep, spec = parse_config("# header\n\nnum_uds = 8   # small\ntrials=3\n")
    assert dep.num_uds == 8 and spec.trials == 3


def test_sweep_keys():
    _, spec = parse_config("sweep_variable = burial_depth\nsweep_values = 0.2, 0.6\n"
                           "strategies = proposed, wpusn\n")
    assert spec.variable == "burial_depth"
    assert tuple(spec.values) == (0.2, 0.6)
    assert tuple(spec.strategies) == ("proposed", "wpusn")


@pytest.mark.parametrize("text,line,word", [
    ("num_uds = 4\nvwc = 0.7\n", 2, "range"),
    ("\n\nbogus = 1\n", 3, "unknown"),
    ("num_uds = many\n", 1, "malformed"),
    ("trials = 0\n", 1, "range"),
    ("just words\n", 1, "key = value"),
    ("strategies = proposed, teleport\n", 1, ""),
    ("sweep_variable = colour\n", 1, ""),
])
def test_errors_name_the_line(text, line, word):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)
    assert word in str(info.value)


def test_missing_file_raises_os_error(tmp_path):
    with pytest.raises(OSError):
        load_config(tmp_path / "nope.cfg")


def test_sweep_spec_invariants():
    with pytest.raises(ValueError):
        SweepSpec("ris_elements", (), trials=1)
    with pytest.raises(ValueError):
        SweepSpec("vwc", (0.9,), trials=1)
    with pytest.raises(ValueError):
        SweepSpec("ris_elements", (10,), trials=0)


def test_with_value_changes_one_field():
    dep = Deployment()
    assert dep.with_value("ris_elements", 70).num_ris_elements == 70
    assert dep.with_value("burial_depth", 0.6).burial_depth == 0.6
    assert dep.with_value("vwc", 0.2).soil.vwc == 0.2
    assert dep.with_value("num_uds", 32).num_uds == 32
    assert dep.with_value("vwc", 0.2).radio == dep.radio


def test_sample_places_uds_in_buried_disk():
    sc = Deployment(num_uds=200).sample(3)
    xy = sc.ud_positions[:, :2]
    assert sc.num_uds == 200
    assert (xy ** 2).sum(axis=1).max() <= 25 + 1e-12
    assert all(math.isclose(z, -0.4) for z in sc.ud_positions[:, 2])
    assert (sc.ud_positions == Deployment(num_uds=200).sample(3).ud_positions).all()


def test_radio_validation():
    with pytest.raises(ValueError):
        RadioConfig(eh_efficiency=1.5)
    with pytest.raises(ValueError):
        RadioConfig(noise_power_w=0.0)
