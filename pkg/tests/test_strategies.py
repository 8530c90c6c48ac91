import numpy as np
import pytest

from wpbusn.config import Deployment
from wpbusn.strategies import STRATEGIES, run_strategy


@pytest.fixture(scope="module")
def reports():
    dep = Deployment(num_uds=16, num_ris_elements=40)
    out = {}
    for seed in range(6):
        sc = dep.sample(seed)
        out[seed] = {s: run_strategy(sc, s, seed) for s in STRATEGIES}
    return out


def test_wpusn_has_no_backscatter(reports):
    for r in reports.values():
        assert np.all(r["wpusn"].bc_bits == 0)
        assert not r["wpusn"].plan.bc_enabled.any()


def test_proposed_dominates_random_phases(reports):
    for r in reports.values():
        assert r["proposed"].sum_kbps >= r["random_phase"].sum_kbps


def test_benchmarks_ignore_ris_size():
    sc = Deployment(num_uds=8).sample(3)
    for s in ("wpbusn", "wpusn"):
        a = run_strategy(sc.with_(num_ris_elements=10), s, 3)
        b = run_strategy(sc.with_(num_ris_elements=90), s, 3)
        assert a.sum_kbps == b.sum_kbps


def test_wpbusn_dominates_wpusn_on_100_seeds():
    dep = Deployment(num_uds=16)
    for seed in range(100):
        sc = dep.sample(seed)
        assert (run_strategy(sc, "wpbusn", seed).sum_kbps
                >= run_strategy(sc, "wpusn", seed).sum_kbps * (1 - 1e-12))


def test_unknown_strategy():
    with pytest.raises(ValueError):
        run_strategy(Deployment(num_uds=2).sample(0), "magic", 0)


def test_same_seed_same_report():
    sc = Deployment(num_uds=8, num_ris_elements=20).sample(1)
    a, b = run_strategy(sc, "random_phase", 1), run_strategy(sc, "random_phase", 1)
    assert a.sum_kbps == b.sum_kbps
    assert np.array_equal(a.plan.tau, b.plan.tau)
