"""Brute-force references for the phase and time optimizers.

These evaluate the objectives with their own arithmetic rather than the
optimizer helpers, so agreement is a genuine cross-check.
"""

from __future__ import annotations

import itertools

import numpy as np


def phase_grid(levels: int, k: int) -> np.ndarray:
    """All ``levels**k`` phase vectors on the uniform grid, shape (levels**k, k)."""
    steps = np.arange(levels) * (2.0 * np.pi / levels)
    return np.array(list(itertools.product(steps, repeat=k)))


def exhaustive_single_link(h_direct, g, levels=16):
    """Best |h_d + sum_k g_k e^{j theta_k}| over the phase grid. Returns (value, phases)."""
    grid = phase_grid(levels, len(g))
    vals = np.abs(h_direct + np.exp(1j * grid) @ np.asarray(g))
    i = int(np.argmax(vals))
    return float(vals[i]), grid[i]


def exhaustive_product(h_pu, g_pu, h_ua, g_ua, levels=16):
    """Best |h_PU|^2 |h_UA|^2 over the phase grid. Returns (value, phases)."""
    grid = phase_grid(levels, len(g_pu))
    e = np.exp(1j * grid)
    vals = np.abs(h_pu + e @ np.asarray(g_pu)) ** 2 * np.abs(h_ua + e @ np.asarray(g_ua)) ** 2
    i = int(np.argmax(vals))
    return float(vals[i]), grid[i]


def exhaustive_sum_power(h_direct, g, levels=16):
    """Best sum_n |h_n + g_n . e^{j theta}|^2 over the phase grid; ``g`` is (N, K)."""
    grid = phase_grid(levels, np.asarray(g).shape[1])
    h = np.asarray(h_direct)[None, :] + np.exp(1j * grid) @ np.asarray(g).T
    vals = np.sum(np.abs(h) ** 2, axis=1)
    i = int(np.argmax(vals))
    return float(vals[i]), grid[i]


def _bits_per_hz(points, snr_bc, enabled, harvest_wet, harvest_bc, uplink, gamma):
    """Throughput of candidate (t_wet, lam, tau) rows; infeasible rows -> -inf."""
    n = len(snr_bc)
    t_wet = points[:, 0]
    lam = points[:, 1:n + 1]
    tau = points[:, n + 1:]
    energy = t_wet[:, None] * harvest_wet[None, :] + lam @ harvest_bc.T
    bc = lam @ np.where(enabled, np.log2(1.0 + snr_bc), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        snr = np.where(tau > 0, energy * uplink[None, :] / tau, np.inf)
        wit = np.where(tau > 0, tau * np.log2(1.0 + snr), 0.0)
    value = bc + wit.sum(axis=1)
    ok = np.all((tau == 0) | (snr >= gamma), axis=1) & np.all(points >= -1e-15, axis=1)
    ok &= np.all((lam == 0) | enabled[None, :], axis=1)
    return np.where(ok, value, -np.inf)


def _lattice(dim, parts):
    """All compositions of ``parts`` into ``dim`` nonnegative integers."""
    for bars in itertools.combinations(range(parts + dim - 1), dim - 1):
        prev = -1
        row = []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(parts + dim - 2 - prev)
        yield row


def grid_time_allocation(consts, gamma, enabled=None, total=1.0, parts=50, zoom_rounds=12,
                         zoom_points=7):
    """Grid search over the time simplex, then repeated local zooms.

    Free coordinates are t_wet, lam_n for enabled UDs and every tau_n. Returns
    (best bits/Hz, full time vector).
    """
    snr_bc = np.asarray(consts.snr_bc, dtype=float)
    n = len(snr_bc)
    if enabled is None:
        enabled = snr_bc >= gamma
    enabled = np.asarray(enabled, dtype=bool)
    free = np.concatenate([[0], 1 + np.nonzero(enabled)[0], n + 1 + np.arange(n)])
    dim = len(free)
    args = (snr_bc, enabled, np.asarray(consts.harvest_wet, float),
            np.asarray(consts.harvest_bc, float), np.asarray(consts.uplink, float), gamma)

    def embed(sub):
        full = np.zeros((sub.shape[0], 2 * n + 1))
        full[:, free] = sub
        return full

    coarse = np.array(list(_lattice(dim, parts)), dtype=float) * (total / parts)
    vals = _bits_per_hz(embed(coarse), *args)
    best = coarse[int(np.argmax(vals))]
    best_val = float(np.max(vals))

    radius = total / parts
    offsets_1d = np.linspace(-1.0, 1.0, zoom_points)
    for _ in range(zoom_rounds):
        # perturb the first dim-1 coordinates; the last closes the budget
        grids = np.meshgrid(*([offsets_1d] * (dim - 1)), indexing="ij")
        off = np.stack([g.ravel() for g in grids], axis=1) * radius
        cand = np.empty((off.shape[0], dim))
        cand[:, :-1] = best[None, :-1] + off
        cand[:, -1] = total - cand[:, :-1].sum(axis=1)
        cand = cand[np.all(cand >= 0, axis=1)]
        if cand.size:
            vals = _bits_per_hz(embed(cand), *args)
            i = int(np.argmax(vals))
            if vals[i] > best_val:
                best_val, best = float(vals[i]), cand[i]
        radius *= 0.45
    return best_val, embed(best[None])[0]


# -- comparison runners (used by the CLI and the test-suite) -----------------

def random_phase_instance(rng, n, k):
    """Complex Gaussian direct gains (N,) and element products (N, K) for two hops."""
    def cn(*shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return cn(n), cn(n, k), cn(n), cn(n, k)


def compare_phases(k=4, instances=20, seed=0, levels=16):
    """Worst relative shortfall of the phase optimizers against exhaustive search.

    Returns a dict keyed by objective; negative values mean the optimizer beat
    the grid.
    """
    from .channel import ChannelSet
    from .phases import bc_objective, optimize_phases_bc, optimize_phases_single_link, \
        optimize_phases_wet, wet_objective

    rng = np.random.default_rng(seed)
    worst = {"single_link": -np.inf, "bc_product": -np.inf, "wet_sum": -np.inf}
    for _ in range(instances):
        h_pu, g_pu, h_ua, g_ua = random_phase_instance(rng, 2, k)
        ref, _ = exhaustive_single_link(h_pu[0], g_pu[0], levels)
        got = abs(h_pu[0] + np.sum(g_pu[0] * np.exp(1j * optimize_phases_single_link(h_pu[0], g_pu[0]))))
        worst["single_link"] = max(worst["single_link"], (ref - got) / ref)

        # ChannelSet with the two hops' element products encoded as a_pr = d_ra = 1
        ones = np.ones(k, dtype=complex)
        ch = ChannelSet(h_pu, h_ua, ones, g_pu, g_ua, ones)
        ref, _ = exhaustive_product(h_pu[0], g_pu[0], h_ua[0], g_ua[0], levels)
        theta = optimize_phases_bc(ch, 0)
        got = float(bc_objective(h_pu[0], g_pu[0], h_ua[0], g_ua[0], theta))
        worst["bc_product"] = max(worst["bc_product"], (ref - got) / ref)

        ref, _ = exhaustive_sum_power(h_pu, g_pu, levels)
        got = wet_objective(ch, optimize_phases_wet(ch))
        worst["wet_sum"] = max(worst["wet_sum"], (ref - got) / ref)
    return worst


def small_scenario(rng, n, k, depth=0.4, vwc=0.1):
    from .config import Deployment
    from .soil import SoilMedium

    return Deployment(num_uds=n, burial_depth=depth, num_ris_elements=k,
                      soil=SoilMedium(vwc=vwc)).sample(int(rng.integers(2**31)))


def compare_time(n=2, k=4, instances=20, seed=0, bc="auto", parts=None):
    """Worst two-sided relative gap between ``allocate_time`` and the grid oracle.

    ``bc`` is ``"auto"`` (SNR gate), ``"off"`` (HTT only) or ``"on"`` (all UDs
    may backscatter).
    """
    from .allocation import allocate_time, evaluate_plan, slot_constants
    from .channel import build_channels
    from .phases import optimized_phase_plan

    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(instances):
        sc = small_scenario(rng, n, k)
        ch = build_channels(sc, seed + i)
        phases = optimized_phase_plan(ch)
        consts = slot_constants(ch, phases, sc.radio)
        gamma = sc.radio.snr_threshold
        if bc == "off":
            modes = np.zeros(n, dtype=bool)
        elif bc == "on":
            modes = np.ones(n, dtype=bool)
        else:
            modes = consts.snr_bc >= gamma
        plan = allocate_time(ch, phases, sc.radio, modes=modes, consts=consts)
        got = float(np.sum(evaluate_plan(plan, consts, sc.radio).bc_bits
                           + evaluate_plan(plan, consts, sc.radio).htt_bits)) / sc.radio.bandwidth_hz
        grid_parts = parts or (1000 if n == 1 and not modes.any() else 50)
        ref, _ = grid_time_allocation(consts, gamma, modes, sc.radio.block_duration_s,
                                      parts=grid_parts)
        if ref <= 0:
            continue
        worst = max(worst, abs(got - ref) / ref)
    return worst
