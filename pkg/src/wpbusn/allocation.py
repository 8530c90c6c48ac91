"""TDMA time allocation between energy transfer, backscatter and active uplink.

With the slot phases fixed, every SNR and every harvested power is a
constant, and the sum throughput

    sum_n lam_n log2(1 + s_n) + sum_n tau_n log2(1 + e_n u_n / tau_n),
    e_n = p_wet_n t_wet + sum_{m != n} P[n, m] lam_m,

is jointly concave in (t_wet, lam, tau) on the simplex of total duration T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, composite_gain
from .energy import harvest_power, harvester_from_radio
from .phases import PhasePlan
from .scenario import RadioConfig

LN2 = np.log(2.0)


@dataclass(frozen=True)
class SlotConstants:
    """Per-slot link constants implied by a phase plan.

    ``snr_bc[n]`` backscatter SNR in UD n's own slot; ``harvest_bc[n, m]``
    power (W) harvested by UD n during UD m's BC slot (zero diagonal);
    ``harvest_wet[n]`` power harvested in the WET sub-slot; ``uplink[n]`` =
    |h_UA,n|^2 / noise under the WIT-slot phases.
    """

    snr_bc: np.ndarray
    harvest_bc: np.ndarray
    harvest_wet: np.ndarray
    uplink: np.ndarray

    @property
    def num_uds(self) -> int:
        return self.snr_bc.shape[0]


@dataclass(frozen=True)
class SlotPlan:
    t_wet: float
    lam: np.ndarray
    tau: np.ndarray
    phases_wet: np.ndarray
    phases_bc: np.ndarray
    phases_wit: np.ndarray
    bc_enabled: np.ndarray

    @property
    def t0(self) -> float:
        return self.t_wet + float(np.sum(self.lam))

    @property
    def total(self) -> float:
        return self.t_wet + float(np.sum(self.lam)) + float(np.sum(self.tau))


@dataclass(frozen=True)
class ThroughputReport:
    bc_bits: np.ndarray
    htt_bits: np.ndarray
    snr_bc: np.ndarray
    snr_wit: np.ndarray
    harvested_j: np.ndarray
    block_duration_s: float
    plan: SlotPlan

    @property
    def bc_kbps(self) -> float:
        return float(np.sum(self.bc_bits)) / self.block_duration_s / 1e3

    @property
    def htt_kbps(self) -> float:
        return float(np.sum(self.htt_bits)) / self.block_duration_s / 1e3

    @property
    def sum_kbps(self) -> float:
        return float(np.sum(self.bc_bits) + np.sum(self.htt_bits)) / self.block_duration_s / 1e3


def snr_bc(channels: ChannelSet, phases, ud_index: int, radio: RadioConfig) -> float:
    """Bistatic backscatter SNR at the AP for one UD under one phase vector."""
    n = ud_index
    h_pu = composite_gain(channels.h_direct_pu[n], channels.g_pu[n], phases)
    h_ua = composite_gain(channels.h_direct_ua[n], channels.g_ua[n], phases)
    return float(radio.tx_power_w * radio.backscatter_coeff * abs(h_pu) ** 2 * abs(h_ua) ** 2
                 / radio.noise_power_w)


def slot_constants(channels: ChannelSet, plan: PhasePlan, radio: RadioConfig) -> SlotConstants:
    harvester = harvester_from_radio(radio)
    h_d_pu, h_d_ua = channels.h_direct_pu, channels.h_direct_ua
    g_pu, g_ua = channels.g_pu, channels.g_ua
    # column m: every UD's downlink gain under UD m's BC phases
    h_pu_bc = h_d_pu[:, None] + g_pu @ np.exp(1j * plan.bc).T
    h_ua_own = h_d_ua + np.sum(g_ua * np.exp(1j * plan.bc), axis=1)
    pu_power = radio.tx_power_w * np.abs(h_pu_bc) ** 2
    own = np.diag(pu_power).copy()
    s = radio.backscatter_coeff * own * np.abs(h_ua_own) ** 2 / radio.noise_power_w
    harvest_bc = harvest_power(harvester, pu_power)
    np.fill_diagonal(harvest_bc, 0.0)
    h_wet = composite_gain(h_d_pu, g_pu, plan.wet)
    harvest_wet = harvest_power(harvester, radio.tx_power_w * np.abs(h_wet) ** 2)
    h_wit = composite_gain(h_d_ua, g_ua, plan.wit)
    uplink = np.abs(h_wit) ** 2 / radio.noise_power_w
    return SlotConstants(s, np.atleast_2d(harvest_bc), np.atleast_1d(harvest_wet), uplink)


def select_modes(consts: SlotConstants, radio: RadioConfig) -> np.ndarray:
    """Per-UD backscatter flag: its BC-slot SNR clears the demodulation threshold."""
    return consts.snr_bc >= radio.snr_threshold


# -- solver -----------------------------------------------------------------

def _split(x, n):
    return x[0], x[1:n + 1], x[n + 1:]


def _energy(consts: SlotConstants, t_wet, lam):
    return consts.harvest_wet * t_wet + consts.harvest_bc @ lam


def _wit_bits(tau, energy, uplink):
    """tau * log2(1 + e u / tau), zero where tau = 0."""
    out = np.zeros_like(tau)
    pos = tau > 0
    out[pos] = tau[pos] * np.log2(1.0 + energy[pos] * uplink[pos] / tau[pos])
    return out


def throughput_objective(x, consts: SlotConstants, bc_rate):
    """Sum throughput per Hz of bandwidth (bits/Hz) for a flat time vector."""
    n = consts.num_uds
    t_wet, lam, tau = _split(x, n)
    e = _energy(consts, t_wet, lam)
    return float(lam @ bc_rate + np.sum(_wit_bits(tau, e, consts.uplink)))


def _gradient(x, consts: SlotConstants, bc_rate, tau_floor):
    n = consts.num_uds
    t_wet, lam, tau = _split(x, n)
    e = _energy(consts, t_wet, lam)
    tau_eff = np.maximum(tau, tau_floor)
    snr = e * consts.uplink / tau_eff
    d_tau = np.log2(1.0 + snr) - snr / ((1.0 + snr) * LN2)
    # d/de_n of tau_n log2(1 + e_n u_n / tau_n)
    w = consts.uplink / ((1.0 + snr) * LN2)
    grad = np.empty_like(x)
    grad[0] = w @ consts.harvest_wet
    grad[1:n + 1] = bc_rate + consts.harvest_bc.T @ w
    grad[n + 1:] = d_tau
    return grad


def project_simplex(v, total):
    """Euclidean projection of ``v`` onto {x >= 0, sum x = total}."""
    if v.size == 0:
        return v
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - total
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    shift = css[rho] / (rho + 1.0)
    return np.maximum(v - shift, 0.0)


def _project(x, free, total):
    out = np.zeros_like(x)
    out[free] = project_simplex(x[free], total)
    return out


def projected_gradient(x0, consts, bc_rate, free, total, rel_tol=1e-8, max_iter=10_000):
    """Projected gradient ascent with Armijo backtracking along the projection arc.

    The step grows after every accepted move and halves on each rejection, so a
    sequence of diminishing steps emerges near the optimum; the objective is
    nondecreasing by construction.
    """
    x = _project(x0, free, total)
    f = throughput_objective(x, consts, bc_rate)
    tau_floor = 1e-12 * total
    step = 0.1 * total
    for it in range(max_iter):
        g = _gradient(x, consts, bc_rate, tau_floor)
        gmax = np.max(np.abs(g[free])) if np.any(free) else 0.0
        if gmax == 0.0:
            break
        accepted = False
        while step * gmax > 1e-16 * total:
            x_new = _project(x + step * g, free, total)
            f_new = throughput_objective(x_new, consts, bc_rate)
            if f_new >= f + 1e-4 * (g @ (x_new - x)) and f_new >= f:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        improvement = f_new - f
        x, f = x_new, f_new
        step *= 2.0
        if improvement <= rel_tol * max(abs(f), 1e-300):
            break
    return x, f, it + 1


def _enforce_gate(x, consts: SlotConstants, gamma):
    """Trim WIT slots whose SNR would fall below the threshold; surplus to WET.

    Extra WET time only raises each UD's energy, so one pass suffices.
    """
    n = consts.num_uds
    x = x.copy()
    t_wet, lam, tau = _split(x, n)
    cap = _energy(consts, t_wet, lam) * consts.uplink / gamma
    trimmed = np.where(tau > cap, cap * (1.0 - 1e-9), tau)
    trimmed[trimmed < 1e-15] = 0.0
    x[0] += float(np.sum(tau - trimmed))
    x[n + 1:] = trimmed
    return x


def _finalize(x, total):
    """Clip rounding negatives and close the time budget on the largest slot."""
    x = np.where(x < 0, 0.0, x)
    x[int(np.argmax(x))] += total - float(np.sum(x))
    return x


def _source_coefficients(consts: SlotConstants, bc_rate, enabled):
    """Rate and aggregate energy-uplink coefficient of every energy source.

    Source 0 is the WET sub-slot, source m + 1 the BC slot of UD m. Spending
    time t on source j adds r_j t backscatter bits/Hz and U_j t to
    A = sum_n u_n e_n.
    """
    rates = np.concatenate([[0.0], bc_rate])
    agg = np.concatenate([[consts.uplink @ consts.harvest_wet], consts.uplink @ consts.harvest_bc])
    usable = np.concatenate([[True], enabled & (bc_rate > 0)])
    return rates, agg, usable


def _common_wit_snr(rates, agg, iters=200):
    """Root in x of r - log2(1+x) + (U+x)/((1+x) ln 2) = 0, per source (U > 0).

    The left side falls strictly in x, so bisection on log x converges.
    """
    lo = np.full(rates.shape, -60.0)
    hi = np.full(rates.shape, 80.0)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        x = np.exp(mid)
        phi = rates - np.log2(1.0 + x) + (agg + x) / ((1.0 + x) * LN2)
        pos = phi > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
    return np.exp(0.5 * (lo + hi))


def _solve_exact(consts: SlotConstants, bc_rate, enabled, total, gamma):
    """Closed-form structure of the optimum.

    For fixed energies the best WIT split equalizes every active UD's SNR at a
    common x, so the HTT bits reduce to R log2(1 + A / R) with R the WIT time.
    For fixed x the problem is then linear with a single budget constraint, so
    one energy source takes all of t0; each source leaves a concave 1-D
    problem in t0 whose stationarity condition fixes x.
    """
    n = consts.num_uds
    rates, agg, usable = _source_coefficients(consts, bc_rate, enabled)
    gate = gamma * (1.0 + 1e-9)
    t = np.full(rates.shape, total)
    x = np.zeros(rates.shape)
    live = usable & (agg > 0)
    if np.any(live):
        xs = _common_wit_snr(rates[live], agg[live])
        # SNR gate: x >= gamma  <=>  t0 >= gamma T / (U + gamma)
        xs = np.maximum(xs, gate)
        x[live] = xs
        t[live] = total * xs / (agg[live] + xs)
    wit_time = total - t
    value = np.where(usable, rates * t + np.where(wit_time > 0, wit_time * np.log2(1.0 + x), 0.0),
                     -np.inf)
    # all-BC (no WIT) is also feasible; kept when it beats the interior point
    all_bc = np.where(usable, rates * total, -np.inf)
    swap = all_bc > value
    t = np.where(swap, total, t)
    x = np.where(swap, 0.0, x)
    value = np.maximum(value, all_bc)
    # ties resolve to the lowest index, i.e. the WET sub-slot
    best = int(np.argmax(value >= np.max(value) - 1e-12 * max(abs(np.max(value)), 1e-300)))

    xvec = np.zeros(2 * n + 1)
    xvec[best] = t[best]
    t_wet, lam, _ = _split(xvec, n)
    e = _energy(consts, t_wet, lam)
    if x[best] > 0:
        xvec[n + 1:] = e * consts.uplink / x[best]
    return xvec


def allocate_time(channels: ChannelSet, phase_plan: PhasePlan, radio: RadioConfig,
                  modes=None, consts: SlotConstants | None = None, method: str = "exact",
                  rel_tol: float = 1e-8, max_iter: int = 10_000) -> SlotPlan:
    """Throughput-maximizing durations for fixed slot phases.

    ``modes`` are the per-UD backscatter flags (default: the SNR gate).
    ``method="exact"`` uses the equal-SNR reduction; ``method="pgd"`` runs
    projected gradient ascent on the full variable vector, solving the HTT-only
    problem first and warm-starting the full problem from it.
    """
    if consts is None:
        consts = slot_constants(channels, phase_plan, radio)
    n = consts.num_uds
    total = radio.block_duration_s
    enabled = select_modes(consts, radio) if modes is None else np.asarray(modes, dtype=bool)
    bc_rate = np.where(enabled, np.log2(1.0 + consts.snr_bc), 0.0)

    if method == "exact":
        x = _solve_exact(consts, bc_rate, enabled, total, radio.snr_threshold)
    elif method == "pgd":
        x = _solve_pgd(consts, bc_rate, enabled, total, rel_tol, max_iter)
    else:
        raise ValueError(f"unknown method {method!r}")

    x = _enforce_gate(x, consts, radio.snr_threshold)
    x = _finalize(x, total)
    t_wet, lam, tau = _split(x, n)
    return SlotPlan(float(t_wet), lam.copy(), tau.copy(), phase_plan.wet, phase_plan.bc,
                    phase_plan.wit, enabled.copy())


def _solve_pgd(consts, bc_rate, enabled, total, rel_tol, max_iter):
    n = consts.num_uds
    can_harvest = (consts.harvest_wet > 0) | np.any(consts.harvest_bc[:, enabled] > 0, axis=1)
    wit_free = (consts.uplink > 0) & can_harvest
    free = np.zeros(2 * n + 1, dtype=bool)
    free[0] = True
    free[n + 1:] = wit_free

    x0 = np.zeros(2 * n + 1)
    x0[0] = 0.5 * total
    if np.any(wit_free):
        x0[n + 1:][wit_free] = 0.5 * total / np.count_nonzero(wit_free)
    else:
        x0[0] = total
    x, _, _ = projected_gradient(x0, consts, bc_rate, free, total, rel_tol, max_iter)
    if np.any(enabled & (bc_rate > 0)):
        free_full = free.copy()
        free_full[1:n + 1] = enabled & (bc_rate > 0)
        x, _, _ = projected_gradient(x, consts, bc_rate, free_full, total, rel_tol, max_iter)
    return x


def evaluate_plan(plan: SlotPlan, consts: SlotConstants, radio: RadioConfig) -> ThroughputReport:
    e = _energy(consts, plan.t_wet, plan.lam)
    b = radio.bandwidth_hz
    bc_bits = b * plan.lam * np.where(plan.bc_enabled, np.log2(1.0 + consts.snr_bc), 0.0)
    htt_bits = b * _wit_bits(plan.tau, e, consts.uplink)
    snr_wit = np.zeros(consts.num_uds)
    pos = plan.tau > 0
    snr_wit[pos] = e[pos] * consts.uplink[pos] / plan.tau[pos]
    return ThroughputReport(bc_bits, htt_bits, consts.snr_bc.copy(), snr_wit, e,
                            radio.block_duration_s, plan)
