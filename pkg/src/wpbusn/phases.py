"""RIS phase design for the backscatter, energy-transfer and uplink slots."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, composite_gain

TWO_PI = 2.0 * np.pi
GRID_POINTS = 64
_COARSE = np.arange(GRID_POINTS) * (TWO_PI / GRID_POINTS)
_FINE = np.linspace(-1.0, 1.0, GRID_POINTS) * (TWO_PI / GRID_POINTS)


class ConvergenceWarning(RuntimeWarning):
    pass


def wrap(theta):
    return np.mod(theta, TWO_PI)


def optimize_phases_single_link(h_direct, element_products):
    """Closed-form alignment of every reflected path onto the direct path.

    Works row-wise when given (M,) direct gains and (M, K) products.
    """
    g = np.asarray(element_products)
    if g.shape[-1] < 1:
        raise ValueError("need at least one RIS element")
    h = np.asarray(h_direct, dtype=complex)
    ref = np.where(h == 0, 0.0, np.angle(h))
    return wrap(np.expand_dims(ref, -1) - np.angle(g))


def bc_objective(h_pu, g_pu, h_ua, g_ua, phases):
    return (np.abs(composite_gain(h_pu, g_pu, phases)) ** 2
            * np.abs(composite_gain(h_ua, g_ua, phases)) ** 2)


def _product_ascent(a, g, b, q, theta, tolerance, max_sweeps):
    """Coordinate ascent on |a + g.e|^2 |b + q.e|^2, batched over rows.

    For each element a 64-point grid is searched, then a second 64-point grid
    spanning one coarse step either side of the winner. A move is kept only
    if it improves the row's objective, so the objective never decreases.
    """
    m, k = g.shape
    theta = theta.copy()
    rot = np.exp(1j * theta)
    A = a + np.sum(g * rot, axis=1)
    B = b + np.sum(q * rot, axis=1)
    f = np.abs(A) ** 2 * np.abs(B) ** 2
    history = [f.copy()]
    active = np.ones(m, dtype=bool)
    rows = np.arange(m)
    e_coarse = np.exp(1j * _COARSE)
    converged = False
    for _ in range(max_sweeps):
        f_start = f.copy()
        for j in range(k):
            A_rest = A - g[:, j] * rot[:, j]
            B_rest = B - q[:, j] * rot[:, j]
            # |R + c e^{j phi}|^2 = |R|^2 + |c|^2 + 2 Re(conj(R) c e^{j phi})
            pa = np.abs(A_rest) ** 2 + np.abs(g[:, j]) ** 2
            pb = np.abs(B_rest) ** 2 + np.abs(q[:, j]) ** 2
            ca = 2.0 * np.conj(A_rest) * g[:, j]
            cb = 2.0 * np.conj(B_rest) * q[:, j]
            fc = ((pa[:, None] + (ca[:, None] * e_coarse).real)
                  * (pb[:, None] + (cb[:, None] * e_coarse).real))
            centre = _COARSE[np.argmax(fc, axis=1)]
            cand = centre[:, None] + _FINE[None, :]
            e_fine = np.exp(1j * cand)
            ff = ((pa[:, None] + (ca[:, None] * e_fine).real)
                  * (pb[:, None] + (cb[:, None] * e_fine).real))
            best = np.argmax(ff, axis=1)
            f_new = ff[rows, best]
            take = active & (f_new > f * (1.0 + 1e-14))
            if np.any(take):
                new_phase = wrap(cand[rows, best])
                theta[take, j] = new_phase[take]
                rot[take, j] = np.exp(1j * new_phase[take])
                A[take] = A_rest[take] + g[take, j] * rot[take, j]
                B[take] = B_rest[take] + q[take, j] * rot[take, j]
                f[take] = (np.abs(A[take]) ** 2 * np.abs(B[take]) ** 2)
        history.append(f.copy())
        gain = f - f_start
        active &= ~(gain <= tolerance * np.maximum(f_start, np.finfo(float).tiny))
        if not np.any(active):
            converged = True
            break
    return theta, converged, history


def _blend(theta_a, theta_b, w):
    """Phase vectors on the circular interpolation between two alignments.

    ``w`` has shape (P, M); returns (P, M, K).
    """
    w = w[..., None]
    mix = w * np.exp(1j * theta_a)[None] + (1.0 - w) * np.exp(1j * theta_b)[None]
    # antipodal phasors cancel; fall back to the nearer endpoint
    dead = np.abs(mix) < 1e-12
    return wrap(np.where(dead, np.where(w >= 0.5, theta_a[None], theta_b[None]), np.angle(mix)))


def _bc_start(h_pu, g_pu, h_ua, g_ua, points=17, rounds=3):
    """Best blend of the two single-hop alignments, refined by nested grids."""
    theta_pu = optimize_phases_single_link(h_pu, g_pu)
    theta_ua = optimize_phases_single_link(h_ua, g_ua)
    m = h_pu.shape[0]
    lo, hi = np.zeros(m), np.ones(m)
    best_w = np.ones(m)
    for _ in range(rounds):
        w = lo[None] + (hi - lo)[None] * np.linspace(0.0, 1.0, points)[:, None]
        cand = _blend(theta_pu, theta_ua, w)
        scores = bc_objective(h_pu[None], g_pu[None], h_ua[None], g_ua[None], cand)
        idx = np.argmax(scores, axis=0)
        best_w = w[idx, np.arange(m)]
        half = (hi - lo) / (points - 1)
        lo, hi = np.maximum(best_w - half, 0.0), np.minimum(best_w + half, 1.0)
    return _blend(theta_pu, theta_ua, best_w[None])[0]


def _bc_rows(channels: ChannelSet, rows, tolerance, max_sweeps):
    h_pu, h_ua = channels.h_direct_pu[rows], channels.h_direct_ua[rows]
    g_pu, g_ua = channels.g_pu[rows], channels.g_ua[rows]
    start = _bc_start(h_pu, g_pu, h_ua, g_ua)
    theta, converged, history = _product_ascent(h_pu, g_pu, h_ua, g_ua, start,
                                                tolerance, max_sweeps)
    if not converged:
        warnings.warn(f"BC phase ascent stopped after {max_sweeps} sweeps before converging",
                      ConvergenceWarning, stacklevel=3)
    return theta, history


def optimize_phases_bc(channels: ChannelSet, ud_index: int, radio=None,
                       tolerance: float = 1e-4, max_sweeps: int = 50):
    """Phases maximizing the backscatter product |h_PU|^2 |h_UA|^2 of one UD.

    Started from the better of the two single-hop alignments; ``radio`` only
    scales the objective and is accepted for interface symmetry.
    """
    if channels.num_elements < 1:
        raise ValueError("need at least one RIS element")
    theta, _ = _bc_rows(channels, np.array([ud_index]), tolerance, max_sweeps)
    return theta[0]


def optimize_phases_bc_all(channels: ChannelSet, tolerance: float = 1e-4,
                           max_sweeps: int = 50) -> np.ndarray:
    """Backscatter-slot phases for every UD at once, shape (N, K)."""
    theta, _ = _bc_rows(channels, np.arange(channels.num_uds), tolerance, max_sweeps)
    return theta


def wet_objective(channels: ChannelSet, phases, tx_power_w=1.0):
    h = composite_gain(channels.h_direct_pu, channels.g_pu, phases)
    return tx_power_w * float(np.sum(np.abs(h) ** 2))


def optimize_phases_wet(channels: ChannelSet, radio=None, tolerance: float = 1e-4,
                        max_sweeps: int = 50, return_history: bool = False):
    """Phases maximizing total incident power summed over all UDs.

    Each coordinate step is solved exactly: with the other elements fixed,
    sum_n |r_n + g_nk e^{j phi}|^2 peaks at phi = -arg(sum_n conj(r_n) g_nk).
    """
    if channels.num_elements < 1:
        raise ValueError("need at least one RIS element")
    h_d, g = channels.h_direct_pu, channels.g_pu
    candidates = optimize_phases_single_link(h_d, g)
    scores = [wet_objective(channels, c) for c in candidates]
    theta = candidates[int(np.argmax(scores))].copy()
    rot = np.exp(1j * theta)
    h = h_d + g @ rot
    f = float(np.sum(np.abs(h) ** 2))
    history = [f]
    converged = False
    for _ in range(max_sweeps):
        f_start = f
        for j in range(g.shape[1]):
            rest = h - g[:, j] * rot[j]
            corr = np.sum(np.conj(rest) * g[:, j])
            phi = -np.angle(corr) if corr != 0 else theta[j]
            new_rot = np.exp(1j * phi)
            h_new = rest + g[:, j] * new_rot
            f_new = float(np.sum(np.abs(h_new) ** 2))
            if f_new > f:
                theta[j], rot[j], h, f = wrap(phi), new_rot, h_new, f_new
        history.append(f)
        if f - f_start <= tolerance * max(f_start, np.finfo(float).tiny):
            converged = True
            break
    if not converged:
        warnings.warn(f"WET phase ascent stopped after {max_sweeps} sweeps before converging",
                      ConvergenceWarning, stacklevel=2)
    theta = wrap(theta)
    return (theta, history) if return_history else theta


@dataclass(frozen=True)
class PhasePlan:
    """Per-slot phase vectors: WET sub-slot (K,), BC slots (N, K), WIT slots (N, K)."""

    wet: np.ndarray
    bc: np.ndarray
    wit: np.ndarray


def optimized_phase_plan(channels: ChannelSet, tolerance: float = 1e-4) -> PhasePlan:
    n, k = channels.num_uds, channels.num_elements
    if k == 0:
        empty = np.zeros((n, 0))
        return PhasePlan(np.zeros(0), empty, empty)
    return PhasePlan(
        wet=optimize_phases_wet(channels, tolerance=tolerance),
        bc=optimize_phases_bc_all(channels, tolerance=tolerance),
        wit=optimize_phases_single_link(channels.h_direct_ua, channels.g_ua),
    )


def random_phase_plan(channels: ChannelSet, rng: np.random.Generator) -> PhasePlan:
    n, k = channels.num_uds, channels.num_elements
    return PhasePlan(
        wet=rng.uniform(0.0, TWO_PI, k),
        bc=rng.uniform(0.0, TWO_PI, (n, k)),
        wit=rng.uniform(0.0, TWO_PI, (n, k)),
    )
