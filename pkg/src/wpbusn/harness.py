"""Monte Carlo sweeps over placements and their CSV/SVG output."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .allocation import ThroughputReport
from .config import Deployment, SweepSpec
from .strategies import run_strategy

log = logging.getLogger(__name__)

CSV_HEADER = ("variable,value,strategy,mean_sum_kbps,mean_htt_kbps,mean_bc_kbps,"
              "mean_t_wet_s,mean_lambda_total_s,mean_tau_total_s,bc_enabled_fraction,trials")


class SweepError(RuntimeError):
    pass


@dataclass(frozen=True)
class SweepRow:
    variable: str
    value: float
    strategy: str
    mean_sum_kbps: float
    mean_htt_kbps: float
    mean_bc_kbps: float
    mean_t_wet: float
    mean_lambda_total: float
    mean_tau_total: float
    bc_enabled_fraction: float
    trials: int
    gate_violations: int = 0


def gate_violations(report: ThroughputReport, gamma: float) -> int:
    """UDs holding a slot whose SNR misses the demodulation threshold."""
    plan = report.plan
    bad_bc = (plan.lam > 0) & (report.snr_bc < gamma)
    bad_wit = (plan.tau > 0) & (report.snr_wit < gamma)
    return int(np.count_nonzero(bad_bc) + np.count_nonzero(bad_wit))


def _aggregate(variable, value, strategy, reports, gamma) -> SweepRow:
    # summed in trial-index order before dividing, keeping output bytes stable
    n = len(reports)
    bc = sum(r.bc_kbps for r in reports)
    htt = sum(r.htt_kbps for r in reports)
    return SweepRow(
        variable=variable, value=float(value), strategy=strategy,
        mean_sum_kbps=(bc + htt) / n, mean_htt_kbps=htt / n, mean_bc_kbps=bc / n,
        mean_t_wet=sum(r.plan.t_wet for r in reports) / n,
        mean_lambda_total=sum(float(np.sum(r.plan.lam)) for r in reports) / n,
        mean_tau_total=sum(float(np.sum(r.plan.tau)) for r in reports) / n,
        bc_enabled_fraction=sum(float(np.mean(r.plan.bc_enabled)) for r in reports) / n,
        trials=n,
        gate_violations=sum(gate_violations(r, gamma) for r in reports),
    )


def run_sweep(deployment: Deployment, spec: SweepSpec, progress=None) -> list[SweepRow]:
    """One row per (value, strategy); trial t uses seed ``base_seed + t``.

    Placements and direct-link phases depend only on the seed, so every value
    and strategy is evaluated on the same set of realizations.
    """
    rows = []
    gamma = deployment.radio.snr_threshold
    for value in spec.values:
        point = deployment.with_value(spec.variable, value)
        for strategy in spec.strategies:
            reports = []
            for t in range(spec.trials):
                seed = spec.base_seed + t
                try:
                    reports.append(run_strategy(point.sample(seed), strategy, seed))
                except Exception as exc:
                    raise SweepError(f"{spec.variable}={value} strategy={strategy} "
                                     f"seed={seed}: {exc}") from exc
            row = _aggregate(spec.variable, value, strategy, reports, gamma)
            log.info("%s=%g %s: %.4g kbps", spec.variable, value, strategy, row.mean_sum_kbps)
            if progress is not None:
                progress(row)
            rows.append(row)
    return rows


def _g(x) -> str:
    return f"{x:.6g}"


def format_csv(rows) -> str:
    if not rows:
        raise ValueError("no rows to write")
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            r.variable, _g(r.value), r.strategy, _g(r.mean_sum_kbps), _g(r.mean_htt_kbps),
            _g(r.mean_bc_kbps), _g(r.mean_t_wet), _g(r.mean_lambda_total),
            _g(r.mean_tau_total), _g(r.bc_enabled_fraction), str(r.trials)]))
    return "\n".join(lines) + "\n"


def emit_csv(rows, path) -> None:
    Path(path).write_bytes(format_csv(rows).encode("utf-8"))


AXIS_LABELS = {
    "ris_elements": "Number of RIS reflecting elements K",
    "burial_depth": "Burial depth d_u (m)",
    "vwc": "Volumetric water content m_v",
    "num_uds": "Number of UDs N",
}
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def format_svg(rows, width=640, height=420) -> str:
    """Line chart of mean sum throughput, one polyline per strategy."""
    if not rows:
        raise ValueError("no rows to plot")
    series = {}
    for r in rows:
        series.setdefault(r.strategy, []).append((r.value, r.mean_sum_kbps))
    xs = [x for pts in series.values() for x, _ in pts]
    ys = [y for pts in series.values() for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = 0.0, max(ys) if max(ys) > 0 else 1.0
    if x1 == x0:
        x0, x1 = x0 - 1.0, x1 + 1.0
    left, right, top, bottom = 70, 160, 20, 50
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           '<rect width="100%" height="100%" fill="white"/>',
           f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
           f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>']
    for i in range(5):
        yv = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{left - 6}" y="{py(yv) + 4:.2f}" font-size="11" '
                   f'text-anchor="end">{_g(yv)}</text>')
    for xv in sorted(set(xs)):
        out.append(f'<text x="{px(xv):.2f}" y="{top + ph + 16}" font-size="11" '
                   f'text-anchor="middle">{_g(xv)}</text>')
    label = escape(AXIS_LABELS.get(rows[0].variable, rows[0].variable))
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 10}" font-size="13" '
               f'text-anchor="middle">{label}</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.2f}" font-size="13" text-anchor="middle" '
               f'transform="rotate(-90 16 {top + ph / 2:.2f})">Sum throughput (kbps)</text>')
    legend = ['<g id="legend">']
    for i, (name, pts) in enumerate(series.items()):
        color = COLORS[i % len(COLORS)]
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        ly = top + 14 + 18 * i
        legend.append(f'<line x1="{left + pw + 12}" y1="{ly}" x2="{left + pw + 34}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        legend.append(f'<text x="{left + pw + 40}" y="{ly + 4}" font-size="12">'
                      f'{escape(name)}</text>')
    out += legend + ["</g>", "</svg>"]
    return "\n".join(out) + "\n"


def emit_plot(rows, path) -> None:
    Path(path).write_bytes(format_svg(rows).encode("utf-8"))
