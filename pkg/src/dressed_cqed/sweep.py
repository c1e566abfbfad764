"""Figure-level sweeps: anticrossings, multi-photon peak positions, LZS amplitude traces.

Frequencies at this layer are GHz, couplings and linewidths MHz, bias
currents microamperes.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .dressed import LabelingError, transmission_x, transmission_z
from .models import DrivenModelSpec, Variant
from .transmon import (
    BiasCalibration,
    TransmonSpec,
    charge_basis_levels,
    ej_of_bias,
    omega_m0_at_bias,
    transition_frequency,
)

# Bias window for peak root-finding, microamperes.
PEAK_SEARCH_WINDOW = (0.1, 12.0)
DEFAULT_LINEWIDTH_MHZ = 1.0
X_SWEEP_N_REF = 20
X_SWEEP_DRIVE_DIM = 100


class Axis(str, enum.Enum):
    BIAS_CURRENT = "bias_current"
    DRIVE_ALPHA = "drive_alpha"
    PROBE_FREQUENCY = "probe_frequency"


@dataclass(frozen=True)
class SweepPlan:
    axis: Axis
    start: float
    stop: float
    points: int
    fixed_params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis(self.axis))
        if int(self.points) != self.points or self.points < 2:
            raise ValueError(f"points must be an integer >= 2, got {self.points}")
        if not self.start < self.stop:
            raise ValueError(f"start ({self.start}) must be below stop ({self.stop})")

    def grid(self):
        return np.linspace(self.start, self.stop, int(self.points))


@dataclass(eq=False)
class Trace:
    """A sampled curve. NaN marks a gap where no value could be computed."""

    axis_values: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)
    name: str = "value"
    axis_name: str = "x"

    def __post_init__(self):
        self.axis_values = np.asarray(self.axis_values, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.axis_values.shape != self.values.shape or self.values.ndim != 1:
            raise ValueError("axis_values and values must be 1-D and of equal length")
        if np.any(np.isinf(self.values)) or not np.all(np.isfinite(self.axis_values)):
            raise ValueError("trace entries must be finite (NaN allowed only as a gap in values)")


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def omega10_trace(transmon: TransmonSpec, calib: BiasCalibration, bias, m=1):
    ej = ej_of_bias(np.asarray(bias, dtype=float), transmon, calib)
    return np.array(
        [
            transition_frequency(charge_basis_levels(transmon, e, n_levels=max(m + 1, 5)), m)
            for e in np.atleast_1d(ej)
        ]
    )


def single_excitation_branches(omega_q, omega_r, g):
    """Lower and upper hybridized frequencies of a resonantly coupled atom and mode."""
    mean = 0.5 * (omega_q + omega_r)
    half = np.sqrt(g**2 + 0.25 * (omega_q - omega_r) ** 2)
    return mean - half, mean + half


def anticrossing_trace(
    transmon: TransmonSpec, calib: BiasCalibration, mode_freq, g_mhz, plan: SweepPlan
):
    """Vacuum-Rabi branches (GHz) versus bias current; returns ``(lower, upper)`` traces."""
    if plan.axis is not Axis.BIAS_CURRENT:
        raise ValueError("anticrossing_trace needs a bias_current plan")
    bias = plan.grid()
    wq = omega10_trace(transmon, calib, bias)
    lo, hi = single_excitation_branches(wq, mode_freq, g_mhz * 1e-3)
    meta = {"mode_freq_GHz": mode_freq, "g_MHz": g_mhz}
    return (
        Trace(bias, lo, dict(meta), name="branch_lo_GHz", axis_name="bias_uA"),
        Trace(bias, hi, dict(meta), name="branch_hi_GHz", axis_name="bias_uA"),
    )


def monotone_bias_window(calib: BiasCalibration, window=PEAK_SEARCH_WINDOW):
    """Part of ``window`` where the flux stays on ``[0, 1/2]``, the branch where omega falls with bias."""
    lo, hi = window
    s, f0 = calib.current_to_flux_slope, calib.flux_offset
    edges = sorted(((0.0 - f0) / s, (0.5 - f0) / s))
    return max(lo, edges[0]), min(hi, edges[1])


def multiphoton_peak_positions(
    transmon: TransmonSpec, calib: BiasCalibration, omega_p, m_max, window=PEAK_SEARCH_WINDOW
):
    """Bias currents where ``omega_{m0} = m * omega_p`` for ``m = 1..m_max``.

    Orders with no root inside the window are left out.
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    lo, hi = monotone_bias_window(calib, window)
    peaks = []
    for m in range(1, int(m_max) + 1):

        def resid(i, m=m):
            return omega_m0_at_bias(i, m, transmon, calib) - m * omega_p

        f_lo, f_hi = resid(lo), resid(hi)
        if f_lo == 0:
            peaks.append((m, lo))
            continue
        if np.sign(f_lo) == np.sign(f_hi):
            continue
        root = scipy.optimize.bisect(resid, lo, hi, xtol=1e-12, maxiter=200)
        peaks.append((m, root))
    return peaks


def lorentzian(x, position, height, linewidth):
    hw2 = (0.5 * linewidth) ** 2
    return height * hw2 / ((np.asarray(x, dtype=float) - position) ** 2 + hw2)


def synthetic_transmission_trace(peaks, linewidth, plan: SweepPlan, name="transmission"):
    """Sum of Lorentzians of full width ``linewidth`` sampled on the plan grid."""
    if not linewidth > 0:
        raise ValueError("linewidth must be positive")
    x = plan.grid()
    y = np.zeros_like(x)
    for pos, height in peaks:
        y = y + lorentzian(x, pos, height, linewidth)
    return Trace(x, y, {"linewidth": linewidth}, name=name, axis_name=plan.axis.value)


def x_channel_lambda(m, detuning=0.05):
    """Atom splitting for X-drive channel m, ``omega_a / 2 omega_d = m/2 - detuning``."""
    return 0.5 * m - detuning


def _x_point(args):
    alpha, lam, n_ref, drive_dim = args
    eta = alpha / (4.0 * math.sqrt(n_ref))
    spec = DrivenModelSpec.x_drive(lam=lam, eta=eta, drive_dim=drive_dim)
    try:
        return abs(transmission_x(spec, n_ref))
    except LabelingError:
        return float("nan")


def lzs_amplitude_sweep(
    variant,
    m_list,
    alpha_grid,
    *,
    n_ref=X_SWEEP_N_REF,
    drive_dim=X_SWEEP_DRIVE_DIM,
    lambda_detuning=0.05,
    alpha_scale=1.0,
    workers=1,
):
    """Transmission amplitude ``|T|`` of each m-photon channel versus drive amplitude.

    Z variant: ``|J_{m-1}(alpha)|``.  X variant: ``|<+,N+1|sx|+,N>|`` at
    ``N = n_ref`` with ``eta = alpha / (4 sqrt(n_ref))`` and the atom placed
    just below the m-photon resonance (see :func:`x_channel_lambda`).
    ``alpha_scale`` multiplies the grid before evaluation, the single
    free scale between a measured drive amplitude and ``alpha``.
    Unresolved X-drive labels come back as NaN gaps.
    """
    variant = Variant(variant)
    alpha = np.asarray(alpha_grid, dtype=float)
    if alpha.ndim != 1 or np.any(alpha < 0) or np.any(np.diff(alpha) < 0):
        raise ValueError("alpha_grid must be a non-negative ascending 1-D grid")
    scaled = alpha * alpha_scale
    traces = []
    for m in m_list:
        meta = {"variant": variant.value, "m": int(m), "alpha_scale": alpha_scale}
        if variant is Variant.Z_DRIVE:
            vals = np.abs(transmission_z(m, scaled))
        else:
            lam = x_channel_lambda(m, lambda_detuning)
            meta.update(n_ref=n_ref, drive_dim=drive_dim, lam=lam)
            vals = np.array(_map(_x_point, [(a, lam, n_ref, drive_dim) for a in scaled], workers))
        traces.append(Trace(alpha, vals, meta, name=f"T_m{int(m)}", axis_name="alpha"))
    return traces


def first_zero(trace: Trace, threshold=None):
    """Location of the first interior zero of ``|trace|``.

    A zero is a local minimum of the magnitude below ``threshold``
    (default: 5% of the trace maximum).  The position is refined by
    treating ``|f|`` as ``c |x - x0|`` across the bracketing samples.
    Returns None when no zero is found.
    """
    y = np.abs(trace.values)
    x = trace.axis_values
    if threshold is None:
        threshold = 0.05 * np.nanmax(y)
    for i in range(1, len(y) - 1):
        if y[i] <= y[i - 1] and y[i] < y[i + 1] and y[i] < threshold:
            if y[i] == 0:
                return float(x[i])
            j = i if y[i - 1] > y[i + 1] else i - 1
            return float(x[j] + y[j] / (y[j] + y[j + 1]) * (x[j + 1] - x[j]))
    return None


def peak_heights(trace: Trace, expected_positions, linewidth=None):
    """Maximum of the trace within two linewidths of each expected position."""
    if linewidth is None:
        linewidth = trace.metadata.get("linewidth")
    if linewidth is None or not linewidth > 0:
        raise ValueError("a positive linewidth is required")
    out = []
    for pos in expected_positions:
        mask = np.abs(trace.axis_values - pos) <= 2.0 * linewidth
        if not np.any(mask):
            raise ValueError(f"no samples within 2 linewidths of {pos}")
        out.append(float(np.nanmax(trace.values[mask])))
    return out
