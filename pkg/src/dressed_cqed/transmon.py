"""Transmon levels in the charge basis and the SQUID bias-current map.

Frequencies are in GHz, bias currents in microamperes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

DEFAULT_CUTOFF = 40
MIN_CUTOFF = 10
MIN_LEVELS = 5
EDGE_POPULATION_TOL = 1e-8


class TruncationError(RuntimeError):
    """The charge basis is too small for the requested levels."""


class CalibrationError(ValueError):
    """No bias map reproduces the requested anchor."""


class DegenerateCalibrationError(CalibrationError):
    """The anchor sits at zero flux, which forces a vanishing slope."""


@dataclass(frozen=True)
class TransmonSpec:
    """Cooper-pair-box parameters.

    ``EJ0`` is the zero-field Josephson energy and ``EC`` the charging
    energy, both divided by h (GHz).
    """

    EJ0: float = 90.0
    EC: float = 0.5
    ng: float = 0.0
    charge_cutoff: int = DEFAULT_CUTOFF

    def __post_init__(self):
        if not self.EJ0 > 0:
            raise ValueError(f"EJ0 must be positive, got {self.EJ0}")
        if not self.EC > 0:
            raise ValueError(f"EC must be positive, got {self.EC}")
        if int(self.charge_cutoff) != self.charge_cutoff or self.charge_cutoff < MIN_CUTOFF:
            raise ValueError(f"charge_cutoff must be an integer >= {MIN_CUTOFF}")
        if self.EJ0 / self.EC < 20:
            warnings.warn(
                f"EJ0/EC = {self.EJ0 / self.EC:.3g} is below the transmon regime (~20)",
                stacklevel=3,
            )


@dataclass(frozen=True)
class BiasCalibration:
    """Linear current-to-flux map, flux in units of the flux quantum."""

    current_to_flux_slope: float
    flux_offset: float = 0.0

    def __post_init__(self):
        if self.current_to_flux_slope == 0:
            raise ValueError("current_to_flux_slope must be nonzero")

    def flux(self, current):
        return self.current_to_flux_slope * np.asarray(current, dtype=float) + self.flux_offset


def charge_basis_levels(spec: TransmonSpec, EJ=None, n_levels=6):
    """Lowest transmon levels relative to the ground state, in GHz.

    Diagonalizes ``4 EC (n - ng)^2 - (EJ/2)(|n><n+1| + h.c.)`` over charge
    states ``-cutoff..cutoff``.  ``EJ`` defaults to ``spec.EJ0``.

    Raises
    ------
    TruncationError
        If any returned eigenvector has more than 1e-8 population on the
        outermost charge states.
    """
    EJ = spec.EJ0 if EJ is None else float(EJ)
    if EJ < 0:
        raise ValueError(f"EJ must be non-negative, got {EJ}")
    n_levels = max(int(n_levels), MIN_LEVELS)
    cut = int(spec.charge_cutoff)
    if n_levels > 2 * cut + 1:
        raise ValueError("more levels requested than charge states")
    charges = np.arange(-cut, cut + 1, dtype=float)
    diag = 4.0 * spec.EC * (charges - spec.ng) ** 2
    off = np.full(2 * cut, -0.5 * EJ)
    vals, vecs = scipy.linalg.eigh_tridiagonal(
        diag, off, select="i", select_range=(0, n_levels - 1)
    )
    edge = np.maximum(np.abs(vecs[0]) ** 2, np.abs(vecs[-1]) ** 2)
    if np.max(edge) > EDGE_POPULATION_TOL:
        raise TruncationError(
            f"charge cutoff {cut} too small: edge population {np.max(edge):.2e} at EJ={EJ}"
        )
    return vals - vals[0]


def transition_frequency(levels, m):
    """Spacing between level ``m`` and the ground level."""
    levels = np.asarray(levels, dtype=float)
    if int(m) != m or m < 0 or m >= levels.size:
        raise IndexError(f"level {m} out of range for {levels.size} levels")
    return float(levels[int(m)] - levels[0])


def ej_of_bias(current, spec: TransmonSpec, calib: BiasCalibration):
    """Josephson energy of a symmetric SQUID at the given bias current."""
    return spec.EJ0 * np.abs(np.cos(math.pi * calib.flux(current)))


def omega_m0_at_bias(current, m, spec: TransmonSpec, calib: BiasCalibration):
    """``omega_{m0}`` in GHz at a single bias current."""
    ej = float(ej_of_bias(current, spec, calib))
    return transition_frequency(charge_basis_levels(spec, ej, n_levels=max(m + 1, MIN_LEVELS)), m)


def _omega10_of_flux(flux, spec):
    ej = spec.EJ0 * abs(math.cos(math.pi * flux))
    return transition_frequency(charge_basis_levels(spec, ej), 1)


def calibrate_bias_map(spec: TransmonSpec, anchor, rtol=1e-10) -> BiasCalibration:
    """Slope of the current-to-flux map that puts ``omega_10`` on target at the anchor.

    ``anchor`` is ``(current_uA, omega_target_GHz)``.  The flux offset is
    zero and the root is taken on the monotone branch ``0 < flux < 1/2``.
    """
    current, target = float(anchor[0]), float(anchor[1])
    if current == 0:
        raise CalibrationError("anchor current must be nonzero")
    top = _omega10_of_flux(0.0, spec)
    bottom = _omega10_of_flux(0.5, spec)
    if math.isclose(target, top, rel_tol=1e-12, abs_tol=1e-12):
        raise DegenerateCalibrationError(
            f"target {target} GHz equals the zero-flux frequency; slope would vanish"
        )
    if not bottom < target < top:
        raise CalibrationError(
            f"target {target} GHz outside achievable range ({bottom:.6g}, {top:.6g}) GHz"
        )
    flux = scipy.optimize.bisect(
        lambda f: _omega10_of_flux(f, spec) - target, 0.0, 0.5, xtol=1e-15, rtol=rtol, maxiter=200
    )
    return BiasCalibration(current_to_flux_slope=flux / current, flux_offset=0.0)
