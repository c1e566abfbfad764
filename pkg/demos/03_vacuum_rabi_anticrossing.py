# coding: utf-8

# # Vacuum Rabi anticrossing
#
# Sweeping the bias tunes the transmon through a cavity mode.  In the
# single-excitation manifold the two branches repel with minimum gap 2g.

import numpy as np

from dressed_cqed import TransmonSpec, calibrate_bias_map
from dressed_cqed.sweep import SweepPlan, anticrossing_trace

spec = TransmonSpec()
calib = calibrate_bias_map(spec, (7.2, 5.513))
plan = SweepPlan("bias_current", 6.8, 7.6, 801)
lo, hi = anticrossing_trace(spec, calib, mode_freq=5.514, g_mhz=5.0, plan=plan)

gap = hi.values - lo.values
k = int(np.argmin(gap))
print(f"closest approach at {plan.grid()[k]:.4f} uA, gap = {gap[k] * 1e3:.4f} MHz")

# Far from resonance the branches return to the bare frequencies.
print("gap at the sweep edges (MHz):", round(gap[0] * 1e3, 2), round(gap[-1] * 1e3, 2))
