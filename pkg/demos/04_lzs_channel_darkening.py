# coding: utf-8

# # Channel darkening under strong driving
#
# Each m-photon line is carried by a dressed coupling g * J_{m-1}(alpha).
# As the drive amplitude grows the lines go dark one after another, in
# the order of the Bessel zeros.

import numpy as np

from dressed_cqed.sweep import first_zero, lzs_amplitude_sweep

alpha = np.linspace(0, 6, 601)

# ## sigma_z drive: closed form
z_traces = lzs_amplitude_sweep("Z_drive", [1, 2, 3], alpha)
for t in z_traces:
    print(f"{t.name}: first zero at alpha = {first_zero(t):.4f}")

# ## sigma_x drive: full diagonalization
#
# Here each point is an exact eigenproblem.  Parity splits the matrix
# into two blocks; eigenvalues are labeled by rank within a block.

x_traces = lzs_amplitude_sweep("X_drive", [1, 2, 3], alpha[::20], workers=2)
for t in x_traces:
    print(t.name, np.round(t.values, 3))
