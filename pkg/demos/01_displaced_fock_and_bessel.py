# coding: utf-8

# # Displaced Fock states and the Bessel limit
#
# A drive that couples through sigma_z shifts the oscillator by a state
# dependent amount. The overlap between the two shifted ladders is a
# displacement matrix element, and for large photon number it collapses
# onto a Bessel function.

import math

import numpy as np

from dressed_cqed.fock import displacement_element, displacement_operator
from dressed_cqed.special import bessel_j

# ## Numerical vs analytic displacement
#
# `displacement_operator` exponentiates the truncated generator;
# `displacement_element` evaluates the closed-form overlap without
# building any matrix.

beta = 1.3 - 0.4j
D = displacement_operator(beta, 60).matrix
err = max(abs(D[m, n] - displacement_element(m, n, beta)) for m in range(30) for n in range(30))
print("max entry error in the 30x30 block:", err)

# ## Large-N limit
#
# With alpha = 4 eta sqrt(N) held fixed, <N|D(2 eta)|N-k> approaches
# J_k(alpha).  At N = 10^4 the two agree to better than 1e-4.

N = 10_000
for alpha in (0.5, 2.4048, 4.0):
    eta = alpha / (4 * math.sqrt(N))
    row = [displacement_element(N, N - k, 2 * eta).real for k in range(3)]
    ref = [float(bessel_j(k, alpha)) for k in range(3)]
    print(f"alpha={alpha:6.4f}  exact={np.round(row, 6)}  bessel={np.round(ref, 6)}")
