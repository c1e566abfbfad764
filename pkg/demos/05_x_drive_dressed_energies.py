# coding: utf-8

# # Dressed energies of the sigma_x-driven atom
#
# To leading order E(+-, N) = N +- lambda J_0(4 eta sqrt N).  The error is
# second order in eta; halving eta cuts it about fourfold.

import math

from scipy.special import jv

from dressed_cqed import DrivenModelSpec, x_dressed_spectrum


def residual(lam, eta):
    spec = DrivenModelSpec.x_drive(lam=lam, eta=eta, drive_dim=80)
    return max(
        abs(s.energy - (s.N + s.branch * lam * jv(0, 4 * eta * math.sqrt(s.N))))
        for s in x_dressed_spectrum(spec, range(1, 11))
    )


for lam in (0.45, 0.95, 1.45):
    r1, r2 = residual(lam, 0.02), residual(lam, 0.01)
    print(f"lambda={lam}: residual {r1:.2e} -> {r2:.2e}, ratio {r1 / r2:.2f}")

# A few labeled states at N = 20
spec = DrivenModelSpec.x_drive(lam=0.95, eta=0.1, drive_dim=80)
for s in x_dressed_spectrum(spec, [19, 20, 21]):
    print(f"branch {s.branch:+d}, N={s.N}: E = {s.energy:.6f}, parity {s.parity:+d}")
