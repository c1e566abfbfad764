# coding: utf-8

# # Transmon levels and multi-photon resonances
#
# The charge-basis Hamiltonian is tridiagonal, so its lowest levels come
# from a banded eigensolver.  A SQUID makes E_J tunable with bias current;
# one anchor point fixes the current-to-flux slope.

from dressed_cqed import TransmonSpec, calibrate_bias_map, charge_basis_levels, transition_frequency
from dressed_cqed.sweep import multiphoton_peak_positions

spec = TransmonSpec(EJ0=90.0, EC=0.5)
levels = charge_basis_levels(spec)
print("levels at full E_J (GHz):", levels.round(4))
print("omega_10 =", round(transition_frequency(levels, 1), 4), "GHz")

# ## Calibrate on one point
#
# 7.2 uA is taken to put omega_10 on the 5.513 GHz probe.

calib = calibrate_bias_map(spec, (7.2, 5.513))
print("current-to-flux slope (Phi0/uA):", calib.current_to_flux_slope)

# ## Where do the m-photon lines sit?
#
# omega_m0(I) = m * omega_p.  Anharmonicity pulls each higher order to
# lower current.  At E_J/E_C near 18 the upper levels still feel charge
# dispersion, so the spacing is far from uniform.

for m, current in multiphoton_peak_positions(spec, calib, 5.513, 4):
    print(f"m={m}: I = {current:.4f} uA")
