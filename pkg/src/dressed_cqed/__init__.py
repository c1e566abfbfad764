"""Dressed states of a driven two-level atom coupled to a probe cavity."""

from .dressed import (
    DressedState,
    EffectiveResonance,
    LabelingError,
    bessel_j,
    build_effective_resonance,
    dressed_sigma_x_element,
    transmission_x,
    transmission_z,
    x_dressed_spectrum,
    z_dressed_spectrum,
    z_dressed_state,
)
from .fock import (
    Operator,
    StateVector,
    TruncationWarning,
    atom_operators,
    displacement_element,
    displacement_operator,
    ladder_operators,
    tensor_product,
)
from .models import (
    CavityCouplingSpec,
    DrivenModelSpec,
    Variant,
    build_x_driven,
    build_z_driven,
    extend_with_probe,
    parity_commutator_norm,
)
from .sweep import (
    SweepPlan,
    Trace,
    anticrossing_trace,
    lzs_amplitude_sweep,
    multiphoton_peak_positions,
    peak_heights,
    synthetic_transmission_trace,
)
from .transmon import (
    BiasCalibration,
    TransmonSpec,
    calibrate_bias_map,
    charge_basis_levels,
    ej_of_bias,
    transition_frequency,
)

__version__ = "0.1.0"
