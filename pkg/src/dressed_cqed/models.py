"""Quantized-drive Hamiltonians for a two-level atom, optionally with a probe cavity.

All energies are in units of the drive photon energy.  The drive-only
space is atom (x) drive; ``extend_with_probe`` appends the probe mode.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .fock import (
    Operator,
    atom_operators,
    check_truncation,
    fock_parity,
    identity,
    ladder_operators,
    number_operator,
    tensor_product,
)

LAMBDA_CONSISTENCY_TOL = 1e-12


class Variant(str, enum.Enum):
    Z_DRIVE = "Z_drive"
    X_DRIVE = "X_drive"


class VariantMismatchError(ValueError):
    """A builder was handed a spec for the other driving model."""


@dataclass(frozen=True)
class DrivenModelSpec:
    """Parameters of a driven two-level atom.

    For the Z model the atom term is ``-eps0 sz - lam sx``; for the X model
    it is ``-(omega_a / 2 omega_d) sz`` and ``lam`` must equal
    ``omega_a / (2 omega_d)``.  Leave ``lam`` as None to derive it.
    """

    variant: Variant
    eta: float
    drive_dim: int = 200
    omega_d: float = 1.0
    omega_a: float | None = None
    eps0: float = 0.0
    lam: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.eta < 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if int(self.drive_dim) != self.drive_dim or self.drive_dim < 4:
            raise ValueError(f"drive_dim must be an integer >= 4, got {self.drive_dim}")
        if self.omega_d <= 0:
            raise ValueError("omega_d must be positive")
        if self.variant is Variant.X_DRIVE:
            if self.omega_a is None and self.lam is None:
                raise ValueError("X_drive needs omega_a or lam")
            if self.omega_a is None:
                object.__setattr__(self, "omega_a", 2.0 * self.lam * self.omega_d)
            derived = self.omega_a / (2.0 * self.omega_d)
            if self.lam is None:
                object.__setattr__(self, "lam", derived)
            elif abs(self.lam - derived) > LAMBDA_CONSISTENCY_TOL:
                raise ValueError(
                    f"lam={self.lam} inconsistent with omega_a/(2 omega_d)={derived}"
                )
        elif self.lam is None:
            object.__setattr__(self, "lam", 0.0)

    @classmethod
    def z_drive(cls, eps0, lam, eta, drive_dim=200):
        return cls(Variant.Z_DRIVE, eta=eta, drive_dim=drive_dim, eps0=eps0, lam=lam)

    @classmethod
    def x_drive(cls, lam, eta, drive_dim=200):
        return cls(Variant.X_DRIVE, eta=eta, drive_dim=drive_dim, lam=lam)

    @property
    def dims(self):
        return (2, int(self.drive_dim))


@dataclass(frozen=True)
class CavityCouplingSpec:
    """Probe cavity: ``omega_r`` and dimensionless coupling ``g`` (units of omega_r)."""

    g: float
    omega_r: float
    probe_dim: int = 2

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError(f"g must be positive, got {self.g}")
        if not self.omega_r > 0:
            raise ValueError("omega_r must be positive")
        if int(self.probe_dim) != self.probe_dim or self.probe_dim < 2:
            raise ValueError(f"probe_dim must be an integer >= 2, got {self.probe_dim}")


def _drive_terms(dim):
    a, ad = ladder_operators(dim)
    return number_operator(dim), (a + ad)


def build_z_driven(spec: DrivenModelSpec) -> Operator:
    """``-eps0 sz - lam sx + a^dag a + eta (a^dag + a) sz``."""
    if spec.variant is not Variant.Z_DRIVE:
        raise VariantMismatchError(f"build_z_driven needs Z_drive, got {spec.variant.value}")
    dim = int(spec.drive_dim)
    check_truncation(spec.eta**2, dim, "Z-drive displacement")
    sx, sz, _ = atom_operators()
    num, quad = _drive_terms(dim)
    I2, Id = identity(2), identity(dim)
    H = (
        tensor_product(sz, Id) * (-spec.eps0)
        + tensor_product(sx, Id) * (-spec.lam)
        + tensor_product(I2, num)
        + tensor_product(sz, quad) * spec.eta
    )
    return H


def build_x_driven(spec: DrivenModelSpec) -> Operator:
    """``-(omega_a / 2 omega_d) sz + a^dag a + eta (a^dag + a) sx`` (Rabi model)."""
    if spec.variant is not Variant.X_DRIVE:
        raise VariantMismatchError(f"build_x_driven needs X_drive, got {spec.variant.value}")
    dim = int(spec.drive_dim)
    sx, sz, _ = atom_operators()
    num, quad = _drive_terms(dim)
    H = (
        tensor_product(sz, identity(dim)) * (-spec.lam)
        + tensor_product(identity(2), num)
        + tensor_product(sx, quad) * spec.eta
    )
    return H


def build_driven(spec: DrivenModelSpec) -> Operator:
    if spec.variant is Variant.Z_DRIVE:
        return build_z_driven(spec)
    return build_x_driven(spec)


def extend_with_probe(H: Operator, cav: CavityCouplingSpec, omega_d: float) -> Operator:
    """Append the probe mode: ``H (x) I + (omega_r/omega_d)[b^dag b + g (b^dag + b) sx]``.

    ``H`` must live on atom (x) drive with the atom first.
    """
    if H.dims[0] != 2:
        raise ValueError("first subsystem of H must be the two-level atom")
    pdim = int(cav.probe_dim)
    sx, _, _ = atom_operators()
    num, quad = _drive_terms(pdim)
    rest = [identity(d) for d in H.dims[1:]]
    scale = cav.omega_r / omega_d
    cavity = tensor_product(identity(2), *rest, num) + tensor_product(sx, *rest, quad) * cav.g
    return tensor_product(H, identity(pdim)) + cavity * scale


def parity_operator(drive_dim) -> Operator:
    """``sz (x) (-1)^{a^dag a}``."""
    _, sz, _ = atom_operators()
    return tensor_product(sz, fock_parity(int(drive_dim)))


def parity_commutator_norm(H: Operator) -> float:
    """Largest entry magnitude of ``[H, P]`` with ``P = sz (x) (-1)^{a^dag a}``."""
    if len(H.dims) != 2 or H.dims[0] != 2:
        raise ValueError("H must act on atom (x) drive")
    P = parity_operator(H.dims[1])
    return float(np.max(np.abs(H.commutator(P).matrix)))


def parity_labels(drive_dim):
    """Parity eigenvalue of each product basis state, in kron order."""
    sz = np.repeat([1, -1], drive_dim)
    n = np.tile(np.arange(drive_dim), 2)
    return sz * (1 - 2 * (n % 2))


def sorted_eigensystem(H: Operator):
    """Ascending eigenpairs; exact ties ordered by ascending drive photon number.

    The drive subsystem is assumed to be the second label.
    """
    vals, vecs = H.eigh()
    if len(H.dims) < 2:
        return vals, vecs
    dims = H.dims
    n_diag = np.arange(dims[1], dtype=float)
    num = np.kron(np.kron(np.ones(dims[0]), n_diag), np.ones(int(np.prod(dims[2:], dtype=int))))
    mean_n = np.einsum("ij,i,ij->j", vecs.conj(), num, vecs).real
    order = np.lexsort((mean_n, np.round(vals, 12)))
    return vals[order], vecs[:, order]
