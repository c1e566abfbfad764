"""Truncated bosonic and two-level operator algebra.

Composite spaces are ordered atom (x) drive (x) probe, with the first label
varying slowest, i.e. plain ``np.kron`` ordering.  Operators and states are
dense and immutable once built.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.linalg

from .special import normalized_laguerre

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-10


class InvalidDimensionError(ValueError):
    """A Fock truncation or composite dimension is not allowed."""


class TruncationWarning(UserWarning):
    """The mean photon number of a displaced state is close to the cutoff."""


def check_truncation(mean_photons, dim, what="state"):
    """Warn when ``mean_photons`` exceeds a quarter of ``dim``.

    Returns True when the guard fired, so callers can record the flag.
    """
    if mean_photons > dim / 4:
        warnings.warn(
            f"{what}: mean photon number {mean_photons:.3g} exceeds dim/4 = {dim / 4:.3g}; "
            "increase the Fock truncation",
            TruncationWarning,
            stacklevel=3,
        )
        return True
    return False


def _frozen(arr):
    arr = np.array(arr, dtype=complex, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense operator on a tensor-product space.

    ``dims`` lists the subsystem dimensions, slowest-varying first.
    """

    matrix: np.ndarray
    dims: tuple = field(default=())

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InvalidDimensionError(f"operator matrix must be square, got shape {mat.shape}")
        dims = tuple(int(d) for d in self.dims) if self.dims else (mat.shape[0],)
        if int(np.prod(dims)) != mat.shape[0]:
            raise InvalidDimensionError(
                f"dims {dims} do not multiply to matrix size {mat.shape[0]}"
            )
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def dim(self):
        return self.matrix.shape[0]

    def dag(self) -> Operator:
        return Operator(self.matrix.conj().T, self.dims)

    def is_hermitian(self, tol=HERMITIAN_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0) < tol)

    def _other(self, other):
        if isinstance(other, Operator):
            if other.dims != self.dims:
                raise InvalidDimensionError(f"dims mismatch: {self.dims} vs {other.dims}")
            return other.matrix
        return NotImplemented

    def __add__(self, other):
        mat = self._other(other)
        if mat is NotImplemented:
            return mat
        return Operator(self.matrix + mat, self.dims)

    def __sub__(self, other):
        mat = self._other(other)
        if mat is NotImplemented:
            return mat
        return Operator(self.matrix - mat, self.dims)

    def __neg__(self):
        return Operator(-self.matrix, self.dims)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float, complex, np.number)):
            return Operator(self.matrix * scalar, self.dims)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            if other.dims != self.dims:
                raise InvalidDimensionError(f"dims mismatch: {self.dims} vs {other.dims}")
            return StateVector(self.matrix @ other.amplitudes, self.dims, normalize=False)
        mat = self._other(other)
        if mat is NotImplemented:
            return mat
        return Operator(self.matrix @ mat, self.dims)

    def commutator(self, other: Operator) -> Operator:
        return self @ other - other @ self

    def eigh(self):
        """Ascending eigenvalues and eigenvectors (columns) of a Hermitian operator."""
        return np.linalg.eigh(self.matrix)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex state over a tensor-product space.

    With ``normalize=True`` (the default) the amplitudes are rescaled to
    unit norm on construction.
    """

    amplitudes: np.ndarray
    dims: tuple = field(default=())
    normalize: bool = True

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex, copy=True).reshape(-1)
        dims = tuple(int(d) for d in self.dims) if self.dims else (amps.size,)
        if int(np.prod(dims)) != amps.size:
            raise InvalidDimensionError(f"dims {dims} do not multiply to vector size {amps.size}")
        if self.normalize:
            nrm = np.linalg.norm(amps)
            if nrm == 0:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / nrm
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: StateVector) -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def expect(self, op: Operator) -> complex:
        return complex(np.vdot(self.amplitudes, op.matrix @ self.amplitudes))


def basis_state(dims, indices) -> StateVector:
    """Product basis ket ``|i_0>|i_1>...`` for the given subsystem indices."""
    dims = tuple(dims)
    if len(indices) != len(dims):
        raise InvalidDimensionError("one index per subsystem is required")
    flat = int(np.ravel_multi_index(tuple(indices), dims))
    amps = np.zeros(int(np.prod(dims)), dtype=complex)
    amps[flat] = 1.0
    return StateVector(amps, dims)


def identity(dim) -> Operator:
    return Operator(np.eye(dim), (dim,))


def ladder_operators(dim):
    """Annihilation and creation operators on a Fock space truncated at ``dim`` levels."""
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"Fock dimension must be an integer >= 2, got {dim}")
    dim = int(dim)
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)
    return Operator(a, (dim,)), Operator(a.T, (dim,))


def number_operator(dim) -> Operator:
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"Fock dimension must be an integer >= 2, got {dim}")
    return Operator(np.diag(np.arange(int(dim), dtype=float)), (int(dim),))


def fock_parity(dim) -> Operator:
    """``(-1)^{a^dagger a}`` on the truncated space."""
    return Operator(np.diag((-1.0) ** np.arange(dim)), (dim,))


def displacement_operator(beta, dim) -> Operator:
    """``exp(beta a^dagger - beta^* a)`` on the truncated space.

    Unitary by construction; entries near the cutoff are inaccurate, and a
    :class:`TruncationWarning` is issued when ``|beta|^2 > dim/4``.
    """
    a, ad = ladder_operators(dim)
    check_truncation(abs(beta) ** 2, dim, "displacement")
    gen = beta * ad.matrix - np.conj(beta) * a.matrix
    return Operator(scipy.linalg.expm(gen), (int(dim),))


def displacement_element(m, n, beta) -> complex:
    """Analytic Fock matrix element ``<m|D(beta)|n>`` of the untruncated displacement.

    Uses the associated-Laguerre closed form.
    """
    if m < 0 or n < 0:
        raise ValueError("Fock indices must be non-negative")
    r = abs(beta)
    x = r * r
    if m >= n:
        mag = normalized_laguerre(n, m - n, x)
        phase = (beta / r) ** (m - n) if r > 0 else (1.0 if m == n else 0.0)
    else:
        mag = normalized_laguerre(m, n - m, x)
        phase = (-np.conj(beta) / r) ** (n - m) if r > 0 else 0.0
    return complex(mag * phase)


def tensor_product(*ops):
    """Kronecker product of operators or states, dims concatenated in order."""
    if not ops:
        raise ValueError("tensor_product needs at least one factor")
    if all(isinstance(o, StateVector) for o in ops):
        amps = reduce(np.kron, [o.amplitudes for o in ops])
        return StateVector(amps, sum((o.dims for o in ops), ()), normalize=False)
    if all(isinstance(o, Operator) for o in ops):
        mat = reduce(np.kron, [o.matrix for o in ops])
        return Operator(mat, sum((o.dims for o in ops), ()))
    raise TypeError("tensor_product factors must be all Operators or all StateVectors")


def atom_operators():
    """Pauli ``sigma_x``, ``sigma_z`` and the atom parity (= ``sigma_z``).

    Basis order is ``|+>`` (sigma_z = +1) then ``|->``.
    """
    sx = Operator(np.array([[0.0, 1.0], [1.0, 0.0]]), (2,))
    sz = Operator(np.array([[1.0, 0.0], [0.0, -1.0]]), (2,))
    return sx, sz, sz


def embed(op: Operator, position: int, dims) -> Operator:
    """Lift a single-subsystem operator into the composite space ``dims``."""
    factors = [identity(d) for d in dims]
    if op.dim != dims[position]:
        raise InvalidDimensionError(
            f"operator of dim {op.dim} does not fit subsystem {position} of {tuple(dims)}"
        )
    factors[position] = op
    return tensor_product(*factors)
