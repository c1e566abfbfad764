"""Dressed states of the driven atom and the probe transmission they imply.

Branch convention: ``branch=+1`` is the upper dressed level of a drive
manifold.  For the Z model that is the ``sz = +1`` atom state displaced by
``-eta`` (``|+,N> = D(-eta)|+>|N>``); for the X model it is the level that
starts at ``N + lam`` when ``eta = 0``, i.e. the ``sz = -1`` atom state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import (
    NORM_TOL,
    Operator,
    StateVector,
    atom_operators,
    basis_state,
    check_truncation,
    displacement_element,
    displacement_operator,
    identity,
    tensor_product,
)
from .models import (
    DrivenModelSpec,
    Variant,
    VariantMismatchError,
    build_x_driven,
    build_z_driven,
    parity_labels,
)
from .special import bessel_j

__all__ = [
    "DressedState",
    "EffectiveResonance",
    "LabelingError",
    "bessel_j",
    "build_effective_resonance",
    "dressed_sigma_x_element",
    "probe_expanded_energies",
    "transmission_x",
    "transmission_z",
    "x_dressed_spectrum",
    "z_dressed_energy",
    "z_dressed_spectrum",
    "z_dressed_state",
]

LABEL_OVERLAP_THRESHOLD = 0.5
_TIE_TOL = 1e-12


class LabelingError(RuntimeError):
    """A dressed eigenstate could not be assigned a unique label."""


@dataclass(frozen=True, eq=False)
class DressedState:
    """A labeled dressed state.

    ``overlap`` is the squared overlap with the reference (undressed or
    analytic) state of the same label; ``labeled`` is False when the label
    assignment failed or was ambiguous.
    """

    branch: int
    N: int
    vector: StateVector
    energy: float
    n_p: int | None = None
    parity: int | None = None
    overlap: float = 1.0
    labeled: bool = True

    @property
    def label(self):
        return (self.branch, self.N, self.n_p)


def _check_branch(branch):
    if branch not in (1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")


def fix_phase(vec):
    """Scale so that the largest-magnitude component is real and positive."""
    vec = np.asarray(vec)
    k = int(np.argmax(np.abs(vec)))
    if vec[k] == 0:
        return vec
    return vec * (abs(vec[k]) / vec[k])


def z_dressed_energy(branch, N, eps0, eta):
    """Analytic Z-drive dressed energy ``N - branch*eps0 - eta^2`` (``lam = 0``)."""
    _check_branch(branch)
    return N - branch * eps0 - eta**2


def z_dressed_state(branch, N, eta, drive_dim, eps0=0.0) -> DressedState:
    """``D(-branch*eta)|branch>|N>`` on atom (x) drive.

    The energy stored is the exact value for ``lam = 0``.
    """
    _check_branch(branch)
    if int(N) != N or N < 0 or N >= drive_dim:
        raise ValueError(f"N={N} must lie in [0, drive_dim={drive_dim})")
    check_truncation(N + eta**2, drive_dim, "Z dressed state")
    q = 0 if branch == 1 else 1
    fock = basis_state((drive_dim,), (int(N),))
    disp = displacement_operator(-branch * eta, drive_dim)
    atom = basis_state((2,), (q,))
    vec = tensor_product(atom, disp @ fock)
    return DressedState(
        branch=branch,
        N=int(N),
        vector=StateVector(vec.amplitudes, vec.dims),
        energy=z_dressed_energy(branch, N, eps0, eta),
    )


def probe_expanded_energies(branch, N, eps0, n_p, *, eta=0.0, g=0.0, delta=0.0):
    """Energies of ``|branch, N, n_p>`` for ``n_p`` in {0, 1}.

    Returns a dict with the coupling-shift convention (``-g^2`` on the
    ``n_p = 0`` state) under ``"cavity_shift"`` and the drive-displacement
    convention (``-eta^2``) under ``"drive_shift"``.  The ``n_p = 1`` state
    sits at ``N - branch*eps0 + 1 + delta`` in both.
    """
    _check_branch(branch)
    base = N - branch * eps0
    if n_p == 0:
        return {"cavity_shift": base - g**2, "drive_shift": base - eta**2}
    if n_p == 1:
        e = base + 1.0 + delta
        return {"cavity_shift": e, "drive_shift": e}
    raise ValueError("only n_p = 0 or 1 is modelled")


def dressed_sigma_x_element(N, m, eta, mode="exact"):
    """Matrix element of ``sigma_x`` linking Z-drive dressed states ``m - 1`` photons apart.

    ``exact`` gives ``<N|D(2 eta)|N-m+1>`` from the associated-Laguerre
    closed form; ``asymptotic`` gives ``J_{m-1}(4 eta sqrt(N))``.
    """
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    k = int(m) - 1
    if N < k:
        raise ValueError(f"N={N} must be at least m-1={k}")
    if mode == "exact":
        return displacement_element(int(N), int(N) - k, 2.0 * eta).real
    if mode == "asymptotic":
        return float(bessel_j(k, 4.0 * eta * math.sqrt(N)))
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True, eq=False)
class EffectiveResonance:
    """Two-level effective Hamiltonian near an m-photon resonance.

    The offset ``omega0`` is kept separate and never added to ``matrix``.
    """

    m: int
    delta_m: float
    Delta_m: float
    coupling: float
    omega0: float
    matrix: np.ndarray
    eigenvalues: np.ndarray
    ground_vector: np.ndarray

    @property
    def ground_energy(self):
        return float(self.eigenvalues[0])


def _lower_eigvec_2x2(a, d, c, e_low):
    cand_a = np.array([c, e_low - a])
    cand_b = np.array([e_low - d, c])
    v = cand_a if np.linalg.norm(cand_a) >= np.linalg.norm(cand_b) else cand_b
    v = v / np.linalg.norm(v)
    first = v[0] if abs(v[0]) > 0 else v[1]
    return v * np.sign(first)


def build_effective_resonance(m, omega_m0, omega_p, omega_d, g, alpha, N=0) -> EffectiveResonance:
    """Assemble and diagonalize the m-photon effective Hamiltonian.

    ``omega_m0``, ``omega_p`` and ``omega_d`` share any frequency unit;
    ``g`` is dimensionless and ``alpha`` is the drive amplitude
    ``4 eta sqrt(N)``.
    """
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    if min(omega_m0, omega_p, omega_d) <= 0:
        raise ValueError("frequencies must be positive")
    per_photon = omega_m0 / (m * omega_d)
    Delta_m = 1.0 - per_photon
    delta_m = omega_p / omega_d - per_photon
    coupling = g * float(bessel_j(m - 1, alpha))
    a, d = delta_m, (1 - m) * Delta_m
    matrix = np.array([[a, coupling], [coupling, d]])
    mean = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), coupling)
    evals = np.array([mean - radius, mean + radius])
    vec = _lower_eigvec_2x2(a, d, coupling, evals[0])
    return EffectiveResonance(
        m=int(m),
        delta_m=delta_m,
        Delta_m=Delta_m,
        coupling=coupling,
        omega0=N + per_photon,
        matrix=matrix,
        eigenvalues=evals,
        ground_vector=vec,
    )


def transmission_z(m, alpha):
    """Z-drive probe transmission through the m-photon channel, ``J_{m-1}(alpha)``.

    Signed; take the absolute value for amplitude traces.
    """
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    return bessel_j(int(m) - 1, alpha)


def _window(N_window):
    if isinstance(N_window, range):
        return list(N_window)
    if isinstance(N_window, tuple) and len(N_window) == 2:
        return list(range(int(N_window[0]), int(N_window[1]) + 1))
    return [int(n) for n in N_window]


def x_dressed_spectrum(spec: DrivenModelSpec, N_window, labeling="sector_rank"):
    """Diagonalize the X-drive model and return labeled dressed states.

    Parameters
    ----------
    spec : DrivenModelSpec
        An X-drive spec.
    N_window : range, sequence of int, or (lo, hi) tuple
        Drive photon numbers to report (``hi`` inclusive for tuples).
    labeling : {"sector_rank", "overlap"}
        ``sector_rank`` labels the k-th eigenvalue of each parity sector
        with the k-th bare level of that sector, which follows each level
        continuously from ``eta = 0`` because levels of one sector never
        cross.  ``overlap`` uses the largest squared overlap with the bare
        state and marks labels below 0.5 as unresolved.

    Returns
    -------
    list of DressedState
        Ordered by ``N`` and then ``branch = +1, -1``.
    """
    if spec.variant is not Variant.X_DRIVE:
        raise VariantMismatchError("x_dressed_spectrum needs an X_drive spec")
    window = _window(N_window)
    dim = int(spec.drive_dim)
    if dim < 2 * max(window):
        raise ValueError(f"drive_dim={dim} must be at least 2*max(N_window)={2 * max(window)}")
    if labeling not in ("sector_rank", "overlap"):
        raise ValueError(f"unknown labeling {labeling!r}")
    H = build_x_driven(spec).matrix.real
    sz = np.repeat([1, -1], dim)
    n = np.tile(np.arange(dim), 2)
    par = parity_labels(dim)
    bare = n - spec.lam * sz

    wanted = {(b, N) for N in window for b in (1, -1)}
    found = {}
    if labeling == "sector_rank":
        for p in (1, -1):
            idx = np.flatnonzero(par == p)
            w, v = np.linalg.eigh(H[np.ix_(idx, idx)])
            order = np.argsort(bare[idx], kind="stable")
            sorted_bare = bare[idx][order]
            for r, k in enumerate(order):
                key = (-int(sz[idx[k]]), int(n[idx[k]]))
                if key not in wanted:
                    continue
                tie = (r > 0 and abs(sorted_bare[r] - sorted_bare[r - 1]) < _TIE_TOL) or (
                    r + 1 < len(order) and abs(sorted_bare[r + 1] - sorted_bare[r]) < _TIE_TOL
                )
                full = np.zeros(2 * dim)
                full[idx] = v[:, r]
                found[key] = (w[r], full, p, float(v[k, r] ** 2), not tie)
    else:
        w, v = np.linalg.eigh(H)
        pops = np.abs(v) ** 2
        for key in wanted:
            b, N = key
            flat = (0 if b == -1 else 1) * dim + N
            j = int(np.argmax(pops[flat]))
            ov = float(pops[flat, j])
            found[key] = (w[j], v[:, j], int(par[flat]), ov, ov >= LABEL_OVERLAP_THRESHOLD)

    states = []
    for N in window:
        for b in (1, -1):
            energy, vec, p, ov, ok = found[(b, N)]
            states.append(
                DressedState(
                    branch=b,
                    N=N,
                    vector=StateVector(fix_phase(vec), spec.dims),
                    energy=float(energy),
                    parity=int(p),
                    overlap=ov,
                    labeled=bool(ok),
                )
            )
    return states


def z_dressed_spectrum(spec: DrivenModelSpec, N_window):
    """Numerically diagonalize the Z-drive model and label states against ``D(-+eta)|+-,N>``.

    Labels whose best squared overlap falls below 0.5 are marked unresolved.
    """
    if spec.variant is not Variant.Z_DRIVE:
        raise VariantMismatchError("z_dressed_spectrum needs a Z_drive spec")
    window = _window(N_window)
    dim = int(spec.drive_dim)
    if max(window) >= dim:
        raise ValueError("N_window exceeds drive_dim")
    w, v = np.linalg.eigh(build_z_driven(spec).matrix.real)
    states = []
    for N in window:
        for b in (1, -1):
            ref = z_dressed_state(b, N, spec.eta, dim, spec.eps0).vector.amplitudes
            ov = np.abs(ref.conj() @ v) ** 2
            j = int(np.argmax(ov))
            states.append(
                DressedState(
                    branch=b,
                    N=N,
                    vector=StateVector(fix_phase(v[:, j]), spec.dims),
                    energy=float(w[j]),
                    overlap=float(ov[j]),
                    labeled=bool(ov[j] >= LABEL_OVERLAP_THRESHOLD),
                )
            )
    return states


def _sigma_x_full(dim) -> Operator:
    sx, _, _ = atom_operators()
    return tensor_product(sx, identity(dim))


def transmission_x(spec: DrivenModelSpec, N, g=1.0, labeling="sector_rank"):
    """X-drive probe transmission ``g * <+,N+1| sigma_x |+,N>`` between dressed eigenstates.

    With the default ``g = 1`` this is the bare matrix element.

    Raises
    ------
    LabelingError
        If either dressed state is unresolved or ambiguous.
    """
    lower, upper = (
        s for s in x_dressed_spectrum(spec, [N, N + 1], labeling=labeling) if s.branch == 1
    )
    for s in (lower, upper):
        if not s.labeled:
            raise LabelingError(
                f"dressed state (+,{s.N}) unresolved (overlap {s.overlap:.3f}) "
                f"at lam={spec.lam}, eta={spec.eta}"
            )
    sx = _sigma_x_full(int(spec.drive_dim))
    elem = upper.vector.inner(sx @ lower.vector)
    return g * elem.real


def check_normalized(state: DressedState):
    return abs(state.vector.norm - 1.0) < NORM_TOL
