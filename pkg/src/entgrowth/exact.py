"""Dense state-vector dynamics for small lattices.

This is the ground truth for the TEBD engine and the place where the
instantaneous purity-rate identity ``d/dt tr rho_A^2 = sum_ab Theta_ab Q_ab`` is
checked against finite differences.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse.linalg as spla

from .bounds import SchmidtSpectrum, theta_matrix
from .errors import CapacityError, InvalidSizeError
from .lattice import (
    CHAIN,
    LADDER,
    CutBondInteraction,
    SpinLatticeModel,
    apply_pauli_string,
    resolve_cut,
)

__all__ = [
    "MAX_DENSE_SITES",
    "DenseState",
    "QMatrix",
    "SchmidtDecomposition",
    "basis_state",
    "chain_state",
    "dense_from_spec",
    "random_state",
    "evolve_dense",
    "dense_trajectory",
    "energy",
    "schmidt_decomposition",
    "reduced_schmidt_spectrum",
    "q_matrix",
    "rate_from_decomposition",
    "purity_rate_formula",
    "finite_difference_purity_rate",
    "rate_bound_check",
]

MAX_DENSE_SITES = 16
# full eigendecomposition up to this size, sparse exponential action above
EIGH_MAX_SITES = 10


@dataclass(frozen=True, eq=False)
class DenseState:
    amplitudes: np.ndarray
    n_sites: int
    geometry: str = CHAIN

    def __post_init__(self):
        if not 1 <= self.n_sites <= MAX_DENSE_SITES:
            raise CapacityError(f"dense states support 1..{MAX_DENSE_SITES} sites, got {self.n_sites}")
        psi = np.asarray(self.amplitudes, dtype=complex).ravel()
        if psi.size != 1 << self.n_sites:
            raise ValueError(f"expected {1 << self.n_sites} amplitudes, got {psi.size}")
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state norm is {norm!r}, expected 1")
        psi.setflags(write=False)
        object.__setattr__(self, "amplitudes", psi)

    def with_amplitudes(self, psi: np.ndarray) -> DenseState:
        return DenseState(psi, self.n_sites, self.geometry)

    def overlap(self, other: DenseState) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class QMatrix:
    """``Q_ab = sum_q <a|H_q^A|b><a|H_q^B|b>`` in the Schmidt basis."""

    entries: np.ndarray


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    spectrum: SchmidtSpectrum
    left: np.ndarray  # columns are |phi_a^A>
    right: np.ndarray  # rows are |phi_a^B>
    a_sites: tuple[int, ...]
    b_sites: tuple[int, ...]


def _check_sites(n):
    if n > MAX_DENSE_SITES:
        raise CapacityError(f"{n} sites exceed the dense capacity of {MAX_DENSE_SITES}")
    if n < 1:
        raise InvalidSizeError("need at least one site")


def basis_state(pattern) -> np.ndarray:
    """Computational basis vector for a pattern of ``'u'``/``'d'`` (or up/down) labels."""
    index = 0
    for label in pattern:
        bit = {"u": 0, "up": 0, "d": 1, "down": 1}[str(label).lower()]
        index = (index << 1) | bit
    psi = np.zeros(1 << len(pattern), dtype=complex)
    psi[index] = 1.0
    return psi


def chain_state(kind: str, n: int, p: int | None = None) -> np.ndarray:
    """Single-chain state vector: ``down``, ``up``, ``ghz-x`` or ``w`` with ``p`` flips."""
    dim = 1 << n
    if kind == "down":
        return basis_state("d" * n)
    if kind == "up":
        return basis_state("u" * n)
    if kind == "ghz-x":
        plus = np.full(dim, 2 ** (-n / 2), dtype=complex)
        minus = np.array([(-1) ** bin(i).count("1") for i in range(dim)], dtype=complex) * 2 ** (-n / 2)
        return (plus + minus) / math.sqrt(2)
    if kind == "w":
        if p is None or not 0 <= p <= n:
            raise ValueError(f"W state needs 0 <= p <= {n}, got {p}")
        psi = np.zeros(dim, dtype=complex)
        for flipped in combinations(range(n), p):
            # start from all down (bits 1) and flip the chosen sites up
            index = dim - 1
            for site in flipped:
                index &= ~(1 << (n - 1 - site))
            psi[index] = 1.0
        return psi / math.sqrt(math.comb(n, p))
    raise ValueError(f"unknown chain state {kind!r}")


def _interleave(psi_a: np.ndarray, psi_b: np.ndarray, n: int) -> np.ndarray:
    joint = np.kron(psi_a, psi_b).reshape((2,) * (2 * n))
    order = [k for j in range(n) for k in (j, n + j)]
    return joint.transpose(order).ravel()


def _parse_kind(kind: str):
    if kind.startswith("w:"):
        return "w", int(kind[2:])
    return kind, None


def dense_from_spec(kind: str, size: int, *, p: int | None = None, geometry: str | None = None) -> DenseState:
    """Named initial states.

    Chain kinds (``size`` = sites): ``neel``, ``all-down``, ``product-updown``
    (left half down, right half up).  Ladder kinds (``size`` = rungs, sites
    interleaved): ``basis-product``/``product-updown`` (chain A down, chain B up),
    ``ghz-x`` and ``w`` / ``w:p`` (the same state on both chains).
    """
    kind, p_in_kind = _parse_kind(kind)
    p = p if p is not None else p_in_kind
    ladder_kinds = {"basis-product", "ghz-x", "w"}
    if geometry is None:
        geometry = LADDER if kind in ladder_kinds or kind == "product-updown" else CHAIN
    if geometry == CHAIN:
        _check_sites(size)
        if kind == "neel":
            psi = basis_state("ud" * (size // 2) + "u" * (size % 2))
        elif kind == "all-down":
            psi = basis_state("d" * size)
        elif kind == "product-updown":
            psi = basis_state("d" * (size // 2) + "u" * (size - size // 2))
        else:
            raise ValueError(f"state kind {kind!r} is not defined on a chain")
        return DenseState(psi, size, CHAIN)
    if size < 1:
        raise InvalidSizeError("need at least one rung")
    _check_sites(2 * size)
    if kind in ("basis-product", "product-updown"):
        a, b = chain_state("down", size), chain_state("up", size)
    elif kind == "ghz-x":
        a = b = chain_state("ghz-x", size)
    elif kind == "w":
        a = b = chain_state("w", size, p)
    elif kind == "neel":
        a, b = chain_state("up", size), chain_state("down", size)
    elif kind == "all-down":
        a = b = chain_state("down", size)
    else:
        raise ValueError(f"unknown state kind {kind!r}")
    return DenseState(_interleave(a, b, size), 2 * size, LADDER)


def random_state(n_sites: int, rng: np.random.Generator) -> DenseState:
    psi = rng.normal(size=1 << n_sites) + 1j * rng.normal(size=1 << n_sites)
    return DenseState(psi / np.linalg.norm(psi), n_sites)


@functools.lru_cache(maxsize=16)
def _eigh(model: SpinLatticeModel):
    return np.linalg.eigh(model.dense_hamiltonian())


@functools.lru_cache(maxsize=16)
def _sparse_h(model: SpinLatticeModel):
    return model.hamiltonian()


def _check_model(state: DenseState, model: SpinLatticeModel):
    if model.n_sites != state.n_sites:
        raise ValueError(f"model has {model.n_sites} sites, state has {state.n_sites}")
    _check_sites(model.n_sites)


def _renorm(psi):
    return psi / np.linalg.norm(psi)


def evolve_dense(state: DenseState, model: SpinLatticeModel, t: float) -> DenseState:
    """``exp(-i H t)|psi>``."""
    _check_model(state, model)
    if t == 0:
        return state
    if model.n_sites <= EIGH_MAX_SITES:
        w, v = _eigh(model)
        psi = v @ (np.exp(-1j * w * t) * (v.conj().T @ state.amplitudes))
    else:
        psi = spla.expm_multiply(-1j * t * _sparse_h(model), state.amplitudes)
    return state.with_amplitudes(_renorm(psi))


def dense_trajectory(state: DenseState, model: SpinLatticeModel, times) -> list[DenseState]:
    """States at each of the non-decreasing ``times``."""
    times = np.asarray(times, dtype=float)
    _check_model(state, model)
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be non-decreasing")
    if model.n_sites <= EIGH_MAX_SITES:
        w, v = _eigh(model)
        coeffs = v.conj().T @ state.amplitudes
        return [state.with_amplitudes(_renorm(v @ (np.exp(-1j * w * t) * coeffs))) for t in times]
    out, current, t_now = [], state, 0.0
    for t in times:
        current = evolve_dense(current, model, t - t_now) if t != t_now else current
        t_now = t
        out.append(current)
    return out


def energy(state: DenseState, model: SpinLatticeModel) -> float:
    psi = state.amplitudes
    return float(np.vdot(psi, _sparse_h(model) @ psi).real)


def _a_sites(state: DenseState, cut):
    if isinstance(cut, str) and cut in ("chains", "chain-split"):
        if state.geometry != LADDER:
            raise ValueError("chain split requires a ladder state")
        return tuple(range(0, state.n_sites, 2))
    return resolve_cut(state.n_sites, cut)


def _bipartite_matrix(state, a_sites):
    n = state.n_sites
    b_sites = tuple(s for s in range(n) if s not in set(a_sites))
    psi = state.amplitudes.reshape((2,) * n).transpose(a_sites + b_sites)
    return psi.reshape(1 << len(a_sites), 1 << len(b_sites)), b_sites


def schmidt_decomposition(state: DenseState, cut) -> SchmidtDecomposition:
    """``psi = sum_a sqrt(xi_a) |phi_a^A> |phi_a^B>`` across ``cut``."""
    a_sites = _a_sites(state, cut)
    m, b_sites = _bipartite_matrix(state, a_sites)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return SchmidtDecomposition(SchmidtSpectrum(s**2), u, vh, a_sites, b_sites)


def reduced_schmidt_spectrum(state: DenseState, cut) -> SchmidtSpectrum:
    a_sites = _a_sites(state, cut)
    m, _ = _bipartite_matrix(state, a_sites)
    return SchmidtSpectrum(np.linalg.svd(m, compute_uv=False) ** 2)


def q_matrix(decomp: SchmidtDecomposition, bond: CutBondInteraction) -> QMatrix:
    u, vh = decomp.left, decomp.right
    q = np.zeros((u.shape[1], u.shape[1]), dtype=complex)
    for b in bond.bonds:
        ha = u.conj().T @ apply_pauli_string(b.a_factor, u, decomp.a_sites)
        hb = vh.conj() @ apply_pauli_string(b.b_factor, vh.T, decomp.b_sites)
        q += b.coefficient * ha * hb
    return QMatrix(q)


def rate_from_decomposition(decomp: SchmidtDecomposition, bond: CutBondInteraction) -> float:
    """``sum_ab Theta_ab Q_ab`` for a given Schmidt decomposition."""
    q = q_matrix(decomp, bond).entries
    return float(np.sum(theta_matrix(decomp.spectrum) * q).real)


def purity_rate_formula(state: DenseState, bond: CutBondInteraction) -> float:
    """Instantaneous ``d/dt tr rho_A^2`` from the Schmidt data of ``state`` alone.

    Each Schmidt phase cancels between the A and B matrix elements, so the SVD
    bases are used as returned.
    """
    decomp = schmidt_decomposition(state, bond.a_sites)
    return rate_from_decomposition(decomp, bond)


def finite_difference_purity_rate(
    state: DenseState, model: SpinLatticeModel, cut, delta: float = 1e-5
) -> float:
    """Central difference of the purity across ``cut`` with step ``delta``."""
    plus = reduced_schmidt_spectrum(evolve_dense(state, model, delta), cut).purity
    minus = reduced_schmidt_spectrum(evolve_dense(state, model, -delta), cut).purity
    return (plus - minus) / (2 * delta)


def rate_bound_check(state: DenseState, bond: CutBondInteraction, mu: float) -> tuple[float, float]:
    """``(|rate|, 2 mu sqrt(tr rho^3 - (tr rho^2)^2))``."""
    rate = purity_rate_formula(state, bond)
    xi = reduced_schmidt_spectrum(state, bond.a_sites)
    return abs(rate), 2.0 * mu * math.sqrt(xi.cube_gap)
