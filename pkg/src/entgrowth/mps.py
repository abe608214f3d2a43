"""Matrix product states and TEBD real-time evolution.

States are kept in right-canonical form: every site tensor ``B[l, s, r]`` is a
right isometry and ``weights[i]`` holds the Schmidt values on the bond to the
left of site ``i`` (``weights[0]`` and ``weights[n]`` are the trivial edge bonds).
Two-site gates are applied with the update

    theta = B_i B_{i+1}  ->  U theta;   S_i U theta = X Y Z
    B_{i+1} <- Z,   S_{i+1} <- Y,   B_i <- (U theta) Z^dagger

which never divides by Schmidt values.  Directions of ``B_i`` carrying tiny
weight on the left bond are not pinned down by the SVD of ``S_i U theta``, so
``B_i`` is re-orthonormalized with a phase-fixed QR step afterwards.

States built from basis products carry ``charges``: for every bond, the number
of up spins to its left in each Schmidt state.  While all gates conserve the
up-spin count (XX, XXZ), the two-site matrix is block diagonal in that label and
is decomposed block by block; any other gate drops the labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .bounds import SchmidtSpectrum
from .errors import InvalidCutError, InvalidSizeError, UnsupportedModelError
from .lattice import SpinLatticeModel

__all__ = [
    "MatrixProductState",
    "TruncationPolicy",
    "TrotterScheme",
    "Sample",
    "EvolutionRecord",
    "mps_from_basis_product",
    "mps_from_dense",
    "bond_hamiltonians",
    "trotter_layers",
    "apply_two_site_gate",
    "conserves_up_count",
    "trotter_sweep",
    "evolve",
    "evolve_and_sample",
    "cut_purity",
    "cut_entropy",
]

_UP = np.array([1.0, 0.0], dtype=complex)
_DOWN = np.array([0.0, 1.0], dtype=complex)
_N_UP = np.array([1, 0])  # up-spin count of the basis states (index 0 is up)
_PAIR_CHARGE = (_N_UP[:, None] + _N_UP[None, :]).ravel()


@dataclass(frozen=True)
class TruncationPolicy:
    max_rank: int = 64
    discard_tolerance: float = 1e-12

    def __post_init__(self):
        if self.max_rank < 1:
            raise ValueError(f"max_rank must be at least 1, got {self.max_rank}")
        if self.discard_tolerance < 0:
            raise ValueError("discard_tolerance must be non-negative")


@dataclass(frozen=True)
class TrotterScheme:
    order: int = 2
    dt: float = 0.01

    def __post_init__(self):
        if self.order not in (2, 4):
            raise ValueError(f"Trotter order must be 2 or 4, got {self.order}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")


class MatrixProductState:
    """Right-canonical MPS with explicit Schmidt values on every bond."""

    def __init__(self, tensors, weights, charges=None):
        self.tensors = [np.asarray(b, dtype=complex) for b in tensors]
        self.weights = [np.asarray(w, dtype=float) for w in weights]
        self.charges = None if charges is None else [np.asarray(c, dtype=int) for c in charges]
        n = len(self.tensors)
        if n == 0:
            raise InvalidSizeError("an MPS needs at least one site")
        if len(self.weights) != n + 1:
            raise ValueError(f"expected {n + 1} bond weight vectors, got {len(self.weights)}")
        if self.tensors[0].shape[0] != 1 or self.tensors[-1].shape[2] != 1:
            raise ValueError("edge bonds must have dimension 1")
        for i, b in enumerate(self.tensors):
            if b.ndim != 3 or b.shape[1] != 2:
                raise ValueError(f"site tensor {i} has shape {b.shape}, expected (l, 2, r)")
            if b.shape[0] != self.weights[i].size:
                raise ValueError(f"bond {i} dimension mismatch")
            if i + 1 < n and b.shape[2] != self.tensors[i + 1].shape[0]:
                raise ValueError(f"tensors {i} and {i + 1} do not contract")
        if self.charges is not None and [c.size for c in self.charges] != [w.size for w in self.weights]:
            raise ValueError("charge labels must match the bond dimensions")

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    @property
    def bond_dimensions(self) -> list[int]:
        return [w.size for w in self.weights[1:-1]]

    def copy(self) -> MatrixProductState:
        # arrays are replaced, never mutated, so a shallow copy is enough
        charges = None if self.charges is None else list(self.charges)
        return MatrixProductState(list(self.tensors), list(self.weights), charges)

    def to_dense(self) -> np.ndarray:
        psi = self.tensors[0]
        for b in self.tensors[1:]:
            psi = np.tensordot(psi, b, axes=(psi.ndim - 1, 0))
        return psi.reshape(-1)

    def schmidt_spectrum(self, cut: int) -> SchmidtSpectrum:
        _check_cut(self, cut)
        return SchmidtSpectrum.from_singular_values(self.weights[cut], normalize=True)

    def canonical_residual(self) -> float:
        """Largest deviation of any site tensor from a right isometry."""
        worst = 0.0
        for b in self.tensors:
            m = b.reshape(b.shape[0], -1)
            worst = max(worst, float(np.abs(m @ m.conj().T - np.eye(b.shape[0])).max()))
        return worst

    def norm_defects(self) -> list[float]:
        return [abs(float(np.sum(w**2)) - 1.0) for w in self.weights]


class Sample(NamedTuple):
    t: float
    purity: float
    entropy: float
    schmidt_rank: int
    trunc_weight: float


@dataclass
class EvolutionRecord:
    samples: list[Sample] = field(default_factory=list)

    def append(self, sample: Sample):
        if self.samples and not sample.t > self.samples[-1].t:
            raise ValueError("sample times must be strictly increasing")
        self.samples.append(sample)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.samples])

    @property
    def times(self) -> np.ndarray:
        return self.column("t")

    @property
    def purity(self) -> np.ndarray:
        return self.column("purity")

    @property
    def entropy(self) -> np.ndarray:
        return self.column("entropy")


def mps_from_basis_product(pattern) -> MatrixProductState:
    """Rank-1 MPS for a pattern of ``up``/``down`` (or ``u``/``d``) labels."""
    pattern = list(pattern)
    if not pattern:
        raise InvalidSizeError("empty basis pattern")
    tensors, charges = [], [np.zeros(1, dtype=int)]
    for label in pattern:
        key = str(label).lower()
        if key in ("u", "up"):
            tensors.append(_UP.reshape(1, 2, 1))
            charges.append(charges[-1] + 1)
        elif key in ("d", "down"):
            tensors.append(_DOWN.reshape(1, 2, 1))
            charges.append(charges[-1])
        else:
            raise ValueError(f"unknown spin label {label!r}")
    return MatrixProductState(tensors, [np.ones(1)] * (len(pattern) + 1), charges)


def mps_from_dense(psi: np.ndarray, max_rank: int | None = None) -> MatrixProductState:
    """Exact (or rank-capped) right-canonical MPS of a dense ``2^n`` vector."""
    psi = np.asarray(psi, dtype=complex)
    n = int(round(math.log2(psi.size)))
    if 1 << n != psi.size:
        raise ValueError("vector length is not a power of two")
    psi = psi / np.linalg.norm(psi)
    tensors = [None] * n
    weights = [None] * (n + 1)
    weights[0] = weights[n] = np.ones(1)
    rest = psi.reshape(-1, 1)
    for j in range(n - 1, 0, -1):
        r = rest.shape[1]
        m = rest.reshape(-1, 2 * r)
        u, s, vh = np.linalg.svd(m, full_matrices=False)
        keep = max(1, int(np.count_nonzero(s > 1e-14)))
        if max_rank is not None:
            keep = min(keep, max_rank)
        s = s[:keep] / np.linalg.norm(s[:keep])
        tensors[j] = vh[:keep].reshape(keep, 2, r)
        weights[j] = s
        rest = u[:, :keep] * s
    tensors[0] = rest.reshape(1, 2, -1) / np.linalg.norm(rest)
    return MatrixProductState(tensors, weights)


def _check_cut(state: MatrixProductState, cut: int):
    if not isinstance(cut, (int, np.integer)) or not 0 < cut < state.n_sites:
        raise InvalidCutError(f"MPS cut must be an internal bond 1..{state.n_sites - 1}, got {cut!r}")


def cut_purity(state: MatrixProductState, cut: int) -> float:
    """``tr rho_A^2 = sum_a w_a^4`` for the bond weights at ``cut``."""
    return state.schmidt_spectrum(cut).purity


def cut_entropy(state: MatrixProductState, cut: int) -> float:
    return state.schmidt_spectrum(cut).entropy


def bond_hamiltonians(model: SpinLatticeModel) -> list[np.ndarray]:
    """4x4 Hamiltonian of each bond ``(i, i+1)``; one-site terms go to the bond on their right
    (or left, for the last site)."""
    n = model.n_sites
    if n < 2:
        raise InvalidSizeError("TEBD needs at least two sites")
    h = [np.zeros((4, 4), dtype=complex) for _ in range(n - 1)]
    eye = np.eye(2, dtype=complex)
    for term in model.terms:
        sites = term.sites
        if len(sites) == 1:
            s = sites[0]
            bond = s if s < n - 1 else s - 1
            local = term.local_matrix()
            h[bond] += np.kron(local, eye) if bond == s else np.kron(eye, local)
        elif len(sites) == 2 and sites[1] == sites[0] + 1:
            h[sites[0]] += term.local_matrix()
        else:
            raise UnsupportedModelError(
                f"term on sites {sites} is not nearest-neighbour in the MPS ordering"
            )
    return h


def _strang(fraction):
    return [(0, fraction / 2), (1, fraction), (0, fraction / 2)]


def trotter_layers(order: int, n_steps: int = 1) -> list[tuple[int, float]]:
    """Merged ``(parity, fraction of dt)`` layers for ``n_steps`` consecutive steps."""
    if order == 2:
        step = _strang(1.0)
    elif order == 4:
        a = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
        b = 1.0 - 2.0 * a
        step = _strang(a) + _strang(b) + _strang(a)
    else:
        raise ValueError(f"unsupported Trotter order {order}")
    merged: list[tuple[int, float]] = []
    for parity, frac in step * n_steps:
        if merged and merged[-1][0] == parity:
            merged[-1] = (parity, merged[-1][1] + frac)
        else:
            merged.append((parity, frac))
    return merged


def _svd(m):
    try:
        return np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError:
        return scipy.linalg.svd(m, full_matrices=False, lapack_driver="gesvd")


def conserves_up_count(gate: np.ndarray, atol: float = 1e-14) -> bool:
    """True when a two-site operator has no entries between different up-spin counts."""
    return bool(np.all(np.abs(gate[_PAIR_CHARGE[:, None] != _PAIR_CHARGE[None, :]]) <= atol))


def _block_svd(m, left_q, right_q):
    """SVD of a matrix that is block diagonal in the middle-bond charge, sorted globally."""
    row_q = (left_q[:, None] + _N_UP[None, :]).ravel()
    col_q = (right_q[None, :] - _N_UP[:, None]).ravel()
    s_parts, vh_parts, q_parts = [], [], []
    for q in np.intersect1d(row_q, col_q):
        rows, cols = np.flatnonzero(row_q == q), np.flatnonzero(col_q == q)
        _, s, vh = _svd(m[np.ix_(rows, cols)])
        full = np.zeros((s.size, m.shape[1]), dtype=complex)
        full[:, cols] = vh
        s_parts.append(s)
        vh_parts.append(full)
        q_parts.append(np.full(s.size, q))
    s = np.concatenate(s_parts)
    order = np.argsort(-s, kind="stable")
    return s[order], np.concatenate(vh_parts)[order], np.concatenate(q_parts)[order]


def _qr_rows(m):
    rows, cols = m.shape
    if rows > cols:  # no right isometry of this shape exists
        return m
    q, r = np.linalg.qr(m.T)
    d = np.diag(r)
    absd = np.abs(d)
    phase = np.where(absd == 0, 1.0, d / np.where(absd == 0, 1.0, absd))
    return (q * phase).T


def _orthonormalize_rows(m, row_q=None, col_q=None):
    if row_q is None:
        return _qr_rows(m)
    out = np.zeros_like(m)
    for q in np.unique(row_q):
        rows, cols = np.flatnonzero(row_q == q), np.flatnonzero(col_q == q)
        if cols.size:
            out[np.ix_(rows, cols)] = _qr_rows(m[np.ix_(rows, cols)])
    return out


def apply_two_site_gate(
    state: MatrixProductState, i: int, gate: np.ndarray, policy: TruncationPolicy
) -> float:
    """Apply a 4x4 ``gate`` to sites ``(i, i+1)`` in place; returns the discarded weight."""
    b1, b2 = state.tensors[i], state.tensors[i + 1]
    left, right = b1.shape[0], b2.shape[2]
    theta = np.tensordot(b1, b2, axes=(2, 0))  # l, s1, s2, r
    theta = np.tensordot(theta, gate.reshape(2, 2, 2, 2), axes=([1, 2], [2, 3]))
    theta = theta.transpose(0, 2, 3, 1).reshape(left * 2, 2 * right)
    m = np.repeat(state.weights[i], 2)[:, None] * theta
    if state.charges is not None and not conserves_up_count(gate):
        state.charges = None
    if state.charges is None:
        _, s, vh = _svd(m)
    else:
        s, vh, mid_q = _block_svd(m, state.charges[i], state.charges[i + 2])
    total = float(np.sum(s**2))
    keep = int(np.count_nonzero(s > policy.discard_tolerance))
    keep = max(1, min(keep, policy.max_rank))
    kept = s[:keep]
    norm = math.sqrt(float(np.sum(kept**2)))
    vh = vh[:keep]
    b1 = ((theta @ vh.conj().T) / norm).reshape(left, 2 * keep)
    if state.charges is None:
        b1 = _orthonormalize_rows(b1)
    else:
        mid_q = mid_q[:keep]
        b1 = _orthonormalize_rows(b1, state.charges[i], (mid_q[None, :] - _N_UP[:, None]).ravel())
        state.charges[i + 1] = mid_q
    state.tensors[i] = b1.reshape(left, 2, keep)
    state.tensors[i + 1] = vh.reshape(keep, 2, right)
    state.weights[i + 1] = kept / norm
    return max(total - norm**2, 0.0) / total


class _Propagator:
    """Gate cache for one model and time step."""

    def __init__(self, model: SpinLatticeModel, dt: float):
        self.dt = dt
        self.n_sites = model.n_sites
        self._eig = [np.linalg.eigh(h) for h in bond_hamiltonians(model)]
        self._gates: dict[tuple[int, float], np.ndarray] = {}

    def gate(self, bond: int, fraction: float) -> np.ndarray:
        key = (bond, round(fraction, 14))
        g = self._gates.get(key)
        if g is None:
            w, v = self._eig[bond]
            g = (v * np.exp(-1j * w * fraction * self.dt)) @ v.conj().T
            self._gates[key] = g
        return g

    def run(self, state: MatrixProductState, layers, policy: TruncationPolicy) -> float:
        discarded = 0.0
        for parity, fraction in layers:
            for bond in range(parity, self.n_sites - 1, 2):
                discarded += apply_two_site_gate(state, bond, self.gate(bond, fraction), policy)
        return discarded


def _check_model(state, model):
    if model.n_sites != state.n_sites:
        raise ValueError(f"model has {model.n_sites} sites, state has {state.n_sites}")


def trotter_sweep(
    state: MatrixProductState,
    model: SpinLatticeModel,
    scheme: TrotterScheme,
    policy: TruncationPolicy,
) -> tuple[MatrixProductState, float]:
    """One Trotter step of length ``scheme.dt``; returns the new state and discarded weight."""
    return evolve(state, model, 1, scheme, policy)


def evolve(state, model, n_steps: int, scheme: TrotterScheme, policy: TruncationPolicy,
           _propagator: _Propagator | None = None):
    """``n_steps`` Trotter steps with adjacent half-layers merged."""
    _check_model(state, model)
    prop = _propagator or _Propagator(model, scheme.dt)
    out = state.copy()
    if n_steps == 0:
        return out, 0.0
    return out, prop.run(out, trotter_layers(scheme.order, n_steps), policy)


def _sample(state, t, cut, trunc):
    xi = state.schmidt_spectrum(cut)
    return Sample(float(t), xi.purity, xi.entropy, xi.rank, trunc)


def evolve_and_sample(
    state: MatrixProductState,
    model: SpinLatticeModel,
    t_max: float,
    sample_interval: float,
    scheme: TrotterScheme,
    policy: TruncationPolicy,
    cut: int,
    *,
    return_state: bool = False,
):
    """Evolve to ``t_max`` and record purity, entropy and rank at ``cut`` every
    ``sample_interval``.

    Samples are taken only between full Trotter steps.
    """
    _check_model(state, model)
    _check_cut(state, cut)
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    steps_per_sample = sample_interval / scheme.dt
    k = int(round(steps_per_sample))
    if k < 1 or abs(steps_per_sample - k) > 1e-9 * max(1.0, steps_per_sample):
        raise ValueError("sample_interval must be a positive integer multiple of dt")
    n_samples = int(math.floor(t_max / sample_interval + 1e-9))
    prop = _Propagator(model, scheme.dt)
    layers = trotter_layers(scheme.order, k)
    current = state.copy()
    record = EvolutionRecord()
    trunc = 0.0
    record.append(_sample(current, 0.0, cut, trunc))
    for j in range(1, n_samples + 1):
        trunc += prop.run(current, layers, policy)
        record.append(_sample(current, j * k * scheme.dt, cut, trunc))
    if return_state:
        return record, current
    return record
