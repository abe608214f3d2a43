"""Spectral constants of a cut interaction and analytic purity bounds.

The quantities here only need a :class:`~entgrowth.lattice.CutBondInteraction`
(for ``mu`` and ``chi``) or a Schmidt spectrum; nothing requires the state itself.

* ``mu`` is the eigenvalue spread of ``sum_q H_q^A (x) H_q^B`` and controls the
  quadratic short-time decay ``cos^4(mu t / 2)``.
* ``chi`` controls the exponential long-time bound ``exp(-chi t)``.
* ``t1`` is where the two are glued together with matching logarithmic slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapacityError, DomainError, InfeasibleError, ZeroBoundaryError
from .lattice import CutBondInteraction, pauli_sum_matrix

__all__ = [
    "SchmidtSpectrum",
    "BoundConstants",
    "ThetaFactorization",
    "MAX_BOUNDARY_QUBITS",
    "compute_mu",
    "compute_chi",
    "bound_constants",
    "short_time_lower_bound",
    "general_purity_envelope",
    "rank_refined_lower_bound",
    "long_time_lower_bound",
    "crossover_time",
    "combined_lower_bound",
    "entropy_floor",
    "theta_matrix",
    "theta_factorization",
    "cube_trace_hardy_bound",
    "cube_trace_rank_bound",
]

RANK_CUTOFF = 1e-24

MAX_BOUNDARY_QUBITS = 12
_NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Eigenvalues ``xi_alpha`` of a reduced density matrix, sorted non-increasing.

    Drift of the total weight below ``1e-10`` is renormalized away, anything
    larger raises ``ValueError``.
    """

    values: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.values, dtype=float).ravel()
        if xi.size == 0:
            raise ValueError("empty Schmidt spectrum")
        if np.any(~np.isfinite(xi)) or xi.min() < -_NORM_TOL:
            raise ValueError("Schmidt weights must be finite and non-negative")
        xi = np.clip(xi, 0.0, None)
        total = xi.sum()
        if abs(total - 1.0) > _NORM_TOL:
            raise ValueError(f"Schmidt weights sum to {total!r}, expected 1")
        xi = np.sort(xi / total)[::-1]
        xi.setflags(write=False)
        object.__setattr__(self, "values", xi)

    @classmethod
    def from_singular_values(cls, s, *, normalize: bool = False) -> SchmidtSpectrum:
        xi = np.abs(np.asarray(s)) ** 2
        if normalize:
            xi = xi / xi.sum()
        return cls(xi)

    def __len__(self):
        return self.values.size

    @property
    def rank(self) -> int:
        """Number of weights above ``RANK_CUTOFF`` (singular values above 1e-12)."""
        return int(np.count_nonzero(self.values > RANK_CUTOFF))

    @property
    def purity(self) -> float:
        return float(np.sum(self.values**2))

    @property
    def impurity(self) -> float:
        """``1 - purity`` evaluated without cancellation near a pure state."""
        xi = self.values
        before = np.concatenate(([0.0], np.cumsum(xi)[:-1]))
        after = np.concatenate((np.cumsum(xi[::-1])[::-1][1:], [0.0]))
        return float(np.sum(xi * (before + after)))

    @property
    def cube_trace(self) -> float:
        return float(np.sum(self.values**3))

    @property
    def cube_gap(self) -> float:
        """``tr rho^3 - (tr rho^2)^2`` via ``1/2 sum_ab xi_a xi_b (xi_a - xi_b)^2``."""
        xi = self.values
        return float(0.5 * np.sum(np.outer(xi, xi) * (xi[:, None] - xi[None, :]) ** 2))

    @property
    def entropy(self) -> float:
        xi = self.values[self.values > 0]
        return max(float(-np.sum(xi * np.log(xi))), 0.0)


@dataclass(frozen=True)
class BoundConstants:
    mu: float
    chi: float
    l_max: Optional[int] = None
    t1: float = 0.0

    @classmethod
    def from_constants(cls, mu: float, chi: float, l_max: Optional[int] = None) -> BoundConstants:
        t1 = crossover_time(mu, chi) if mu > 0 else 0.0
        return cls(float(mu), float(chi), l_max, t1)


@dataclass(frozen=True, eq=False)
class ThetaFactorization:
    a_vector: np.ndarray
    b_vector: np.ndarray
    eigenvalues: tuple[float, float]
    eigenvectors: tuple[np.ndarray, np.ndarray]


def _components(bonds):
    """Group bond indices into connected components of overlapping support."""
    parent = list(range(len(bonds)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner = {}
    for i, bond in enumerate(bonds):
        for s in bond.sites:
            if s in owner:
                parent[find(i)] = find(owner[s])
            else:
                owner[s] = i
    groups = {}
    for i in range(len(bonds)):
        groups.setdefault(find(i), []).append(bonds[i])
    return list(groups.values())


def compute_mu(bond: CutBondInteraction) -> float:
    """Eigenvalue spread ``lambda_max - lambda_min`` of the cut interaction.

    Groups of bonds with pairwise disjoint supports commute, so their extreme
    eigenvalues add up; each connected group is diagonalized densely on its own
    sites.
    """
    if not bond.bonds:
        raise ZeroBoundaryError("the cut interaction has no bonds")
    mu = 0.0
    for group in _components(bond.bonds):
        sites = sorted({s for b in group for s in b.sites})
        if len(sites) > MAX_BOUNDARY_QUBITS:
            raise CapacityError(
                f"connected boundary of {len(sites)} sites exceeds 2^{MAX_BOUNDARY_QUBITS}"
            )
        op = pauli_sum_matrix([b.as_term() for b in group], sites).toarray()
        w = np.linalg.eigvalsh(op)
        mu += w[-1] - w[0]
    return float(mu)


def _max_square_eig(term) -> float:
    m = term.local_matrix()
    return float(np.linalg.eigvalsh(m @ m.conj().T)[-1])


def compute_chi(bond: CutBondInteraction) -> float:
    """Long-time rate ``sqrt(2) * sum_q sqrt(lmax[(H_q^A)^2] lmax[(H_q^B)^2])``."""
    total = 0.0
    for b in bond.bonds:
        total += abs(b.coefficient) * math.sqrt(_max_square_eig(b.a_factor) * _max_square_eig(b.b_factor))
    return math.sqrt(2.0) * total


def bound_constants(bond: CutBondInteraction, l_max: Optional[int] = None) -> BoundConstants:
    return BoundConstants.from_constants(compute_mu(bond), compute_chi(bond), l_max)


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    return t


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def short_time_lower_bound(t, mu: float):
    """``cos^4(mu t / 2)`` up to ``mu t = pi``, zero afterwards."""
    if mu < 0:
        raise DomainError("mu must be non-negative")
    x = np.minimum(mu * _check_time(t), math.pi)
    return _out(np.cos(x / 2) ** 4)


def general_purity_envelope(t, mu: float, purity0: float):
    """Lower and upper purity envelopes for a start at purity ``purity0``."""
    if not 0.0 < purity0 <= 1.0:
        raise DomainError(f"initial purity must lie in (0, 1], got {purity0}")
    if mu < 0:
        raise DomainError("mu must be non-negative")
    t = _check_time(t)
    phase0 = math.asin(purity0**0.25)
    lower = np.sin(np.maximum(phase0 - mu * t / 2, 0.0)) ** 4
    upper = np.sin(np.minimum(phase0 + mu * t / 2, math.pi / 2)) ** 4
    return _out(lower), _out(upper)


def rank_refined_lower_bound(t, mu: float, l_max: int):
    """``cos^4(x) + sin^4(x) / (l_max - 1)`` with ``x = mu t / 2``.

    The curve reaches its minimum ``1 / l_max`` at ``tan^2 x = l_max - 1`` and is
    held there afterwards.
    """
    if l_max < 2:
        raise DomainError(f"l_max must be at least 2, got {l_max}")
    if mu < 0:
        raise DomainError("mu must be non-negative")
    x = np.minimum(mu * _check_time(t) / 2, math.atan(math.sqrt(l_max - 1)))
    return _out(np.cos(x) ** 4 + np.sin(x) ** 4 / (l_max - 1))


def long_time_lower_bound(t, chi: float):
    if chi < 0:
        raise DomainError("chi must be non-negative")
    return _out(np.exp(-chi * _check_time(t)))


def crossover_time(mu: float, chi: float) -> float:
    """Time where ``cos^4(mu t/2)`` has logarithmic slope ``-chi``."""
    if mu <= 0:
        raise DomainError(f"mu must be positive, got {mu}")
    if chi < 0:
        raise DomainError("chi must be non-negative")
    return 2.0 / mu * math.atan(chi / (2.0 * mu))


def combined_lower_bound(t, constants: BoundConstants):
    """Quadratic bound until ``t1``, then exponential decay at rate ``chi``."""
    t = _check_time(t)
    mu, chi = constants.mu, constants.chi
    if mu <= 0:
        return long_time_lower_bound(t, chi)
    t1 = crossover_time(mu, chi)
    anchor = math.cos(mu * t1 / 2) ** 4
    early = np.cos(np.minimum(mu * t, math.pi) / 2) ** 4
    late = anchor * np.exp(-chi * (t - t1))
    return _out(np.where(t <= t1, early, late))


def entropy_floor(purity):
    """``-ln(purity)``, a lower bound on the von Neumann entropy."""
    p = np.asarray(purity, dtype=float)
    if np.any(~(p > 0.0)) or np.any(p > 1.0 + 1e-12):
        raise DomainError(f"purity must lie in (0, 1], got {purity}")
    return _out(np.maximum(-np.log(p), 0.0) + 0.0)  # no signed zero


def theta_matrix(xi: SchmidtSpectrum) -> np.ndarray:
    """``Theta_ab = -2i sqrt(xi_a xi_b) (xi_a - xi_b)`` as a dense matrix."""
    v = xi.values
    root = np.sqrt(v)
    return -2j * np.outer(root, root) * (v[:, None] - v[None, :])


def theta_factorization(xi: SchmidtSpectrum) -> ThetaFactorization:
    """Rank-2 structure ``Theta = -2i|a><b| + 2i|b><a|`` and its nonzero eigenpairs."""
    v = xi.values
    a = v**1.5
    b = v**0.5
    lam = 2.0 * math.sqrt(xi.cube_gap)
    # eigenvectors live in span{a, b}; orthonormalize and solve the 2x2 problem
    e1 = b / np.linalg.norm(b)
    r = a - (e1 @ a) * e1
    rn = np.linalg.norm(r)
    if rn <= 1e-14 * max(np.linalg.norm(a), 1e-300):
        z = e1.astype(complex)
        return ThetaFactorization(a, b, (0.0, -0.0), (z, z))
    e2 = r / rn
    basis = np.stack([e1, e2], axis=1).astype(complex)
    small = basis.conj().T @ (-2j * np.outer(a, b) + 2j * np.outer(b, a)) @ basis
    w, u = np.linalg.eigh(small)
    q_plus = basis @ u[:, 1]
    q_minus = basis @ u[:, 0]
    return ThetaFactorization(a, b, (lam, -lam), (q_plus, q_minus))


def cube_trace_hardy_bound(xi: SchmidtSpectrum) -> tuple[float, float]:
    """``(tr rho^3, (tr rho^2)^{3/2})``; the first never exceeds the second."""
    return xi.cube_trace, xi.purity**1.5


def cube_trace_rank_bound(purity: float, l_max: int) -> float:
    """Largest ``tr rho^3`` over rank-``l_max`` spectra with the given purity.

    Attained by one large weight and ``l_max - 1`` equal small ones.
    """
    if l_max < 2:
        raise DomainError(f"l_max must be at least 2, got {l_max}")
    if purity > 1.0 + 1e-12:
        raise DomainError(f"purity must not exceed 1, got {purity}")
    slack = l_max * purity - 1.0
    if slack < -1e-12:
        raise InfeasibleError(f"purity {purity} is below the rank-{l_max} minimum {1 / l_max}")
    root = math.sqrt((l_max - 1) * max(slack, 0.0))
    return ((1 + root) ** 3 + (l_max - 1 - root) ** 3 / (l_max - 1) ** 2) / l_max**3
