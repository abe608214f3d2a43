"""Spin-1/2 lattice Hamiltonians as weighted Pauli strings.

A model is a flat list of :class:`PauliTerm` objects on ``n_sites`` qubits. Given a
bipartition of the sites into ``A`` and ``B``, :func:`extract_cut_interaction`
splits the term list into the parts acting inside ``A``, inside ``B`` and the
cut-crossing bonds ``sum_q c_q H_q^A (x) H_q^B``.

Basis convention: computational basis state ``0`` is spin up (``sigma^z = +1``)
and site ``0`` is the most significant tensor factor, so a dense vector reshaped
to ``(2,) * n`` has site ``j`` on axis ``j``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Union

import numpy as np
import scipy.sparse as sp

from .errors import InvalidCutError, InvalidSizeError, ZeroBoundaryError

__all__ = [
    "AXES",
    "PauliTerm",
    "SpinLatticeModel",
    "BondTerm",
    "CutBondInteraction",
    "Cut",
    "build_xx_chain",
    "build_xxz_chain",
    "build_coupled_ising_chains",
    "resolve_cut",
    "extract_cut_interaction",
    "boundary_site_count",
    "pauli_sum_matrix",
    "apply_pauli_string",
]

AXES = ("x", "y", "z")

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

CHAIN = "chain"
LADDER = "two-chain-ladder"

#: A cut is a bond position ``c`` (A = sites < c), ``"chains"`` for the
#: ladder chain-vs-chain split, or an explicit collection of A-sites.
Cut = Union[int, str, Iterable[int]]


@dataclass(frozen=True)
class PauliTerm:
    """``coefficient * prod_k sigma^{axis_k}_{site_k}``.

    ``factors`` is a tuple of ``(site, axis)`` pairs with strictly increasing sites.
    """

    coefficient: float
    factors: tuple[tuple[int, str], ...]

    def __post_init__(self):
        factors = tuple((int(s), str(a)) for s, a in self.factors)
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "coefficient", float(self.coefficient))
        if not factors:
            raise ValueError("a Pauli term needs at least one factor")
        if not math.isfinite(self.coefficient) or self.coefficient == 0.0:
            raise ValueError(f"coefficient must be finite and nonzero, got {self.coefficient}")
        sites = [s for s, _ in factors]
        if sites[0] < 0 or any(b <= a for a, b in zip(sites, sites[1:])):
            raise ValueError(f"site indices must be non-negative and strictly increasing: {sites}")
        for _, axis in factors:
            if axis not in AXES:
                raise ValueError(f"unknown Pauli axis {axis!r}")

    @classmethod
    def of(cls, coefficient: float, *factors: tuple[int, str]) -> PauliTerm:
        return cls(coefficient, tuple(sorted(factors)))

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.factors)

    @property
    def axes(self) -> tuple[str, ...]:
        return tuple(a for _, a in self.factors)

    def scaled(self, factor: float) -> PauliTerm:
        return PauliTerm(self.coefficient * factor, self.factors)

    def local_matrix(self) -> np.ndarray:
        """Dense matrix on the term's own support, sites in increasing order."""
        out = np.array([[self.coefficient]], dtype=complex)
        for _, axis in self.factors:
            out = np.kron(out, PAULI[axis])
        return out


@dataclass(frozen=True)
class SpinLatticeModel:
    n_sites: int
    geometry: str
    terms: tuple[PauliTerm, ...]
    delta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.n_sites < 1:
            raise InvalidSizeError(f"n_sites must be positive, got {self.n_sites}")
        if self.geometry not in (CHAIN, LADDER):
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if self.geometry == LADDER and self.n_sites % 2:
            raise InvalidSizeError("a two-chain ladder needs an even number of sites")
        for term in self.terms:
            if term.sites[-1] >= self.n_sites:
                raise ValueError(f"term {term} touches a site outside the lattice")

    @property
    def n_rungs(self) -> int:
        if self.geometry != LADDER:
            raise AttributeError("n_rungs is only defined for ladders")
        return self.n_sites // 2

    def hamiltonian(self) -> sp.csr_matrix:
        """Sparse ``2^n x 2^n`` matrix of the full Hamiltonian."""
        return pauli_sum_matrix(self.terms, range(self.n_sites))

    def dense_hamiltonian(self) -> np.ndarray:
        return self.hamiltonian().toarray()


@dataclass(frozen=True)
class BondTerm:
    """One cut-crossing Pauli string, ``coefficient * a_factor (x) b_factor``."""

    coefficient: float
    a_factor: PauliTerm
    b_factor: PauliTerm

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(sorted(self.a_factor.sites + self.b_factor.sites))

    def as_term(self) -> PauliTerm:
        return PauliTerm(
            self.coefficient * self.a_factor.coefficient * self.b_factor.coefficient,
            tuple(sorted(self.a_factor.factors + self.b_factor.factors)),
        )


@dataclass(frozen=True)
class CutBondInteraction:
    bonds: tuple[BondTerm, ...]
    a_sites: tuple[int, ...]
    b_sites: tuple[int, ...]
    intra_a: tuple[PauliTerm, ...] = field(default=())
    intra_b: tuple[PauliTerm, ...] = field(default=())

    @property
    def boundary_sites(self) -> frozenset[int]:
        return frozenset(s for bond in self.bonds for s in bond.sites)

    def reassemble(self) -> list[PauliTerm]:
        """Intra-A, intra-B and bond terms merged back into one canonical list."""
        terms = list(self.intra_a) + list(self.intra_b) + [b.as_term() for b in self.bonds]
        return canonical_terms(terms)


def canonical_terms(terms: Iterable[PauliTerm]) -> list[PauliTerm]:
    return sorted(terms, key=lambda t: (t.factors, t.coefficient))


def build_xx_chain(n: int) -> SpinLatticeModel:
    """Open XX chain ``-1/2 sum_j (X_j X_{j+1} + Y_j Y_{j+1})``."""
    return build_xxz_chain(n, 0.0)


def build_xxz_chain(n: int, delta: float) -> SpinLatticeModel:
    """Open XXZ chain ``-1/2 sum_j (X X + Y Y + delta Z Z)``."""
    if n < 1:
        raise InvalidSizeError(f"chain length must be at least 1, got {n}")
    zz = -0.5 * float(delta)
    terms = []
    for j in range(n - 1):
        terms.append(PauliTerm(-0.5, ((j, "x"), (j + 1, "x"))))
        terms.append(PauliTerm(-0.5, ((j, "y"), (j + 1, "y"))))
        if zz != 0.0:  # also drops a subnormal delta that underflows
            terms.append(PauliTerm(zz, ((j, "z"), (j + 1, "z"))))
    return SpinLatticeModel(n, CHAIN, tuple(terms), delta=float(delta))


def build_coupled_ising_chains(n_rungs: int, intra_coupling: float = 0.0) -> SpinLatticeModel:
    """Two Ising chains coupled rung by rung through ``sigma^x_j tau^x_j``.

    Sites are interleaved: ``2j`` is rung ``j`` of chain A, ``2j + 1`` of chain B.
    A nonzero ``intra_coupling`` adds ``x-x`` nearest-neighbour terms inside each chain.
    """
    if n_rungs < 1:
        raise InvalidSizeError(f"n_rungs must be at least 1, got {n_rungs}")
    terms = [PauliTerm(1.0, ((2 * j, "x"), (2 * j + 1, "x"))) for j in range(n_rungs)]
    if intra_coupling != 0.0:
        for chain in (0, 1):
            for j in range(n_rungs - 1):
                s = 2 * j + chain
                terms.append(PauliTerm(intra_coupling, ((s, "x"), (s + 2, "x"))))
    return SpinLatticeModel(2 * n_rungs, LADDER, tuple(terms))


def resolve_cut(model: SpinLatticeModel | int, cut: Cut) -> tuple[int, ...]:
    """Return the sorted A-sites of ``cut``; raises :class:`InvalidCutError`."""
    if isinstance(model, SpinLatticeModel):
        n, geometry = model.n_sites, model.geometry
    else:
        n, geometry = int(model), CHAIN
    if isinstance(cut, str):
        if cut not in ("chains", "chain-split"):
            try:
                cut = int(cut)
            except ValueError:
                raise InvalidCutError(f"unknown cut {cut!r}") from None
        else:
            if geometry != LADDER:
                raise InvalidCutError("the chain split is only defined for ladders")
            return tuple(range(0, n, 2))
    if isinstance(cut, (int, np.integer)):
        if not 0 < cut < n:
            raise InvalidCutError(f"bond cut must lie in 1..{n - 1}, got {cut}")
        return tuple(range(int(cut)))
    a_sites = tuple(sorted(set(int(s) for s in cut)))
    if not a_sites or len(a_sites) == n or a_sites[0] < 0 or a_sites[-1] >= n:
        raise InvalidCutError(f"site set {a_sites} is not a proper subset of the lattice")
    return a_sites


def extract_cut_interaction(model: SpinLatticeModel, cut: Cut) -> CutBondInteraction:
    """Split ``model`` at ``cut`` into intra-A terms, intra-B terms and crossing bonds."""
    a_sites = resolve_cut(model, cut)
    a_set = set(a_sites)
    b_sites = tuple(s for s in range(model.n_sites) if s not in a_set)
    bonds, intra_a, intra_b = [], [], []
    for term in model.terms:
        a_part = tuple(f for f in term.factors if f[0] in a_set)
        b_part = tuple(f for f in term.factors if f[0] not in a_set)
        if not b_part:
            intra_a.append(term)
        elif not a_part:
            intra_b.append(term)
        else:
            bonds.append(BondTerm(term.coefficient, PauliTerm(1.0, a_part), PauliTerm(1.0, b_part)))
    return CutBondInteraction(tuple(bonds), a_sites, b_sites, tuple(intra_a), tuple(intra_b))


def boundary_site_count(cut_interaction: CutBondInteraction) -> tuple[int, int]:
    """Number of boundary sites and number of bonds of a cut interaction."""
    if not cut_interaction.bonds:
        raise ZeroBoundaryError("the cut interaction has no bonds")
    return len(cut_interaction.boundary_sites), len(cut_interaction.bonds)


def _term_action(term: PauliTerm, positions: Sequence[int], n: int, idx: np.ndarray):
    """Flipped indices and amplitudes of ``term |idx>`` on an ``n``-qubit register."""
    mask = 0
    amp = np.full(idx.shape, term.coefficient, dtype=complex)
    for pos, axis in zip(positions, term.axes):
        shift = n - 1 - pos
        if axis != "x":
            sign = 1 - 2 * ((idx >> shift) & 1)
            amp *= sign if axis == "z" else 1j * sign
        if axis != "z":
            mask |= 1 << shift
    return idx ^ mask, amp


def pauli_sum_matrix(terms: Iterable[PauliTerm], sites: Iterable[int]) -> sp.csr_matrix:
    """Sparse matrix of ``sum(terms)`` on the register ``sites`` (first = most significant)."""
    order = {s: k for k, s in enumerate(sites)}
    n = len(order)
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    rows, cols, data = [], [], []
    for term in terms:
        try:
            positions = [order[s] for s in term.sites]
        except KeyError as exc:
            raise ValueError(f"term {term} touches site {exc.args[0]} outside the register") from None
        flipped, amp = _term_action(term, positions, n, idx)
        rows.append(flipped)
        cols.append(idx)
        data.append(amp)
    if not data:
        return sp.csr_matrix((dim, dim), dtype=complex)
    return sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
    ).tocsr()


def apply_pauli_string(term: PauliTerm, vectors: np.ndarray, sites: Sequence[int]) -> np.ndarray:
    """Apply ``term`` to the columns of ``vectors`` living on register ``sites``."""
    order = {s: k for k, s in enumerate(sites)}
    n = len(order)
    idx = np.arange(1 << n, dtype=np.int64)
    flipped, amp = _term_action(term, [order[s] for s in term.sites], n, idx)
    out = np.empty_like(vectors, dtype=complex)
    out[flipped] = amp.reshape((-1,) + (1,) * (vectors.ndim - 1)) * vectors
    return out
