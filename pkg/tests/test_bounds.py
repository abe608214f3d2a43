import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from entgrowth.bounds import (
    BoundConstants,
    SchmidtSpectrum,
    combined_lower_bound,
    compute_chi,
    compute_mu,
    crossover_time,
    cube_trace_hardy_bound,
    cube_trace_rank_bound,
    entropy_floor,
    general_purity_envelope,
    long_time_lower_bound,
    rank_refined_lower_bound,
    short_time_lower_bound,
    theta_factorization,
    theta_matrix,
)
from entgrowth.closed_forms import ghz_ising_purity
from entgrowth.errors import CapacityError, DomainError, InfeasibleError, ZeroBoundaryError
from entgrowth.lattice import (
    BondTerm,
    CutBondInteraction,
    PauliTerm,
    build_coupled_ising_chains,
    build_xx_chain,
    build_xxz_chain,
    extract_cut_interaction,
)

SQRT2 = math.sqrt(2.0)


def dirichlet_spectra(rng, count, max_len=64):
    for _ in range(count):
        length = int(rng.integers(1, max_len + 1))
        alpha = rng.choice([0.05, 0.3, 1.0, 5.0])
        yield SchmidtSpectrum(rng.dirichlet(np.full(length, alpha)))


# --- spectral constants ---------------------------------------------------


def test_xx_constants():
    ci = extract_cut_interaction(build_xx_chain(6), 3)
    assert compute_mu(ci) == pytest.approx(2.0, abs=1e-12)
    assert compute_chi(ci) == pytest.approx(SQRT2, abs=1e-12)


def test_xxz_constants():
    ci = extract_cut_interaction(build_xxz_chain(6, 0.5), 3)
    assert compute_mu(ci) == pytest.approx(2.0, abs=1e-12)
    assert compute_chi(ci) == pytest.approx(5 / (2 * SQRT2), abs=1e-12)


@pytest.mark.parametrize("n", [1, 3, 5, 8])
def test_ladder_constants(n):
    ci = extract_cut_interaction(build_coupled_ising_chains(n, 0.4), "chains")
    assert compute_mu(ci) == pytest.approx(2.0 * n, abs=1e-12)
    assert compute_chi(ci) == pytest.approx(SQRT2 * n, abs=1e-12)


def test_single_ising_bond_mu():
    ci = extract_cut_interaction(build_coupled_ising_chains(1), "chains")
    assert compute_mu(ci) == pytest.approx(2.0)


def test_mu_disjoint_path_matches_dense_eigensolve():
    # three rungs fit on 6 qubits: compare the additive path to a brute-force eigensolve
    model = build_coupled_ising_chains(3)
    ci = extract_cut_interaction(model, "chains")
    w = np.linalg.eigvalsh(model.dense_hamiltonian())
    assert compute_mu(ci) == pytest.approx(w[-1] - w[0], abs=1e-12)


def test_mu_capacity():
    # one bond with a 13-site A factor cannot be diagonalized densely
    factors = tuple((s, "z") for s in range(13))
    bond = BondTerm(1.0, PauliTerm(1.0, factors), PauliTerm(1.0, ((13, "x"),)))
    with pytest.raises(CapacityError):
        compute_mu(CutBondInteraction((bond,), tuple(range(13)), (13,)))
    with pytest.raises(ZeroBoundaryError):
        compute_mu(CutBondInteraction((), (0,), (1,)))


@given(st.floats(0.1, 10.0), st.floats(-3.0, 3.0).filter(lambda c: abs(c) > 1e-3))
def test_chi_rescaling_invariance(scale, coefficient):
    a = PauliTerm(1.0, ((0, "x"),))
    b = PauliTerm(1.0, ((1, "y"),))
    base = CutBondInteraction((BondTerm(coefficient, a, b),), (0,), (1,))
    moved = CutBondInteraction((BondTerm(coefficient, a.scaled(scale), b.scaled(1 / scale)),), (0,), (1,))
    assert compute_chi(moved) == pytest.approx(compute_chi(base), rel=1e-12)


# --- bound curves ---------------------------------------------------------


def test_short_time_bound_values():
    assert short_time_lower_bound(0.0, 2.0) == 1.0
    assert short_time_lower_bound(math.pi / 2, 2.0) == pytest.approx(0.0, abs=1e-15)
    assert short_time_lower_bound(math.pi / 4, 2.0) == pytest.approx(0.25, abs=1e-15)
    assert short_time_lower_bound(5.0, 2.0) == pytest.approx(0.0, abs=1e-15)


def test_long_time_bound_values():
    assert long_time_lower_bound(0.0, SQRT2) == 1.0
    assert long_time_lower_bound(1.0, SQRT2) == pytest.approx(0.243117, abs=1e-6)
    assert long_time_lower_bound(7.0, 0.0) == 1.0


def test_crossover_time_values():
    assert crossover_time(2.0, SQRT2) == pytest.approx(0.339837, abs=1e-6)
    assert crossover_time(2.0, 0.0) == 0.0
    assert crossover_time(2.0, 5 / (2 * SQRT2)) == pytest.approx(0.416, abs=1e-3)
    with pytest.raises(DomainError):
        crossover_time(0.0, 1.0)


def test_envelope_values():
    t = np.linspace(0, 3, 31)
    lower, upper = general_purity_envelope(t, 2.0, 1.0)
    np.testing.assert_array_equal(upper, 1.0)
    np.testing.assert_allclose(lower, short_time_lower_bound(t, 2.0), atol=1e-15)
    assert general_purity_envelope(0.0, 2.0, 0.37) == pytest.approx((0.37, 0.37), abs=1e-15)
    # mu = 2, purity0 = 0.5, t = 0.1: phase0 = asin(0.5^(1/4))
    phase0 = math.asin(0.5**0.25)
    lo, hi = general_purity_envelope(0.1, 2.0, 0.5)
    assert lo == pytest.approx(math.sin(phase0 - 0.1) ** 4, abs=1e-15)
    assert hi == pytest.approx(math.sin(min(phase0 + 0.1, math.pi / 2)) ** 4, abs=1e-15)
    assert lo <= 0.5 <= hi
    for bad in (0.0, 1.2):
        with pytest.raises(DomainError):
            general_purity_envelope(0.1, 2.0, bad)


def test_rank_refined_values():
    assert rank_refined_lower_bound(0.0, 3.0, 7) == 1.0
    # floor 1/l_max is reached at tan^2(mu t/2) = l_max - 1 and held afterwards
    assert rank_refined_lower_bound(math.pi / 2, 2.0, 4) == pytest.approx(0.25, abs=1e-15)
    assert rank_refined_lower_bound(100.0, 2.0, 4) == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(DomainError):
        rank_refined_lower_bound(0.1, 2.0, 1)


@pytest.mark.parametrize("n", [1, 2, 4, 6])
def test_rank_refined_is_ghz_purity_on_decreasing_branch(n):
    t = np.linspace(0, math.pi / (4 * n), 40)
    bound = rank_refined_lower_bound(t, 2.0 * n, 2)
    exact = np.array([ghz_ising_purity(n, x) for x in t])
    np.testing.assert_allclose(bound, exact, atol=1e-14)


@pytest.mark.parametrize("n", [1, 3])
def test_rank_refined_never_exceeds_ghz_purity(n):
    t = np.linspace(0, 4.0, 400)
    bound = rank_refined_lower_bound(t, 2.0 * n, 2)
    exact = np.array([ghz_ising_purity(n, x) for x in t])
    assert np.all(bound <= exact + 1e-14)


def _ode_residual(curve, rhs, t, h=1e-6):
    slope = (curve(t + h) - curve(t - h)) / (2 * h)
    return slope - rhs(curve(t))


@pytest.mark.parametrize("mu", [0.7, 2.0, 6.0])
def test_short_time_bound_solves_hardy_ode(mu):
    # the bound saturates dP/dt = -2 mu sqrt(P^{3/2} - P^2) until it reaches zero
    t = np.linspace(0.05, 0.95, 19) * math.pi / mu
    res = _ode_residual(
        lambda x: short_time_lower_bound(x, mu),
        lambda p: -2 * mu * np.sqrt(np.maximum(p**1.5 - p**2, 0)),
        t,
    )
    assert np.abs(res).max() < 1e-6 * mu


@pytest.mark.parametrize("l_max", [2, 3, 8, 50])
def test_rank_refined_bound_solves_rank_ode(l_max):
    mu = 2.0
    t_floor = 2 / mu * math.atan(math.sqrt(l_max - 1))
    t = np.linspace(0.05, 0.95, 19) * t_floor
    rhs = np.vectorize(lambda p: -2 * mu * math.sqrt(max(cube_trace_rank_bound(p, l_max) - p * p, 0)))
    res = _ode_residual(lambda x: rank_refined_lower_bound(x, mu, l_max), rhs, t)
    assert np.abs(res).max() < 1e-5


def test_combined_bound_values():
    c = BoundConstants.from_constants(2.0, SQRT2)
    assert combined_lower_bound(0.0, c) == 1.0
    assert combined_lower_bound(c.t1, c) == short_time_lower_bound(c.t1, 2.0)
    value = combined_lower_bound(2.0, c)
    assert value >= math.exp(-2 * SQRT2) and value >= 0.0


@pytest.mark.parametrize("mu,chi", [(2.0, SQRT2), (2.0, 5 / (2 * SQRT2)), (10.0, 5 * SQRT2)])
def test_combined_bound_dominates_and_is_smooth(mu, chi):
    c = BoundConstants.from_constants(mu, chi)
    t = np.linspace(0, 8, 4001)
    combined = combined_lower_bound(t, c)
    best = np.maximum(short_time_lower_bound(t, mu), long_time_lower_bound(t, chi))
    assert np.all(combined >= best - 1e-15)
    h = 1e-7
    left = (np.log(combined_lower_bound(c.t1, c)) - np.log(combined_lower_bound(c.t1 - h, c))) / h
    right = (np.log(combined_lower_bound(c.t1 + h, c)) - np.log(combined_lower_bound(c.t1, c))) / h
    assert left == pytest.approx(-chi, rel=1e-5)
    assert right == pytest.approx(-chi, rel=1e-5)


def test_bound_constants_t1():
    c = BoundConstants.from_constants(2.0, SQRT2, l_max=16)
    assert c.t1 == pytest.approx(2 / 2.0 * math.atan(SQRT2 / 4.0), abs=1e-15)


# --- spectra --------------------------------------------------------------


def test_spectrum_normalization_rules():
    xi = SchmidtSpectrum([0.25, 0.75 + 5e-11])
    assert xi.values.tolist() == pytest.approx([0.75, 0.25], abs=1e-10)
    assert xi.values.sum() == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        SchmidtSpectrum([0.5, 0.6])
    with pytest.raises(ValueError):
        SchmidtSpectrum([1.1, -0.1])


def test_impurity_accuracy():
    eps = 1e-9
    xi = SchmidtSpectrum([1 - eps, eps])
    assert xi.impurity == pytest.approx(2 * eps * (1 - eps), rel=1e-12)


def test_entropy_floor_values():
    assert entropy_floor(1.0) == 0.0
    for length in (2, 5, 64):
        xi = SchmidtSpectrum(np.full(length, 1 / length))
        assert entropy_floor(xi.purity) == pytest.approx(xi.entropy, abs=1e-12)
    xi = SchmidtSpectrum([0.75, 0.25])
    assert entropy_floor(xi.purity) == pytest.approx(-math.log(0.625), abs=1e-12)
    assert entropy_floor(xi.purity) == pytest.approx(0.470004, abs=1e-6)
    assert xi.entropy == pytest.approx(0.562335, abs=1e-6)
    with pytest.raises(DomainError):
        entropy_floor(0.0)


def test_entropy_floor_property():
    rng = np.random.default_rng(11)
    for xi in dirichlet_spectra(rng, 500):
        assert xi.entropy >= entropy_floor(xi.purity) - 1e-12


def test_theta_values():
    assert theta_factorization(SchmidtSpectrum([1.0])).eigenvalues == (0.0, -0.0)
    uniform = theta_factorization(SchmidtSpectrum(np.full(6, 1 / 6)))
    assert uniform.eigenvalues[0] == pytest.approx(0.0, abs=1e-12)
    fac = theta_factorization(SchmidtSpectrum([0.75, 0.25]))
    dense = np.linalg.eigvalsh(theta_matrix(SchmidtSpectrum([0.75, 0.25])))
    assert fac.eigenvalues[0] == pytest.approx(math.sqrt(3) / 4, abs=1e-12)
    np.testing.assert_allclose(dense, [-math.sqrt(3) / 4, math.sqrt(3) / 4], atol=1e-12)


def test_theta_against_dense_eigensolve():
    rng = np.random.default_rng(3)
    for xi in dirichlet_spectra(rng, 2000):
        theta = theta_matrix(xi)
        w = np.linalg.eigvalsh(theta)
        fac = theta_factorization(xi)
        assert fac.eigenvalues[0] == pytest.approx(w[-1], abs=1e-10)
        assert fac.eigenvalues[1] == pytest.approx(w[0], abs=1e-10)
        assert np.count_nonzero(np.abs(w) > 1e-10) <= 2
        # rank-2 outer-product form reproduces the matrix
        a, b = fac.a_vector, fac.b_vector
        np.testing.assert_allclose(-2j * np.outer(a, b) + 2j * np.outer(b, a), theta, atol=1e-14)
        if fac.eigenvalues[0] > 1e-8:
            q = fac.eigenvectors[0]
            np.testing.assert_allclose(theta @ q, fac.eigenvalues[0] * q, atol=1e-10)


def test_hardy_values():
    assert cube_trace_hardy_bound(SchmidtSpectrum([1.0])) == (1.0, 1.0)
    lhs, rhs = cube_trace_hardy_bound(SchmidtSpectrum([0.5, 0.5]))
    assert (lhs, rhs) == pytest.approx((0.25, 0.5**1.5), abs=1e-15)
    lhs, rhs = cube_trace_hardy_bound(SchmidtSpectrum(np.full(4, 0.25)))
    assert (lhs, rhs) == pytest.approx((1 / 16, 1 / 8), abs=1e-15)


def test_hardy_property():
    rng = np.random.default_rng(5)
    for xi in dirichlet_spectra(rng, 2000):
        lhs, rhs = cube_trace_hardy_bound(xi)
        assert lhs <= rhs + 1e-15
        if xi.purity < 1 - 1e-9:
            assert lhs < rhs


def test_rank_bound_values():
    assert cube_trace_rank_bound(0.5, 2) == pytest.approx(0.25, abs=1e-15)
    for l_max in (2, 3, 10):
        assert cube_trace_rank_bound(1.0, l_max) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(InfeasibleError):
        cube_trace_rank_bound(0.2, 3)


def _max_cube_trace(purity, l_max, rng, restarts=12):
    """Numerical maximum of sum xi^3 on the simplex slice sum xi^2 = purity."""
    cons = [
        {"type": "eq", "fun": lambda x: x.sum() - 1.0},
        {"type": "eq", "fun": lambda x: (x**2).sum() - purity},
    ]
    best = -np.inf
    for _ in range(restarts):
        x0 = rng.dirichlet(np.ones(l_max))
        res = minimize(lambda x: -(x**3).sum(), x0, method="SLSQP", bounds=[(0, 1)] * l_max,
                       constraints=cons, options={"ftol": 1e-14, "maxiter": 500})
        if res.success and abs(res.x.sum() - 1) < 1e-8 and abs((res.x**2).sum() - purity) < 1e-8:
            best = max(best, -res.fun)
    return best


@pytest.mark.parametrize("purity,l_max", [(0.7, 3), (0.4, 4), (0.9, 6), (0.2, 8)])
def test_rank_bound_against_numeric_maximum(purity, l_max):
    rng = np.random.default_rng(17)
    found = _max_cube_trace(purity, l_max, rng)
    assert np.isfinite(found)
    bound = cube_trace_rank_bound(purity, l_max)
    assert bound >= found - 1e-9
    # the bound is attained, not just an upper estimate
    assert bound == pytest.approx(found, abs=1e-6)


def test_rank_bound_property():
    rng = np.random.default_rng(23)
    for xi in dirichlet_spectra(rng, 2000, max_len=32):
        if len(xi) < 2:
            continue
        assert cube_trace_rank_bound(xi.purity, len(xi)) >= xi.cube_trace - 1e-13


@settings(max_examples=200)
@given(st.floats(0.0, 20.0), st.floats(0.0, 10.0), st.floats(0.001, 1.0))
def test_envelope_ordering(t, mu, purity0):
    lower, upper = general_purity_envelope(t, mu, purity0)
    assert 0.0 <= lower <= purity0 + 1e-15
    assert purity0 - 1e-15 <= upper <= 1.0
