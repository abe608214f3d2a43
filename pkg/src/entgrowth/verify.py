"""Property suites run by ``entgrowth verify``.

Each check returns a :class:`CheckResult`; the report prints one line per check
in the form ``PASS suite.name detail``.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize

from .bounds import (
    BoundConstants,
    SchmidtSpectrum,
    bound_constants,
    combined_lower_bound,
    compute_chi,
    compute_mu,
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
from .config import DEFAULT_SEED
from .exact import (
    DenseState,
    dense_from_spec,
    dense_trajectory,
    evolve_dense,
    finite_difference_purity_rate,
    purity_rate_formula,
    random_state,
    rate_bound_check,
    reduced_schmidt_spectrum,
)
from .lattice import build_coupled_ising_chains, build_xx_chain, build_xxz_chain, extract_cut_interaction
from .mps import TrotterScheme, TruncationPolicy, evolve_and_sample, mps_from_basis_product

__all__ = [
    "CheckResult",
    "SUITES",
    "random_spectra",
    "spectra_suite",
    "bounds_suite",
    "rate_suite",
    "oracle_suite",
    "oracle_run",
    "run_suites",
    "format_report",
]

RATE_RTOL = 1e-4
RATE_ATOL = 1e-9


class CheckResult(NamedTuple):
    suite: str
    name: str
    passed: bool
    detail: str

    @property
    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.suite}.{self.name} {self.detail}"


def random_spectra(rng: np.random.Generator, count: int, max_len: int = 64) -> list[SchmidtSpectrum]:
    """Dirichlet spectra with random length and concentration (near-pure to near-flat)."""
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_len + 1))
        alpha = 10.0 ** rng.uniform(-2, 1)
        xi = rng.dirichlet(np.full(n, alpha))
        out.append(SchmidtSpectrum(xi / xi.sum()))
    return out


def _max_cube_trace(purity, l_max, rng, restarts=12):
    cons = [
        {"type": "eq", "fun": lambda x: x.sum() - 1.0},
        {"type": "eq", "fun": lambda x: (x**2).sum() - purity},
    ]
    best = -np.inf
    for _ in range(restarts):
        res = minimize(lambda x: -(x**3).sum(), rng.dirichlet(np.ones(l_max)), method="SLSQP",
                       bounds=[(0, 1)] * l_max, constraints=cons, options={"ftol": 1e-14, "maxiter": 500})
        if res.success and abs(res.x.sum() - 1) < 1e-8 and abs((res.x**2).sum() - purity) < 1e-8:
            best = max(best, -res.fun)
    return best


def spectra_suite(seed: int = DEFAULT_SEED, n_spectra: int = 10_000) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    spectra = random_spectra(rng, n_spectra)
    theta_err, extra_modes = 0.0, 0
    hardy_viol, hardy_strict = 0.0, True
    rank_viol, entropy_viol = 0.0, 0.0
    for xi in spectra:
        fac = theta_factorization(xi)
        dense = np.linalg.eigvalsh(theta_matrix(xi))
        theta_err = max(theta_err, abs(dense[-1] - fac.eigenvalues[0]), abs(dense[0] - fac.eigenvalues[1]))
        extra_modes = max(extra_modes, int(np.count_nonzero(np.abs(dense) > 1e-10)) - 2)
        lhs, rhs = cube_trace_hardy_bound(xi)
        hardy_viol = max(hardy_viol, lhs - rhs)
        # the gap closes like (1 - purity)^2, so strictness is checked away from purity 1
        if xi.impurity > 1e-5 and rhs - lhs <= 1e-12:
            hardy_strict = False
        if len(xi) >= 2:
            rank_viol = max(rank_viol, xi.cube_trace - cube_trace_rank_bound(xi.purity, len(xi)))
        entropy_viol = max(entropy_viol, entropy_floor(max(xi.purity, 1e-300)) - xi.entropy)
    cases = [(0.7, 3), (0.4, 4), (0.9, 6), (0.2, 8), (0.5, 2)]
    lagrange_gap = min(cube_trace_rank_bound(p, n) - _max_cube_trace(p, n, rng) for p, n in cases)
    return [
        CheckResult("spectra", "theta_eigenvalues", theta_err <= 1e-10 and extra_modes <= 0,
                    f"max_err={theta_err:.2e} extra_modes={max(extra_modes, 0)} n={n_spectra}"),
        CheckResult("spectra", "hardy", hardy_viol <= 1e-15 and hardy_strict,
                    f"max_violation={hardy_viol:.2e} strict_unless_pure={hardy_strict}"),
        CheckResult("spectra", "rank_inequality", rank_viol <= 1e-13, f"max_violation={rank_viol:.2e}"),
        CheckResult("spectra", "rank_vs_numeric_max", lagrange_gap >= -1e-9,
                    f"min(bound-max)={lagrange_gap:.2e} cases={len(cases)}"),
        CheckResult("spectra", "entropy_floor", entropy_viol <= 1e-12, f"max_violation={entropy_viol:.2e}"),
    ]


def _reference_constants() -> list[tuple[str, BoundConstants]]:
    out = [
        ("xx", bound_constants(extract_cut_interaction(build_xx_chain(8), 4), 16)),
        ("xxz", bound_constants(extract_cut_interaction(build_xxz_chain(8, 0.5), 4), 16)),
    ]
    for n in (1, 3, 6):
        ci = extract_cut_interaction(build_coupled_ising_chains(n), "chains")
        out.append((f"ladder{n}", bound_constants(ci, 2**n)))
    return out


def bounds_suite(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    xx = extract_cut_interaction(build_xx_chain(4), 2)
    xxz = extract_cut_interaction(build_xxz_chain(4, 0.5), 2)
    const_err = max(
        abs(compute_mu(xx) - 2), abs(compute_chi(xx) - math.sqrt(2)),
        abs(compute_mu(xxz) - 2), abs(compute_chi(xxz) - 5 / (2 * math.sqrt(2))),
    )
    times = np.linspace(0.0, 10.0, 10_001)
    dominance, envelope, rank_gap = 0.0, 0.0, 0.0
    for _, c in _reference_constants():
        combined = combined_lower_bound(times, c)
        short = short_time_lower_bound(times, c.mu)
        dominance = max(dominance, float(np.max(np.maximum(short, long_time_lower_bound(times, c.chi)) - combined)))
        lower, upper = general_purity_envelope(times, c.mu, 1.0)
        envelope = max(envelope, float(np.max(np.abs(lower - short))), float(np.max(np.abs(upper - 1.0))))
        rank = rank_refined_lower_bound(times, c.mu, c.l_max)
        rank_gap = max(rank_gap, float(np.max(short - rank)), float(np.max(1.0 / c.l_max - rank)))
    return [
        CheckResult("bounds", "constants", const_err <= 1e-12, f"max_err={const_err:.2e}"),
        CheckResult("bounds", "combined_dominance", dominance <= 1e-15, f"max_violation={dominance:.2e}"),
        CheckResult("bounds", "envelope_consistency", envelope <= 1e-15, f"max_err={envelope:.2e}"),
        CheckResult("bounds", "rank_refined_ordering", rank_gap <= 1e-15, f"max_violation={rank_gap:.2e}"),
    ]


def _rate_cases():
    return [
        ("xx8", build_xx_chain(8), 4, dense_from_spec("neel", 8)),
        ("xxz10", build_xxz_chain(10, 0.5), 5, dense_from_spec("neel", 10)),
        ("ladder4", build_coupled_ising_chains(4, 0.7), "chains", dense_from_spec("w:2", 4)),
    ]


def rate_suite(seed: int = DEFAULT_SEED, times_per_model: int = 20, n_random: int = 100) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    worst, count = 0.0, 0
    bound_viol = 0.0
    for _, model, cut, start in _rate_cases():
        ci = extract_cut_interaction(model, cut)
        mu = compute_mu(ci)
        times = np.sort(rng.uniform(0.05, 3.0, times_per_model))
        for state in dense_trajectory(start, model, times):
            rate = purity_rate_formula(state, ci)
            fd = finite_difference_purity_rate(state, model, cut)
            worst = max(worst, abs(rate - fd) / (RATE_RTOL * abs(fd) + RATE_ATOL))
            r, b = rate_bound_check(state, ci, mu)
            bound_viol = max(bound_viol, r - b)
            count += 1
    cases = _rate_cases()
    for k in range(n_random):
        _, model, cut, _ = cases[k % len(cases)]
        ci = extract_cut_interaction(model, cut)
        psi = random_state(model.n_sites, rng)
        state = evolve_dense(DenseState(psi.amplitudes, model.n_sites, model.geometry), model, rng.uniform(0, 2))
        r, b = rate_bound_check(state, ci, compute_mu(ci))
        bound_viol = max(bound_viol, r - b)
    return [
        CheckResult("rate", "identity", worst <= 1.0,
                    f"max_err/tol={worst:.3f} rtol={RATE_RTOL:g} atol={RATE_ATOL:g} samples={count}"),
        CheckResult("rate", "rate_bound", bound_viol <= 1e-8,
                    f"max(rate-bound)={bound_viol:.2e} samples={count + n_random}"),
    ]


def oracle_run(model_name: str, n_sites: int, *, t_max: float = 1.5, sample_interval: float = 0.1,
               dt: float = 0.01, order: int = 4, max_rank: int | None = None) -> CheckResult:
    """TEBD against dense evolution for a Néel start on an ``n_sites`` chain."""
    model = build_xx_chain(n_sites) if model_name == "xx" else build_xxz_chain(n_sites, 0.5)
    cut = n_sites // 2
    rank = max_rank or 2 ** (n_sites // 2)
    record = evolve_and_sample(mps_from_basis_product("ud" * (n_sites // 2) + "u" * (n_sites % 2)), model,
                               t_max, sample_interval, TrotterScheme(order, dt), TruncationPolicy(rank, 1e-12), cut)
    states = dense_trajectory(dense_from_spec("neel", n_sites), model, record.times)
    spectra = [reduced_schmidt_spectrum(s, cut) for s in states]
    dp = float(np.max(np.abs(record.purity - [x.purity for x in spectra])))
    ds = float(np.max(np.abs(record.entropy - [x.entropy for x in spectra])))
    constants = bound_constants(extract_cut_interaction(model, cut))
    dominated = bool(np.all(record.purity >= combined_lower_bound(record.times, constants) - 1e-9))
    floor = bool(np.all(record.entropy >= entropy_floor(record.purity) - 1e-12))
    return CheckResult("oracle", f"{model_name}{n_sites}", dp <= 1e-6 and ds <= 1e-6 and dominated and floor,
                       f"purity_err={dp:.2e} entropy_err={ds:.2e} bound_ok={dominated} floor_ok={floor}")


def oracle_suite(seed: int = DEFAULT_SEED, runs: Sequence[tuple[str, int]] = ()) -> list[CheckResult]:
    """One check per configured ``(model, n_sites)`` run; no runs is a vacuous pass."""
    results = [oracle_run(name, n) for name, n in runs]
    if not results:
        results.append(CheckResult("oracle", "runs", True, "vacuous (no runs configured)"))
    return results


SUITES: dict[str, Callable[..., list[CheckResult]]] = {
    "spectra": spectra_suite,
    "bounds": bounds_suite,
    "rate": rate_suite,
    "oracle": oracle_suite,
}


def run_suites(names: Sequence[str], seed: int = DEFAULT_SEED, oracle_runs=()) -> list[CheckResult]:
    results = []
    for name in names:
        if name == "oracle":
            results += oracle_suite(seed, oracle_runs)
        else:
            results += SUITES[name](seed)
    return results


def format_report(results: Sequence[CheckResult]) -> str:
    passed = sum(r.passed for r in results)
    lines = [r.line for r in results]
    lines.append(f"SUMMARY {passed}/{len(results)} passed")
    return "\n".join(lines) + "\n"
