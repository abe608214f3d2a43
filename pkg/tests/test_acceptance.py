"""Acceptance criteria, one test each, with tolerances and time budgets pinned below.

Run alone with ``pytest tests/test_acceptance.py -v``; the PASS/FAIL lines are
repeated in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from entgrowth.bounds import (
    bound_constants,
    combined_lower_bound,
    compute_chi,
    compute_mu,
    rank_refined_lower_bound,
)
from entgrowth.closed_forms import ghz_ising_purity, product_ising_purity
from entgrowth.config import ScalingConfig
from entgrowth.exact import (
    dense_from_spec,
    dense_trajectory,
    finite_difference_purity_rate,
    purity_rate_formula,
    reduced_schmidt_spectrum,
)
from entgrowth.experiments import scaling_sweep
from entgrowth.lattice import (
    build_coupled_ising_chains,
    build_xx_chain,
    build_xxz_chain,
    extract_cut_interaction,
)
from entgrowth.mps import TrotterScheme, TruncationPolicy, evolve_and_sample, mps_from_basis_product
from entgrowth.verify import oracle_suite, run_suites

SEED = 20240917

CONSTANT_TOL = 1e-12
LADDER_TOL = 1e-10
SLOPE_TOL = 0.02
SIMILARITY_TOL = 0.05
BOUND_SLACK = 1e-9
CURVATURE_TOL = 0.05
RATE_RTOL = 1e-4


def _chain_purity(states, cut):
    return np.array([reduced_schmidt_spectrum(s, cut).purity for s in states])


def test_1_constants(acceptance):
    start = time.perf_counter()
    xx = extract_cut_interaction(build_xx_chain(48), 24)
    xxz = extract_cut_interaction(build_xxz_chain(48, 0.5), 24)
    errors = [
        abs(compute_mu(xx) - 2.0), abs(compute_chi(xx) - math.sqrt(2)),
        abs(compute_mu(xxz) - 2.0), abs(compute_chi(xxz) - 5 / (2 * math.sqrt(2))),
    ]
    elapsed = time.perf_counter() - start
    ok = max(errors) <= CONSTANT_TOL and elapsed < 1.0
    assert acceptance(1, ok, f"mu/chi max_err={max(errors):.1e} (tol {CONSTANT_TOL:g}) runtime={elapsed:.2f}s (<1s)")


def test_2_ghz_tightness(acceptance):
    start = time.perf_counter()
    rng = np.random.default_rng(SEED)
    formula_err = bound_err = 0.0
    for n in range(2, 7):
        model = build_coupled_ising_chains(n)
        # the rank-2 curve is the GHZ purity on its decreasing branch N t <= pi/4
        for times, against_bound in ((np.sort(rng.uniform(0, 3.0, 50)), False),
                                     (np.sort(rng.uniform(0, math.pi / (4 * n), 50)), True)):
            got = _chain_purity(dense_trajectory(dense_from_spec("ghz-x", n), model, times), "chains")
            exact = np.array([ghz_ising_purity(n, t) for t in times])
            formula_err = max(formula_err, float(np.max(np.abs(got - exact))))
            if against_bound:
                bound_err = max(bound_err, float(np.max(np.abs(got - rank_refined_lower_bound(times, 2 * n, 2)))))
    elapsed = time.perf_counter() - start
    ok = formula_err <= LADDER_TOL and bound_err <= LADDER_TOL and elapsed < 30
    assert acceptance(2, ok, f"N=2..6 |dense-closed form|={formula_err:.1e} |dense-rank bound|={bound_err:.1e} "
                             f"(tol {LADDER_TOL:g}) runtime={elapsed:.1f}s (<30s)")


def test_3_product_ladder(acceptance):
    start = time.perf_counter()
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for n in range(2, 7):
        times = np.sort(rng.uniform(0, 3.0, 50))
        want = np.array([product_ising_purity(n, t) for t in times])
        for intra in (0.0, 0.8):
            states = dense_trajectory(dense_from_spec("basis-product", n), build_coupled_ising_chains(n, intra), times)
            worst = max(worst, float(np.max(np.abs(_chain_purity(states, "chains") - want))))
    elapsed = time.perf_counter() - start
    ok = worst <= LADDER_TOL and elapsed < 30
    assert acceptance(3, ok, f"N=2..6 intra in (0, 0.8) max_err={worst:.1e} (tol {LADDER_TOL:g}) "
                             f"runtime={elapsed:.1f}s (<30s)")


def test_4_boundary_scaling(acceptance):
    start = time.perf_counter()
    slopes = {f: scaling_sweep(ScalingConfig(state_family=f, n_min=2, n_max=8, t_probe=0.001)).slope
              for f in ("product", "ghz-x", "w")}
    elapsed = time.perf_counter() - start
    ok = (abs(slopes["product"] - 1) <= SLOPE_TOL and abs(slopes["ghz-x"] - 2) <= SLOPE_TOL
          and slopes["product"] < slopes["w"] < slopes["ghz-x"] and elapsed < 120)
    assert acceptance(4, ok, f"slopes product={slopes['product']:.4f} ghz-x={slopes['ghz-x']:.4f} "
                             f"w:N/2={slopes['w']:.4f} (tol {SLOPE_TOL:g}, w strictly between) "
                             f"runtime={elapsed:.1f}s (<120s)")


def test_5_chain_quench(acceptance):
    start = time.perf_counter()
    n, scheme, policy = 48, TrotterScheme(2, 0.01), TruncationPolicy(128, 1e-12)
    traces, margins = {}, {}
    for name, model in (("xx", build_xx_chain(n)), ("xxz", build_xxz_chain(n, 0.5))):
        rec = evolve_and_sample(mps_from_basis_product("ud" * (n // 2)), model, 4.0, 0.05, scheme, policy, n // 2)
        constants = bound_constants(extract_cut_interaction(model, n // 2))
        margins[name] = float(np.min(rec.purity - combined_lower_bound(rec.times, constants)))
        traces[name] = rec
    elapsed = time.perf_counter() - start
    t = traces["xx"].times
    early = t <= 1.0 + 1e-12
    diff = float(np.max(np.abs(traces["xx"].purity[early] - traces["xxz"].purity[early])))
    initial = max(abs(traces[k].purity[0] - 1.0) for k in traces)
    ok = (min(margins.values()) >= -BOUND_SLACK and initial <= 1e-14 and diff < SIMILARITY_TOL
          and elapsed < 600)
    assert acceptance(5, ok, f"24+24 sites D=128 dt=0.01 order 2: min(purity-bound) xx={margins['xx']:.3e} "
                             f"xxz={margins['xxz']:.3e} (>= -{BOUND_SLACK:g}), |P(0)-1|={initial:.1e}, "
                             f"max|xx-xxz| on t<=1 = {diff:.4f} (<{SIMILARITY_TOL:g}) "
                             f"runtime={elapsed:.0f}s (<600s)")


def test_6_short_time_curvature(acceptance):
    n = 48
    rec = evolve_and_sample(mps_from_basis_product("ud" * (n // 2)), build_xx_chain(n), 0.01, 0.001,
                            TrotterScheme(2, 0.001), TruncationPolicy(128, 1e-12), n // 2)
    t, p = rec.times[1:], rec.purity[1:]
    k = float(np.polyfit(np.log(t), np.log(1 - p), 1)[0])
    ok = abs(k - 2.0) <= CURVATURE_TOL
    assert acceptance(6, ok, f"TEBD Neel XX fit on t in [0.001, 0.01]: k={k:.4f} (2 +- {CURVATURE_TOL:g})")


def test_7_rate_identity(acceptance):
    rng = np.random.default_rng(SEED + 7)
    cases = [
        (build_xx_chain(8), 4, dense_from_spec("neel", 8)),
        (build_xxz_chain(10, 0.5), 5, dense_from_spec("neel", 10)),
        (build_coupled_ising_chains(4, 0.7), "chains", dense_from_spec("w:2", 4)),
    ]
    worst, count = 0.0, 0
    for model, cut, start in cases:
        bond = extract_cut_interaction(model, cut)
        for state in dense_trajectory(start, model, np.sort(rng.uniform(0.05, 3.0, 20))):
            fd = finite_difference_purity_rate(state, model, cut, delta=1e-5)
            worst = max(worst, abs(purity_rate_formula(state, bond) - fd) / abs(fd))
            count += 1
    ok = worst <= RATE_RTOL and count >= 50
    assert acceptance(7, ok, f"XX8/XXZ10/ladder8 at {count} times: max rel err={worst:.1e} (tol {RATE_RTOL:g})")


def test_8_property_suites(acceptance):
    start = time.perf_counter()
    results = run_suites(["spectra", "bounds", "rate"], seed=SEED) + oracle_suite(SEED, [("xx", 14)])
    elapsed = time.perf_counter() - start
    failed = [r.line for r in results if not r.passed]
    ok = not failed and elapsed < 60
    detail = "; ".join(failed) if failed else f"{len(results)} checks passed"
    assert acceptance(8, ok, f"{detail} runtime={elapsed:.1f}s (<60s)")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
