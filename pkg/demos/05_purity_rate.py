"""The instantaneous purity rate as a contraction of two matrices.

For a state with Schmidt decomposition sum_a sqrt(xi_a) |a>|a>, the rate
dP/dt equals sum_ab Theta_ab Q_ab, where Theta depends only on the spectrum
and Q collects the boundary-term matrix elements.  This script compares that
formula with a central finite difference and then runs the property suites
behind ``entgrowth verify``.

Run: python3 demos/05_purity_rate.py
"""

from entgrowth import exact, lattice
from entgrowth.bounds import compute_mu
from entgrowth.config import DEFAULT_SEED
from entgrowth.verify import format_report, run_suites

model = lattice.build_xxz_chain(10, 0.5)
bond = lattice.extract_cut_interaction(model, 5)
mu = compute_mu(bond)
states = exact.dense_trajectory(exact.dense_from_spec("neel", 10), model, [0.2, 0.7, 1.5])
for t, state in zip((0.2, 0.7, 1.5), states):
    formula = exact.purity_rate_formula(state, bond)
    fd = exact.finite_difference_purity_rate(state, model, 5)
    rate, cap = exact.rate_bound_check(state, bond, mu)
    print(f"t={t}: formula {formula:+.9f}  finite difference {fd:+.9f}  |rate| {rate:.4f} <= {cap:.4f}")

print()
print(format_report(run_suites(["bounds", "rate"], seed=DEFAULT_SEED)), end="")
