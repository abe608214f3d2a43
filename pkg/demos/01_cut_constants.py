"""How fast can entanglement across a cut grow?

Every Hamiltonian term that straddles the cut is written as c * (A x B).  Two
numbers summarise that boundary: mu, the largest eigenvalue gap of the
boundary Hamiltonian, and chi, a bound built from the operator norms.  Together
they fix the lower bounds on the purity tr(rho_A^2) at all later times.

Run: python3 demos/01_cut_constants.py
"""

import numpy as np

from entgrowth import bounds, lattice

# %% A 48-site XX chain cut in the middle has a single crossing bond XX + YY.
xx = lattice.extract_cut_interaction(lattice.build_xx_chain(48), 24)
# The XXZ chain adds a ZZ piece across the same bond.
xxz = lattice.extract_cut_interaction(lattice.build_xxz_chain(48, 0.5), 24)

for name, bond in (("XX", xx), ("XXZ delta=1/2", xxz)):
    c = bounds.bound_constants(bond)
    print(f"{name:>14}: {len(bond.bonds)} crossing terms, mu = {c.mu:.6f}, chi = {c.chi:.6f}, t1 = {c.t1:.6f}")

# %% The combined bound follows cos^4(mu t / 2) until t1, then an exponential tail.
c = bounds.bound_constants(xx, l_max=2**24)
t = np.linspace(0, 4, 9)
print("\n   t   short     long      combined")
for ti, s, lo, comb in zip(t, bounds.short_time_lower_bound(t, c.mu), bounds.long_time_lower_bound(t, c.chi),
                           bounds.combined_lower_bound(t, c)):
    print(f"{ti:4.1f}  {s:.6f}  {lo:.6f}  {comb:.6f}")

# %% For a ladder of N rungs, every rung crosses the cut, so mu grows linearly with N.
for n in (2, 4, 8):
    ladder = lattice.extract_cut_interaction(lattice.build_coupled_ising_chains(n, 0.7), "chains")
    print(f"ladder N={n}: mu = {bounds.compute_mu(ladder):.3f}")
