"""TEBD quench of an XX or XXZ chain from the Neel state, checked against the bounds.

By default this runs a 20-site chain in a few seconds.  Pass a config file to
reproduce a full run, e.g. demos/configs/fig1.cfg (48 sites, bond dimension
128; expect several minutes on one core):

    python3 demos/04_chain_quench.py demos/configs/fig1.cfg

The same run is available as ``entgrowth simulate --config demos/configs/fig1.cfg``.
"""

import sys

import numpy as np

from entgrowth.bounds import entropy_floor
from entgrowth.config import RunConfig
from entgrowth.experiments import SIMULATE_HEADER, simulate

overrides = {} if len(sys.argv) > 1 else {"model": "xxz", "n_sites": "20", "max_rank": "64", "t_max": "2",
                                           "sample_interval": "0.25"}
config = RunConfig.load(sys.argv[1] if len(sys.argv) > 1 else None, overrides)
rows = np.array(simulate(config), dtype=float)
col = {name: i for i, name in enumerate(SIMULATE_HEADER)}

print(f"{config.model} chain, {config.n_sites} sites, cut at bond {config.resolved_cut}")
print("   t    purity    combined bound   entropy   S floor   discarded")
for r in rows[:: max(1, len(rows) // 10)]:
    floor = entropy_floor(r[col["purity"]])
    print(f"{r[0]:4.2f}  {r[col['purity']]:.6f}  {r[col['bound_combined']]:.6f}        "
          f"{r[col['entropy']] + 0.0:.4f}   {floor:.4f}   {r[col['trunc_weight']]:.1e}")
margin = np.min(rows[:, col["purity"]] - rows[:, col["bound_combined"]])
print(f"smallest purity - bound: {margin:.3e} (must not be negative)")
