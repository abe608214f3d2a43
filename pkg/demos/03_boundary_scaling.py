"""Short-time purity loss against the size of the boundary.

At small t, 1 - P(t) ~ C N^k t^2.  A product start gives k = 1 (each rung
contributes independently), the GHZ start gives k = 2 (the rungs act
coherently), and a W start sits in between.  Settings match
demos/configs/fig3.cfg.

Run: python3 demos/03_boundary_scaling.py
"""

from entgrowth.config import ScalingConfig
from entgrowth.experiments import scaling_sweep

for family in ("product", "ghz-x", "w"):
    result = scaling_sweep(ScalingConfig(state_family=family, n_min=2, n_max=8, t_probe=1e-3))
    values = ", ".join(f"{v:.3e}" for _, v in result.rows)
    print(f"{family:>8}: slope {result.slope:.4f}   1-P = [{values}]")
