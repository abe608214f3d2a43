"""Exact chain-vs-chain purities of the two-chain Ising ladder ``H = sum_j X_j X'_j``.

Both formulas are written as ``1 - sin^2(2x)/2`` so that ``1 - purity`` stays
accurate at the ``t ~ 1e-3`` probe times used for boundary-size scaling.
"""

import math

__all__ = [
    "product_ising_purity",
    "ghz_ising_purity",
    "product_ising_impurity",
    "ghz_ising_impurity",
    "short_time_quadratic_coefficient",
]


def _check_rungs(n_rungs):
    if n_rungs < 1:
        raise ValueError(f"n_rungs must be at least 1, got {n_rungs}")


def product_ising_purity(n_rungs: int, t: float) -> float:
    """``(cos^4 t + sin^4 t)^N`` for the all-down (x) all-up start."""
    _check_rungs(n_rungs)
    return (1.0 - 0.5 * math.sin(2 * t) ** 2) ** n_rungs


def product_ising_impurity(n_rungs: int, t: float) -> float:
    _check_rungs(n_rungs)
    return -math.expm1(n_rungs * math.log1p(-0.5 * math.sin(2 * t) ** 2))


def ghz_ising_purity(n_rungs: int, t: float) -> float:
    """``cos^4(N t) + sin^4(N t)`` for the x-basis GHZ (x) GHZ start."""
    _check_rungs(n_rungs)
    return 1.0 - 0.5 * math.sin(2 * n_rungs * t) ** 2


def ghz_ising_impurity(n_rungs: int, t: float) -> float:
    _check_rungs(n_rungs)
    return 0.5 * math.sin(2 * n_rungs * t) ** 2


def short_time_quadratic_coefficient(kind: str, n_rungs: int) -> float:
    """Coefficient ``c`` in ``1 - purity = c t^2 + O(t^4)``."""
    _check_rungs(n_rungs)
    if kind == "product":
        return 2.0 * n_rungs
    if kind in ("ghz", "ghz-x"):
        return 2.0 * n_rungs**2
    raise ValueError(f"unknown state kind {kind!r}")
