"""Run configurations read from flat ``key = value`` files.

Lines are ``key = value``; ``#`` starts a comment, blank lines are ignored and
keys may use ``-`` or ``_``.  Values given on the command line take precedence
over the file.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .exact import MAX_DENSE_SITES
from .lattice import LADDER

__all__ = [
    "ConfigError",
    "RunConfig",
    "ScalingConfig",
    "DEFAULT_SEED",
    "parse_key_values",
    "read_config_file",
]

DEFAULT_SEED = 20240917

MODELS = ("xx", "xxz", "coupled-ising")
CHAIN_STATES = ("neel", "all-down", "product-updown")
LADDER_STATES = ("product-updown", "basis-product", "ghz-x", "w")
ENGINES = ("mps", "dense")


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


def parse_key_values(text: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def read_config_file(path) -> dict[str, str]:
    return parse_key_values(Path(path).read_text(encoding="utf-8"))


def _convert(name, kind, value):
    if value is None or isinstance(value, str) and value.lower() in ("", "none"):
        return None
    if not isinstance(value, str):
        return value
    try:
        if kind is int:
            return int(value)
        if kind is float:
            return float(value)
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {value!r} as {kind.__name__}") from None
    return value


def _field_kind(annotation: str):
    for kind in (int, float):
        if kind.__name__ in annotation and "str" not in annotation:
            return kind
    return str


class _FlatConfig:
    @classmethod
    def field_kinds(cls) -> dict[str, type]:
        return {f.name: _field_kind(str(f.type)) for f in dataclasses.fields(cls)}

    @classmethod
    def from_mapping(cls, values: dict):
        kinds = cls.field_kinds()
        unknown = sorted(set(values) - set(kinds))
        if unknown:
            raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")
        parsed = {k: _convert(k, kinds[k], v) for k, v in values.items()}
        parsed = {k: v for k, v in parsed.items() if v is not None}
        config = cls(**parsed)
        config.validate()
        return config

    @classmethod
    def load(cls, path=None, overrides: Optional[dict] = None):
        values = read_config_file(path) if path else {}
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_mapping(values)

    def validate(self):
        raise NotImplementedError


@dataclass(frozen=True)
class RunConfig(_FlatConfig):
    """One simulation run.

    ``cut`` is a bond index (A = sites left of it) or ``chains`` for the ladder;
    by default the middle bond, or the chain split for ladders.  ``l_max``
    defaults to the smaller of the two subsystem dimensions.
    """

    model: str = "xx"
    n_sites: Optional[int] = None
    n_rungs: Optional[int] = None
    delta: float = 0.5
    intra_coupling: float = 0.0
    initial_state: str = "neel"
    cut: Optional[str] = None
    dt: float = 0.01
    t_max: float = 1.0
    sample_interval: float = 0.05
    max_rank: int = 64
    discard_tolerance: float = 1e-12
    trotter_order: int = 2
    engine: str = "mps"
    l_max: Optional[int] = None
    output_path: Optional[str] = None
    seed: int = DEFAULT_SEED

    @property
    def geometry(self) -> str:
        return LADDER if self.model == "coupled-ising" else "chain"

    @property
    def total_sites(self) -> int:
        if self.model == "coupled-ising":
            return 2 * self.n_rungs
        return self.n_sites

    @property
    def resolved_cut(self):
        if self.cut is None:
            return "chains" if self.geometry == LADDER else self.n_sites // 2
        if self.cut in ("chains", "chain-split"):
            return "chains"
        try:
            return int(self.cut)
        except ValueError:
            raise ConfigError(f"cut must be a bond index or 'chains', got {self.cut!r}") from None

    def validate(self):
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.engine not in ENGINES:
            raise ConfigError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        if self.model == "coupled-ising":
            if self.n_rungs is None and self.n_sites is not None:
                if self.n_sites % 2:
                    raise ConfigError("a ladder needs an even number of sites")
                object.__setattr__(self, "n_rungs", self.n_sites // 2)
            if self.n_rungs is None or self.n_rungs < 1:
                raise ConfigError("coupled-ising needs n_rungs >= 1")
            kind = self.initial_state.split(":", 1)[0]
            if kind not in LADDER_STATES:
                raise ConfigError(f"initial_state for the ladder must be one of {LADDER_STATES}")
            if self.engine == "mps":
                raise ConfigError("the chain split is not an MPS bond; use engine = dense for the ladder")
        else:
            if self.n_sites is None or self.n_sites < 2:
                raise ConfigError("chain models need n_sites >= 2")
            if self.initial_state not in CHAIN_STATES:
                raise ConfigError(f"initial_state for chains must be one of {CHAIN_STATES}")
        for name in ("dt", "sample_interval"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.t_max < 0:
            raise ConfigError("t_max must be non-negative")
        if self.max_rank < 1:
            raise ConfigError("max_rank must be at least 1")
        if self.trotter_order not in (2, 4):
            raise ConfigError("trotter_order must be 2 or 4")
        if self.engine == "dense" and self.total_sites > MAX_DENSE_SITES:
            raise ConfigError(f"engine = dense supports at most {MAX_DENSE_SITES} sites")
        if self.l_max is not None and self.l_max < 2:
            raise ConfigError("l_max must be at least 2")
        self.resolved_cut


@dataclass(frozen=True)
class ScalingConfig(_FlatConfig):
    """Short-time boundary-size sweep over ladders of ``n_min..n_max`` rungs.

    ``state_family`` is ``product``, ``ghz-x``, ``w`` (``p = N // 2`` flips) or ``w:p``.
    """

    state_family: str = "product"
    n_min: int = 2
    n_max: int = 8
    t_probe: float = 0.001
    intra_coupling: float = 0.0
    output_path: Optional[str] = None
    seed: int = DEFAULT_SEED

    def state_kind(self, n: int) -> str:
        if self.state_family == "product":
            return "basis-product"
        if self.state_family == "w":
            return f"w:{n // 2}"
        return self.state_family

    def validate(self):
        family = self.state_family.split(":", 1)[0]
        if family not in ("product", "ghz-x", "w"):
            raise ConfigError(f"state_family must be product, ghz-x, w or w:p, got {self.state_family!r}")
        if self.n_min < 1 or self.n_max < self.n_min:
            raise ConfigError("need 1 <= n_min <= n_max")
        if 2 * self.n_max > MAX_DENSE_SITES:
            raise ConfigError(f"n_max must be at most {MAX_DENSE_SITES // 2} rungs")
        if not self.t_probe > 0:
            raise ConfigError("t_probe must be positive")

