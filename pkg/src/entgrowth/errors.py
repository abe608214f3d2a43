"""Exception types raised across the package."""


class InvalidSizeError(ValueError):
    """A lattice or state size is outside the admissible range."""


class InvalidCutError(ValueError):
    """A bipartition cut does not split the lattice into two nonempty parts."""


class ZeroBoundaryError(ValueError):
    """A cut interaction has no bonds crossing the cut."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of a formula."""


class InfeasibleError(DomainError):
    """No spectrum satisfies the requested constraints."""


class CapacityError(RuntimeError):
    """A dense computation would exceed the supported Hilbert-space size."""


class UnsupportedModelError(ValueError):
    """The model contains terms the engine cannot handle."""
