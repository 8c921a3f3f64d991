"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ContractViolation(ValueError):
    """A precondition on a state (typically normalization) does not hold."""


class DegenerateStateError(ValueError):
    """The state carries no phase information (e.g. pure vacuum)."""


class DivergenceError(ArithmeticError):
    """A sensitivity diverges at the requested point."""


class UnsupportedMixtureError(ValueError):
    """Mixture components share photon-number sectors."""
