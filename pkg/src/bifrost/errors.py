"""Exception types shared across the package."""


class PureStateError(ValueError):
    """The state family is pure (or numerically indistinguishable from pure)
    at the evaluation point, where the mixed-state QFI expression degenerates."""


class DegenerateStateError(ValueError):
    """The superoperator needed for the logarithmic derivative is singular."""


class NoInformationError(ValueError):
    """The QFI vanishes, so no optimal observable can be normalised."""


class NumericalInstabilityError(ArithmeticError):
    """An intermediate quantity left its mathematically guaranteed range by
    more than the configured tolerance."""


class CutoffTooSmallError(ValueError):
    """The requested Fock-space cutoff leaves too much probability mass in
    the truncated tail."""
