"""Exception hierarchy shared by all modules."""


class PairLabError(Exception):
    pass


class DomainError(PairLabError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class OrderingError(DomainError):
    """A pair was passed with the strong user weaker than the weak user."""


class SingularityError(PairLabError, ArithmeticError):
    """A denominator vanished (to within 1e-12)."""


class FeasibilityError(PairLabError):
    """The admissible power-split interval for a pair is empty."""


class ConfigError(PairLabError, ValueError):
    pass
