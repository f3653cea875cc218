"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific type that applies rather than bare ValueError.
"""


class DomainError(ValueError):
    """An argument is outside the domain an operation is defined on."""


class CapacityError(RuntimeError):
    """A request is well formed but exceeds a configured resource ceiling."""


class CertificationError(RuntimeError):
    """A predicted multiplicity disagrees with an exhaustive enumeration.

    Carries enough context to report the disagreement without re-running
    the enumeration.
    """

    def __init__(self, message: str, predicted: int, observed: int,
                 target: int, solutions: tuple[int, ...] = ()):
        super().__init__(message)
        self.predicted = predicted
        self.observed = observed
        self.target = target
        self.solutions = solutions
