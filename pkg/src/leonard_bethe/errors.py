"""Exception hierarchy shared by all modules."""


class LeonardBetheError(Exception):
    """Base class for library errors."""


class DomainError(LeonardBetheError, ValueError):
    """An argument sits on a pole or outside the function's domain."""


class SingularSeries(LeonardBetheError):
    """A denominator Pochhammer factor vanishes before the series terminates."""


class DegenerateParams(LeonardBetheError):
    """Parameters violate the Leonard-triple nondegeneracy conditions.

    ``condition`` names the violated condition, e.g. ``"(i)"`` or ``"(ii)"``.
    """

    def __init__(self, message: str, condition: str = ""):
        super().__init__(message)
        self.condition = condition


class ConfigError(LeonardBetheError):
    """Malformed parameter file or option."""


class SolverFailure(LeonardBetheError):
    """No admissible Bethe root set was found within the multistart budget."""


class AmbiguousSolution(LeonardBetheError):
    """More admissible homogeneous solutions were found than uniqueness allows."""


class NoMatchingLevel(LeonardBetheError):
    """No inhomogeneous solution reproduces the requested eigenvalue."""


class KindMismatch(LeonardBetheError):
    """A root set of the wrong kind was supplied."""


class InterpolationDegenerate(LeonardBetheError):
    """Interpolation nodes collide."""


class RootExtractionFailure(LeonardBetheError):
    """Polynomial roots could not be extracted to the required accuracy."""


class RankDeficiencyUnexpected(LeonardBetheError):
    """A linear system does not have the expected rank."""


class SpinMismatch(LeonardBetheError):
    """An operation specific to one spin was called with another."""
