"""Exception hierarchy shared by every detlab module."""


class DetlabError(Exception):
    """Base class for domain errors (CLI maps these to exit status 1)."""


class DimensionError(DetlabError, ValueError):
    pass


class DomainError(DetlabError, ValueError):
    """An argument lies outside the documented parameter range."""


class BudgetExceeded(DetlabError):
    """Exhaustive procedure refused because the instance is too large."""


class NoNonorthogonalPair(DetlabError):
    """Row shortening found every pair in R orthogonal while 4|R| > 3n."""


class UnclassifiableRow(DetlabError):
    pass


class InvariantViolation(DetlabError):
    pass
