"""Exception types raised across the package."""


class LincdError(Exception):
    """Base class for all package errors."""


class InvalidInputError(LincdError, ValueError):
    pass


class DegenerateInputError(InvalidInputError):
    pass


class InvalidOrderError(InvalidInputError):
    pass


class InvalidModelError(InvalidInputError):
    pass


class InvalidConfigError(InvalidInputError):
    pass


class InsufficientSamplesError(InvalidInputError):
    pass


class RankDeficientError(LincdError):
    def __init__(self, message, row=None):
        self.row = row
        super().__init__(message)


class NotPositiveDefiniteError(LincdError):
    """Cholesky breakdown; ``pivot`` is the 0-based failing pivot."""

    def __init__(self, pivot, value, context=None):
        self.pivot = pivot
        self.value = value
        self.context = context
        where = "" if context is None else f" (context {context})"
        super().__init__(f"matrix is not positive definite: pivot {pivot} = {value:.3e}{where}")


class InconsistentRankError(LincdError):
    def __init__(self, ranks):
        self.ranks = list(ranks)
        super().__init__(f"contexts disagree on the latent rank: {self.ranks}")


class AmbiguousObservationalError(LincdError):
    def __init__(self, tied, scores):
        self.tied = list(tied)
        self.scores = list(scores)
        super().__init__(f"observational context is ambiguous: contexts {self.tied} tie "
                         f"with deviation score {min(self.scores)}")


class NotInModelError(LincdError):
    """The input violates the model assumptions the exact algorithms rely on."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)


class AmbiguousGroupingWarning(UserWarning):
    pass
