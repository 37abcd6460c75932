"""Exception hierarchy shared by every module."""


class DiffsetlabError(Exception):
    """Base class for all library errors."""


class PointOutOfBox(DiffsetlabError, ValueError):
    def __init__(self, point, box):
        super().__init__(f"point {tuple(point)} lies outside [1,{box.n}]^{box.d}")
        self.point = tuple(point)


class BoxMismatch(DiffsetlabError, ValueError):
    pass


class InvalidConfiguration(DiffsetlabError, ValueError):
    pass


class DomainTooSmall(DiffsetlabError, ValueError):
    """N is too small for the requested search (N < s, N0 < 2, or a failed largeness check).

    ``violation`` carries ``(i, j, r)`` when a polynomial entry exceeds 2N on the
    search domain.
    """

    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class BudgetExceeded(DiffsetlabError, RuntimeError):
    def __init__(self, needed, budget):
        super().__init__(f"enumeration needs {needed} elementary steps, budget is {budget}")
        self.needed = needed
        self.budget = budget


class IndexOverflow(DiffsetlabError, OverflowError):
    pass
