"""Exception types shared across the package."""


class NetsampleError(Exception):
    """Base class for all errors raised by netsample."""


class ValidationError(NetsampleError):
    """Invalid input value or inconsistent arguments."""


class ParseError(ValidationError):
    """Malformed input file."""

    def __init__(self, message, path=None, line_no=None):
        self.path = path
        self.line_no = line_no
        if line_no is not None:
            message = f"{path or '<input>'}:{line_no}: {message}"
        super().__init__(message)


class PartialSampleError(NetsampleError):
    """A sampler could not reach the requested size.

    Carries whatever was collected so callers can decide whether a partial
    sample is still usable.
    """

    def __init__(self, message, nodes, tags=None, counters=None):
        super().__init__(message)
        self.nodes = list(nodes)
        self.tags = list(tags) if tags is not None else ["?"] * len(self.nodes)
        self.counters = dict(counters or {})


class DanglingCandidateError(NetsampleError):
    """A zero-out-degree node was offered where the criterion forbids it."""


class UndefinedCorrelationError(NetsampleError):
    """Rank correlation is undefined (a constant input vector)."""


class DegenerateEntropyWarning(UserWarning):
    """Seed-region frequency hit 0 or 1 in the sample; ratio reported as 0."""
