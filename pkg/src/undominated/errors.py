"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid identifiers, malformed profiles, bad parameters."""


class ProfileError(InputError):
    """A profile text could not be parsed.

    ``line`` is the 1-based physical line number, or ``None`` when the
    problem is not tied to a single line.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceeded(RuntimeError):
    """An enumeration would visit more nodes than the configured budget."""


class NotConverged(RuntimeError):
    """The lottery solver ran out of iterations before meeting its target.

    The best iterate found so far is attached as ``best``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class SamplingExhausted(RuntimeError):
    """A sampling loop used up its resample budget."""
