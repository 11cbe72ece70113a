"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A parameter falls outside its documented domain."""


class NonConvergenceError(RuntimeError):
    """Value iteration ran out of iterations before meeting its tolerance.

    The partially converged :class:`~informatics_game.solver.SolveResult` is
    attached as ``result`` so callers can still inspect it.
    """

    def __init__(self, message, residual, result=None):
        super().__init__(message)
        self.residual = residual
        self.result = result


class GridTooLargeError(ValueError):
    """The brute-force oracle refuses grids above its cell cap."""


class OracleMismatchError(AssertionError):
    """No single stationary policy attains the cell-wise maximum."""


class UndefinedKappaError(ZeroDivisionError):
    """Chance agreement is 1, so Cohen's kappa has a zero denominator."""


class UnknownTopicError(ValueError):
    def __init__(self, code, ad_id):
        super().__init__(f"unknown topic code {code!r} in ad {ad_id!r}")
        self.code = code
        self.ad_id = ad_id


class ConfigError(ValueError):
    """A run configuration failed validation; ``field`` names the culprit."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
