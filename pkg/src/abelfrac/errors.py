"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain a routine is defined on."""


class EvaluationError(RuntimeError):
    """A user-supplied function returned a non-finite sample.

    Carries the offending abscissa in ``t``.
    """

    def __init__(self, message: str, t: float):
        super().__init__(message)
        self.t = t


class ContinuityError(ValueError):
    """Adjacent piecewise segments disagree at a breakpoint.

    ``index`` is the breakpoint index, ``mismatch`` the absolute gap.
    """

    def __init__(self, index: int, mismatch: float):
        super().__init__(
            f"segments {index} and {index + 1} disagree at their shared "
            f"breakpoint (gap {mismatch:.3e})"
        )
        self.index = index
        self.mismatch = mismatch


class InfeasibleCurveError(RuntimeError):
    """Arc length grows slower than height somewhere: no real curve exists.

    ``x`` is a height at which the slope condition s'(x) >= 1 fails.
    """

    def __init__(self, x: float, slope: float):
        super().__init__(
            f"s'(x) = {slope:.6g} < 1 at x = {x:.6g}; arc length cannot "
            "grow slower than height"
        )
        self.x = x
        self.slope = slope


class ConvergenceError(RuntimeError):
    """An iterative routine failed to reach its tolerance."""


class FunctionParseError(ValueError):
    """A textual function spec failed to parse.

    ``position`` is the character offset of the first offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
