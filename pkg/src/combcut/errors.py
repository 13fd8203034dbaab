"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all combcut errors."""


class InvalidInput(ToolkitError, ValueError):
    """Malformed argument: bad dimensions, wires out of range, parse failures."""


class WidthCapExceeded(ToolkitError):
    """A dense path was asked to handle more wires than its compile-time cap."""

    def __init__(self, n: int, cap: int, what: str = "dense simulation"):
        self.n = n
        self.cap = cap
        super().__init__(f"{what} capped at {cap} wires, got {n}")


class TermBudgetExceeded(ToolkitError):
    """A cut would produce more terms than the caller allowed."""

    def __init__(self, term_count: int, budget: int):
        self.term_count = term_count
        self.budget = budget
        super().__init__(
            f"cut needs {term_count} terms, exceeding the budget of {budget}"
        )


class DecompositionError(ToolkitError):
    """A cut decomposition failed validation against its reference gates."""


class SvdError(ToolkitError):
    """Singular value decomposition did not converge."""


class SamplingFailure(ToolkitError):
    """A randomized search exhausted its trial budget."""

    def __init__(self, tries: int, reason: str):
        self.tries = tries
        super().__init__(f"no admissible sample found in {tries} tries: {reason}")
