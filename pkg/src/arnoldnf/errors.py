"""Exception types shared across the package."""


class ParseError(ValueError):
    """Raised when a polynomial string cannot be parsed.

    Carries the character position of the failure and a short note on
    what was expected there.
    """

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Rejection(Exception):
    """Raised when the input germ lies outside the classified range.

    `reason` is one of "corank>2", "modality>2", "non-isolated".
    """

    def __init__(self, reason, detail=""):
        self.reason = reason
        self.detail = detail
        msg = reason if not detail else f"{reason}: {detail}"
        super().__init__(msg)


class PipelineError(RuntimeError):
    """Internal invariant violation: a step produced a state it promised
    it never would.  Seeing this means a bug, not a bad input."""
