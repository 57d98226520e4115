class LinkObsError(Exception):
    """Base class for every error raised by linkobs."""


class InputError(LinkObsError):
    """Bad user input: malformed diagrams, violated preconditions, bad configuration."""


class DiagramSyntaxError(InputError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DiagramValidationError(InputError):
    pass


class PreconditionError(InputError):
    pass


class CrossingBoundError(InputError):
    pass


class ConfigError(InputError):
    pass


class InternalAssertionError(LinkObsError):
    """A self-check failed. Indicates a bug, never bad input."""


class ConventionError(InternalAssertionError):
    """Two independent routes to the same invariant disagree."""
