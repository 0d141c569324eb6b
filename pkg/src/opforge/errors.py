class DomainError(ValueError):
    """Raised when an input violates a structural invariant.

    The message always names the violated invariant so CLI users and tests
    can tell validation failures apart from usage errors.
    """


class FormatError(ValueError):
    """Raised when a text representation cannot be parsed.

    Carries the token position that broke the parse, when known.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at token {position})"
        super().__init__(message)
        self.position = position
