"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the command line
front end can map failures to named exit diagnostics.
"""


class CurrentsLabError(Exception):
    """Base class for all library errors."""

    code = "error"


class ParseError(CurrentsLabError):
    """Rejected literal input; remembers the offending position."""

    code = "parse-error"

    def __init__(self, text: str, position: int, message: str):
        self.text = text
        self.position = position
        super().__init__(f"{message} (position {position} in {text!r})")


class BasisMismatchError(CurrentsLabError):
    code = "basis-mismatch"


class IdentityElementError(CurrentsLabError):
    code = "identity-element"


class ZeroCurrentError(CurrentsLabError):
    code = "zero-current"


class RankError(CurrentsLabError):
    code = "rank-too-small"


class LevelMismatchError(CurrentsLabError):
    code = "level-mismatch"


class AllEllipticError(CurrentsLabError):
    code = "all-elliptic"


class NotStabilizedError(CurrentsLabError):
    """Limit evaluation ran out of iterations before the window settled."""

    code = "not-stabilized"

    def __init__(self, message: str, sequence=()):
        self.sequence = tuple(sequence)
        super().__init__(message)


class AutomorphismTableError(CurrentsLabError):
    code = "bad-automorphism-table"
