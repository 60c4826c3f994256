"""Exception types shared across the package."""


class FriendsimError(Exception):
    """Base class for all package-specific errors."""


class UnknownMemberError(FriendsimError, KeyError):
    """A member id was looked up that does not exist in the graph."""

    def __init__(self, member_id):
        super().__init__(member_id)
        self.member_id = member_id

    def __str__(self):
        return f"unknown member id: {self.member_id!r}"


class InvalidPairError(FriendsimError, ValueError):
    """A pair operation was called with an invalid (e.g. identical) pair."""


class ConfigError(FriendsimError, ValueError):
    """A configuration value violates its documented constraints."""


class UnderPopulatedError(FriendsimError, ValueError):
    """The graph has too few eligible members to fill a candidate pool."""


class ParseError(FriendsimError, ValueError):
    """A text artifact could not be parsed. Carries the offending line number."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class FormParseError(ParseError):
    """A sample form could not be parsed."""


class InsufficientDataError(FriendsimError, ValueError):
    """Too few observations for a statistical operation."""


class ValidationError(FriendsimError, ValueError):
    """Inputs to an analysis operation failed validation."""
