"""Shared exception types."""


class BadgekitError(Exception):
    """Base class for all badgekit errors."""


class ConfigurationError(BadgekitError):
    """A config value violates its documented constraints."""


class EmptyInputError(BadgekitError):
    """An operation that requires data received none."""


class ProtocolError(BadgekitError):
    """Badge/hub exchange reached an inconsistent state (e.g. cursor ahead of badge)."""


class BadgeUnreachableError(BadgekitError):
    """Transient failure talking to a badge; safe to retry."""
