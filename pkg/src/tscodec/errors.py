"""Exception types shared across the package."""


class TscodecError(Exception):
    """Base class for all tscodec errors."""


class FormatError(TscodecError):
    """Compressed payload, header, or container bytes are malformed."""


class TruncatedStreamError(FormatError):
    """A decoder ran off the end of a bit or byte stream."""


class UnknownBackendError(TscodecError):
    """Backend id is not in the registry."""


class BackendUnavailableError(TscodecError):
    """Backend is registered but its library is not importable here."""
