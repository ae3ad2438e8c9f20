"""Exception hierarchy shared across the package."""


class QpkcError(Exception):
    """Base class for package-specific failures."""


class DecodingFailure(QpkcError):
    """Syndrome decoding could not produce a verified error vector."""


class KeyFormatError(QpkcError):
    """Key file is malformed or fails its structural invariants on load."""


class StateFormatError(QpkcError):
    """State file is malformed or describes an invalid state."""


class ProtocolError(QpkcError):
    """An invariant of the encode/decode pipeline was violated at runtime."""
