"""Base exceptions shared by all qwres packages."""


class QwresError(Exception):
    """Root of every error raised on purpose by qwres."""


class DomainError(QwresError):
    """Invalid input or a mathematically undefined request (CLI exit code 1)."""


class VerificationError(QwresError):
    """A verification check failed (CLI exit code 2)."""
