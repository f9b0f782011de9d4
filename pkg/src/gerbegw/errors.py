"""Exception types shared across the package.

Each maps to one CLI exit code.
"""


class GerbeError(Exception):
    exit_code = 1


class VerificationFailure(GerbeError):
    """An identity that must hold exactly did not."""

    exit_code = 1


class InvalidInput(GerbeError, ValueError):
    exit_code = 2


class CapExceeded(GerbeError):
    """A configured size or work cap would be exceeded."""

    exit_code = 3
