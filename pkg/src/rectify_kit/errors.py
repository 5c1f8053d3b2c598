from __future__ import annotations


class RectifyKitError(Exception):
    """Base class for all library errors."""


class InputError(RectifyKitError):
    """Malformed or inconsistent user-supplied data (manifest, matrix shapes,
    incompatible categories).  The command line maps this to exit code 1."""


class ConsistencyError(RectifyKitError):
    """An internal invariant failed.  This signals a bug in the library (for
    example a sign convention error), never a problem with user data."""
