"""Exceptions shared by more than one orcline module."""


class BoundExceeded(Exception):
    """A configured exploration or enumeration bound was exceeded.

    Raised by the run loop (step bound), product enumeration (feature
    bound) and product derivation (optional-transition bound).  The
    ``partial`` attribute, when not None, carries whatever result had
    been assembled before the bound tripped (e.g. a truncated trace).
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
