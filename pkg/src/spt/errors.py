class SptError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SptError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ValidationError(SptError):
    pass


class NotFoundError(SptError, LookupError):
    pass


class UnboundPrincipalError(SptError, LookupError):
    """A policy rule names a principal with no host in the topology."""

    def __init__(self, principal_id):
        super().__init__(f"principal {principal_id} is not bound to any host")
        self.principal_id = principal_id
