"""Exception hierarchy shared by every module."""


class NscmError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(NscmError):
    """Malformed input text: formula syntax, assignment syntax, JSON schema."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class SemanticError(NscmError):
    """Well-formed input that violates a precondition of the requested operation."""


class ModelError(SemanticError):
    """A model fails validation."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(d.message for d in self.diagnostics)
        super().__init__(f"invalid model: {lines}")


class EnumerationLimitError(SemanticError):
    """An enumeration would exceed the configured size guard."""
