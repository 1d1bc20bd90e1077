"""Error types shared across the kernel.

Every error carries a machine-readable ``code`` so batch consumers can
dispatch on it without parsing messages.
"""


class KernelError(Exception):
    """Base class; ``code`` is the stable machine-readable identifier."""

    code = "KernelError"

    def __init__(self, message, span=None):
        super().__init__(message)
        self.message = message
        self.span = span  # (line, col) or None

    def __str__(self):
        if self.span is not None:
            return "%s at %d:%d: %s" % (self.code, self.span[0], self.span[1], self.message)
        return "%s: %s" % (self.code, self.message)


class ParseError(KernelError):
    code = "ParseError"

    def __init__(self, message, span=None, expected=()):
        super().__init__(message, span)
        self.expected = tuple(expected)


class TypeError_(KernelError):
    """Typing failure. Named with a trailing underscore to avoid shadowing
    the builtin; the CLI reports it under its ``code``."""

    code = "TypeError"


class UnboundVariable(TypeError_):
    code = "UnboundVariable"


class UnknownName(TypeError_):
    code = "UnknownName"


class DuplicateVariable(TypeError_):
    code = "DuplicateVariable"


class IllFormedClassifier(TypeError_):
    code = "IllFormedClassifier"


class NotAFunction(TypeError_):
    code = "NotAFunction"


class DomainMismatch(TypeError_):
    code = "DomainMismatch"


class ForbiddenPiFormation(TypeError_):
    code = "ForbiddenPiFormation"


class ExtensionDisabled(TypeError_):
    code = "ExtensionDisabled"


class ConversionFailure(TypeError_):
    code = "ConversionFailure"

    def __init__(self, message, expected_nf=None, actual_nf=None, span=None):
        super().__init__(message, span)
        self.expected_nf = expected_nf
        self.actual_nf = actual_nf


class FuelExhausted(KernelError):
    code = "FuelExhausted"


class NotAKind(TypeError_):
    code = "NotAKind"


class NotAType(TypeError_):
    code = "NotAType"


class NotWellTyped(TypeError_):
    code = "NotWellTyped"


class ImproperFamily(TypeError_):
    code = "ImproperFamily"


class ImproperCertificate(KernelError):
    code = "ImproperCertificate"


class ManifestError(KernelError):
    code = "ManifestError"
