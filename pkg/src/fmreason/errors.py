"""Exception hierarchy shared by all fmreason modules."""


class FmrError(Exception):
    """Base class for all errors raised by this package."""


class TypeCompatibilityError(FmrError):
    """A value pair or a (variable, mode) pairing mixes real and Boolean types."""


class ModelFormatError(FmrError):
    """The model document is not syntactically well formed."""


class ModelValidationError(FmrError):
    """A structurally parsed model violates one or more invariants."""

    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"invalid model: {lines}")


class CatalogueError(FmrError):
    """A component model cannot be built for the requested configuration."""


class UnsupportedEffectError(CatalogueError):
    """The requested output failure mode does not exist for this component kind."""


class UnreachableEffectError(CatalogueError):
    """The requested output failure mode can never occur under the given knowledge."""


class DnfCapError(FmrError):
    """Disjunctive normalization exceeded the configured term cap."""

    def __init__(self, cap, count):
        self.cap = cap
        self.count = count
        super().__init__(f"DNF term count {count} exceeds cap {cap}")


class EngineError(FmrError):
    """Backward reasoning failed on a structural precondition."""


class OracleError(FmrError):
    """The fault simulator was asked to do something it cannot do."""


class ImpactError(FmrError):
    """An impact query or mode comparison is ill-typed."""
