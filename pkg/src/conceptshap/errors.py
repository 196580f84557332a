"""Exception hierarchy shared by the library and the CLI."""


class ConceptShapError(Exception):
    """Base class for all errors raised by conceptshap."""


class ValidationError(ConceptShapError, ValueError):
    """Malformed input data or configuration (CLI exit code 1)."""


class ContractError(ValidationError):
    """A caller violated an operation's precondition."""


class ResourceLimitError(ConceptShapError):
    """A configured size cap would be exceeded (CLI exit code 2)."""

    def __init__(self, what: str, size: int, cap: int, hint: str = ""):
        self.what = what
        self.size = size
        self.cap = cap
        msg = f"{what}: size {size} exceeds cap {cap}"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)


class ParseError(ValidationError):
    """Error while reading an input file, carrying the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyClassError(ValidationError):
    """JSM learning needs at least one positive and one negative example."""

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"no {label} examples in the classification context")
